#pragma once

#include <string>
#include <string_view>

#include "phasefit/ph.hpp"
#include "phasefit/types.hpp"

namespace phasefit {

// Parametric time-transformation families. Every family except gev maps the
// positive half-line increasingly onto itself; gev maps it decreasingly onto
// its own support.
enum class TransformFamily {
  pareto,       // g(y) = beta (e^y - 1),              beta > 0
  weibull,      // g(y) = y^(1/beta),                  beta > 0
  lognormal,    // g(y) = exp(y^(1/gamma)) - 1,        gamma > 1
  loglogistic,  // g(y) = gamma (e^y - 1)^(1/theta),   gamma, theta > 0
  gompertz,     // g(y) = log(beta y + 1) / beta,      beta > 0
  gev           // g(y) = mu + sigma (y^-xi - 1) / xi, sigma > 0
};

TransformFamily family_from_string(std::string_view name);
std::string to_string(TransformFamily family);
int family_param_count(TransformFamily family);

// A transformation family together with its validated parameter vector.
class Transform {
 public:
  Transform(TransformFamily family, Vector params);

  TransformFamily family() const { return family_; }
  const Vector& params() const { return params_; }

  // g maps an absorption time y > 0 to the observable scale; g_inv is its
  // inverse, defined on the family's domain. xi values within 1e-10 of zero
  // route gev to its exponential (xi = 0) branch.
  double g(double y) const;
  double g_inv(double x) const;

  // False exactly for gev, whose g is decreasing in y.
  bool increasing() const { return family_ != TransformFamily::gev; }

  bool operator==(const Transform& other) const;

 private:
  TransformFamily family_;
  Vector params_;
};

// Law of g(Y) for phase-type Y: equivalently the absorption time of a Markov
// jump process with intensity lambda(t) S.
class InhomPhaseType {
 public:
  InhomPhaseType(PhaseType base, Transform transform);

  const PhaseType& base() const { return base_; }
  const Transform& transform() const { return transform_; }

 private:
  PhaseType base_;
  Transform transform_;
};

// Family-specific closed-form density and distribution function on the
// family's domain (x > 0 except gev). Out-of-domain arguments raise
// std::domain_error.
double dens(const InhomPhaseType& iph, double x);
double cdf(const InhomPhaseType& iph, double x);
double survival(const InhomPhaseType& iph, double x);

double quantile(const InhomPhaseType& iph, double prob);
double hazard(const InhomPhaseType& iph, double x);

// Fractional moment of the underlying phase-type variable.
double moment(const InhomPhaseType& iph, double theta);

// Weighted log-likelihood with right-censored survival terms.
double loglik(const InhomPhaseType& iph, const Sample& sample);

// Minimum/maximum of two independent variables sharing the same transform
// (family and parameters must match exactly). The result carries the same
// transform over the Kronecker closure of the bases.
InhomPhaseType min_of(const InhomPhaseType& a, const InhomPhaseType& b);
InhomPhaseType max_of(const InhomPhaseType& a, const InhomPhaseType& b);

}  // namespace phasefit

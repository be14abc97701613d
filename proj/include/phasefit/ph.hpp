#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "phasefit/sample.hpp"
#include "phasefit/types.hpp"

namespace phasefit {

// Preset zero-patterns for the sub-intensity matrix and initial vector.
enum class Structure { general, hyperexponential, gerlang, coxian, gcoxian };

Structure structure_from_string(std::string_view name);
std::string to_string(Structure s);

// Distribution of the absorption time of a Markov jump process with p
// transient states: initial probabilities alpha and sub-intensity matrix S.
// Immutable after construction; the constructor validates
//   - alpha >= 0, sum(alpha) = 1 (within 1e-12),
//   - S has negative diagonal, nonnegative off-diagonal, row sums <= 0,
//   - the exit vector s = -S e is nonnegative with at least one positive entry.
class PhaseType {
 public:
  PhaseType(Vector alpha, Matrix s);

  // Randomly parameterized model with the given zero-pattern. Off-diagonal
  // and exit rates are i.i.d. uniform(0,1); each diagonal entry is minus its
  // row total; a free alpha is drawn uniform and normalized. Deterministic
  // for a fixed seed.
  static PhaseType random(Structure structure, int dimension,
                          std::uint64_t seed);

  int dim() const { return static_cast<int>(alpha_.size()); }
  const Vector& alpha() const { return alpha_; }
  const Matrix& S() const { return s_; }
  const Vector& exit_rates() const { return exit_; }

 private:
  Vector alpha_;
  Matrix s_;
  Vector exit_;
};

// Density  f(x) = alpha exp(S x) s,  x > 0.
double dens(const PhaseType& ph, double x);

// Distribution function  F(x) = 1 - alpha exp(S x) e,  x > 0.
double cdf(const PhaseType& ph, double x);

// Survival  1 - F(x).
double survival(const PhaseType& ph, double x);

// Quantile Q(p) = inf{x : p <= F(x)} for p in (0,1), located by geometric
// bracket growth followed by bisection to |F(x) - p| <= 1e-10.
double quantile(const PhaseType& ph, double prob);

// Hazard rate f(x) / (1 - F(x)).
double hazard(const PhaseType& ph, double x);

// Fractional moment E[Y^theta] = Gamma(1+theta) alpha (-S)^-theta e, theta > 0.
// Integer theta is computed by repeated linear solves on (-S); fractional
// theta goes through the eigendecomposition of (-S).
double moment(const PhaseType& ph, double theta);

// Weighted log-likelihood: exact points contribute w log f(y), right-censored
// points contribute w log(1 - F(v)).
double loglik(const PhaseType& ph, const Sample& sample);

// Closure under addition: Y1 + Y2.
PhaseType sum_of(const PhaseType& a, const PhaseType& b);

// Closure under minimum: (alpha1 (x) alpha2, S1 (+) S2).
PhaseType min_of(const PhaseType& a, const PhaseType& b);

// Closure under maximum: dimension p1 p2 + p1 + p2 three-block construction.
PhaseType max_of(const PhaseType& a, const PhaseType& b);

}  // namespace phasefit

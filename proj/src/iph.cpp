#include "phasefit/iph.hpp"

#include <algorithm>
#include <cmath>

#include "phasefit/errors.hpp"
#include "phasefit/matrix_kernels.hpp"

namespace phasefit {

namespace {

constexpr double kXiZeroTol = 1e-10;

void check_params(TransformFamily family, const Vector& params) {
  const int expected = family_param_count(family);
  if (params.size() != expected) {
    throw validation_error("transform " + to_string(family) + ": expected " +
                           std::to_string(expected) + " parameter(s)");
  }
  if (!params.allFinite()) {
    throw validation_error("transform: non-finite parameter");
  }
  switch (family) {
    case TransformFamily::pareto:
    case TransformFamily::weibull:
    case TransformFamily::gompertz:
      if (!(params(0) > 0.0)) {
        throw validation_error("transform " + to_string(family) + ": beta must be > 0");
      }
      break;
    case TransformFamily::lognormal:
      if (!(params(0) > 1.0)) {
        throw validation_error("transform lognormal: gamma must be > 1");
      }
      break;
    case TransformFamily::loglogistic:
      if (!(params(0) > 0.0) || !(params(1) > 0.0)) {
        throw validation_error("transform loglogistic: gamma and theta must be > 0");
      }
      break;
    case TransformFamily::gev:
      if (!(params(1) > 0.0)) {
        throw validation_error("transform gev: sigma must be > 0");
      }
      break;
  }
}

void require_positive_domain(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("iph: argument must be positive and finite");
  }
}

}  // namespace

TransformFamily family_from_string(std::string_view name) {
  if (name == "pareto") return TransformFamily::pareto;
  if (name == "weibull") return TransformFamily::weibull;
  if (name == "lognormal") return TransformFamily::lognormal;
  if (name == "loglogistic") return TransformFamily::loglogistic;
  if (name == "gompertz") return TransformFamily::gompertz;
  if (name == "gev") return TransformFamily::gev;
  throw validation_error("unknown transform family: " + std::string(name));
}

std::string to_string(TransformFamily family) {
  switch (family) {
    case TransformFamily::pareto: return "pareto";
    case TransformFamily::weibull: return "weibull";
    case TransformFamily::lognormal: return "lognormal";
    case TransformFamily::loglogistic: return "loglogistic";
    case TransformFamily::gompertz: return "gompertz";
    case TransformFamily::gev: return "gev";
  }
  return "pareto";
}

int family_param_count(TransformFamily family) {
  switch (family) {
    case TransformFamily::loglogistic: return 2;
    case TransformFamily::gev: return 3;
    default: return 1;
  }
}

Transform::Transform(TransformFamily family, Vector params)
    : family_(family), params_(std::move(params)) {
  check_params(family_, params_);
}

bool Transform::operator==(const Transform& other) const {
  return family_ == other.family_ && params_.size() == other.params_.size() &&
         params_ == other.params_;
}

double Transform::g(double y) const {
  if (!(y > 0.0) || !std::isfinite(y)) {
    throw std::domain_error("transform g: argument must be positive and finite");
  }
  switch (family_) {
    case TransformFamily::pareto:
      return params_(0) * std::expm1(y);
    case TransformFamily::weibull:
      return std::pow(y, 1.0 / params_(0));
    case TransformFamily::lognormal:
      return std::expm1(std::pow(y, 1.0 / params_(0)));
    case TransformFamily::loglogistic:
      return params_(0) * std::pow(std::expm1(y), 1.0 / params_(1));
    case TransformFamily::gompertz:
      return std::log1p(params_(0) * y) / params_(0);
    case TransformFamily::gev: {
      const double mu = params_(0), sigma = params_(1), xi = params_(2);
      if (std::abs(xi) < kXiZeroTol) return mu - sigma * std::log(y);
      return mu + sigma * (std::pow(y, -xi) - 1.0) / xi;
    }
  }
  return 0.0;
}

double Transform::g_inv(double x) const {
  switch (family_) {
    case TransformFamily::pareto:
      require_positive_domain(x);
      return std::log1p(x / params_(0));
    case TransformFamily::weibull:
      require_positive_domain(x);
      return std::pow(x, params_(0));
    case TransformFamily::lognormal:
      require_positive_domain(x);
      return std::pow(std::log1p(x), params_(0));
    case TransformFamily::loglogistic:
      require_positive_domain(x);
      return std::log1p(std::pow(x / params_(0), params_(1)));
    case TransformFamily::gompertz:
      require_positive_domain(x);
      return std::expm1(params_(0) * x) / params_(0);
    case TransformFamily::gev: {
      if (!std::isfinite(x)) {
        throw std::domain_error("transform g_inv: non-finite argument");
      }
      const double mu = params_(0), sigma = params_(1), xi = params_(2);
      if (std::abs(xi) < kXiZeroTol) return std::exp(-(x - mu) / sigma);
      const double t = 1.0 + xi * (x - mu) / sigma;
      if (!(t > 0.0)) {
        throw std::domain_error("transform g_inv: argument outside gev support");
      }
      return std::pow(t, -1.0 / xi);
    }
  }
  return 0.0;
}

InhomPhaseType::InhomPhaseType(PhaseType base, Transform transform)
    : base_(std::move(base)), transform_(std::move(transform)) {}

namespace {

// alpha exp(S z) s and alpha exp(S z) e for the base representation.
double matrix_dens_core(const PhaseType& ph, double z) {
  return std::max(ph.alpha().dot(mat_exp(ph.S() * z) * ph.exit_rates()), 0.0);
}

double matrix_surv_core(const PhaseType& ph, double z) {
  const double s = (ph.alpha().transpose() * mat_exp(ph.S() * z)).sum();
  return std::clamp(s, 0.0, 1.0);
}

}  // namespace

double dens(const InhomPhaseType& iph, double x) {
  const PhaseType& base = iph.base();
  const Vector& par = iph.transform().params();
  switch (iph.transform().family()) {
    case TransformFamily::pareto: {
      require_positive_domain(x);
      const double beta = par(0);
      const double z = std::log1p(x / beta);
      return matrix_dens_core(base, z) / (x + beta);
    }
    case TransformFamily::weibull: {
      require_positive_domain(x);
      const double beta = par(0);
      return matrix_dens_core(base, std::pow(x, beta)) * beta *
             std::pow(x, beta - 1.0);
    }
    case TransformFamily::lognormal: {
      require_positive_domain(x);
      const double gamma = par(0);
      const double lx = std::log1p(x);
      return matrix_dens_core(base, std::pow(lx, gamma)) * gamma *
             std::pow(lx, gamma - 1.0) / (x + 1.0);
    }
    case TransformFamily::loglogistic: {
      require_positive_domain(x);
      const double gamma = par(0), theta = par(1);
      const double z = std::log1p(std::pow(x / gamma, theta));
      return matrix_dens_core(base, z) * theta * std::pow(x, theta - 1.0) /
             (std::pow(x, theta) + std::pow(gamma, theta));
    }
    case TransformFamily::gompertz: {
      require_positive_domain(x);
      const double beta = par(0);
      return matrix_dens_core(base, std::expm1(beta * x) / beta) *
             std::exp(beta * x);
    }
    case TransformFamily::gev: {
      const double mu = par(0), sigma = par(1), xi = par(2);
      const double z = iph.transform().g_inv(x);
      if (std::abs(xi) < kXiZeroTol) {
        return matrix_dens_core(base, z) * z / sigma;
      }
      const double t = 1.0 + xi * (x - mu) / sigma;
      return matrix_dens_core(base, z) * std::pow(t, -(1.0 + xi) / xi) / sigma;
    }
  }
  return 0.0;
}

double cdf(const InhomPhaseType& iph, double x) {
  const double z = iph.transform().g_inv(x);
  const double surv_base = matrix_surv_core(iph.base(), z);
  // gev transforms decrease in the underlying variable, so the survival of
  // the base at g_inv(x) is already the distribution function.
  if (iph.transform().family() == TransformFamily::gev) return surv_base;
  return 1.0 - surv_base;
}

double survival(const InhomPhaseType& iph, double x) {
  return 1.0 - cdf(iph, x);
}

double quantile(const InhomPhaseType& iph, double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw std::domain_error("quantile: probability must lie in (0,1)");
  }
  const double p_base = iph.transform().increasing() ? prob : 1.0 - prob;
  return iph.transform().g(quantile(iph.base(), p_base));
}

double hazard(const InhomPhaseType& iph, double x) {
  const double s = survival(iph, x);
  if (s <= 1e-300) {
    throw std::overflow_error("hazard: survival underflowed to zero");
  }
  return dens(iph, x) / s;
}

double moment(const InhomPhaseType& iph, double theta) {
  return moment(iph.base(), theta);
}

double loglik(const InhomPhaseType& iph, const Sample& sample) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < sample.obs.size(); ++i) {
    ll += sample.obs_weights(i) * std::log(dens(iph, sample.obs(i)));
  }
  for (Eigen::Index j = 0; j < sample.rcens.size(); ++j) {
    ll += sample.rcens_weights(j) * std::log(survival(iph, sample.rcens(j)));
  }
  return ll;
}

namespace {

void require_same_transform(const InhomPhaseType& a, const InhomPhaseType& b) {
  if (!(a.transform() == b.transform())) {
    throw validation_error(
        "iph min/max: transforms must match in family and parameters");
  }
}

}  // namespace

InhomPhaseType min_of(const InhomPhaseType& a, const InhomPhaseType& b) {
  require_same_transform(a, b);
  // Decreasing g swaps the roles of the underlying extremes:
  // min(g(Y1), g(Y2)) = g(max(Y1, Y2)).
  PhaseType base = a.transform().increasing() ? min_of(a.base(), b.base())
                                              : max_of(a.base(), b.base());
  return InhomPhaseType(std::move(base), a.transform());
}

InhomPhaseType max_of(const InhomPhaseType& a, const InhomPhaseType& b) {
  require_same_transform(a, b);
  PhaseType base = a.transform().increasing() ? max_of(a.base(), b.base())
                                              : min_of(a.base(), b.base());
  return InhomPhaseType(std::move(base), a.transform());
}

}  // namespace phasefit

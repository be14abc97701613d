#include "phasefit/ph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "phasefit/errors.hpp"
#include "phasefit/matrix_kernels.hpp"
#include "phasefit/rng.hpp"

namespace phasefit {

Structure structure_from_string(std::string_view name) {
  if (name == "general") return Structure::general;
  if (name == "hyperexponential") return Structure::hyperexponential;
  if (name == "gerlang") return Structure::gerlang;
  if (name == "coxian") return Structure::coxian;
  if (name == "gcoxian") return Structure::gcoxian;
  throw validation_error("unknown structure: " + std::string(name));
}

std::string to_string(Structure s) {
  switch (s) {
    case Structure::general: return "general";
    case Structure::hyperexponential: return "hyperexponential";
    case Structure::gerlang: return "gerlang";
    case Structure::coxian: return "coxian";
    case Structure::gcoxian: return "gcoxian";
  }
  return "general";
}

PhaseType::PhaseType(Vector alpha, Matrix s)
    : alpha_(std::move(alpha)), s_(std::move(s)) {
  const Eigen::Index p = alpha_.size();
  if (p < 1) throw validation_error("phase-type: empty initial vector");
  if (s_.rows() != p || s_.cols() != p) {
    throw validation_error("phase-type: alpha and S dimensions disagree");
  }
  if (!alpha_.allFinite() || !s_.allFinite()) {
    throw validation_error("phase-type: non-finite parameter");
  }
  for (Eigen::Index k = 0; k < p; ++k) {
    if (alpha_(k) < 0.0) {
      throw validation_error("phase-type: negative initial probability");
    }
  }
  if (std::abs(alpha_.sum() - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "phase-type: initial probabilities sum to " << alpha_.sum()
        << ", expected 1";
    throw validation_error(msg.str());
  }
  double max_rate = 0.0;
  for (Eigen::Index k = 0; k < p; ++k) {
    if (!(s_(k, k) < 0.0)) {
      throw validation_error("phase-type: diagonal of S must be negative");
    }
    max_rate = std::max(max_rate, -s_(k, k));
    for (Eigen::Index l = 0; l < p; ++l) {
      if (l != k && s_(k, l) < 0.0) {
        throw validation_error("phase-type: negative off-diagonal rate in S");
      }
    }
  }
  exit_ = -s_.rowwise().sum();
  for (Eigen::Index k = 0; k < p; ++k) {
    if (exit_(k) < 0.0) {
      // Row sums may land a few ulps above zero; anything larger is a
      // genuine positive row sum.
      if (exit_(k) < -1e-10 * max_rate) {
        throw validation_error("phase-type: positive row sum in S");
      }
      exit_(k) = 0.0;
    }
  }
  if (!(exit_.maxCoeff() > 0.0)) {
    throw validation_error("phase-type: no state exits to absorption");
  }
}

PhaseType PhaseType::random(Structure structure, int dimension,
                            std::uint64_t seed) {
  if (dimension < 1) throw validation_error("phase-type: dimension must be >= 1");
  const int p = dimension;
  Rng rng(seed);
  auto positive_uniform = [&rng]() {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    return u;
  };

  Vector alpha = Vector::Zero(p);
  Matrix s = Matrix::Zero(p, p);
  Vector exit = Vector::Zero(p);

  const bool free_alpha = structure == Structure::general ||
                          structure == Structure::hyperexponential ||
                          structure == Structure::gcoxian;
  if (free_alpha) {
    for (int k = 0; k < p; ++k) alpha(k) = positive_uniform();
    alpha /= alpha.sum();
  } else {
    alpha(0) = 1.0;
  }

  switch (structure) {
    case Structure::general:
      for (int k = 0; k < p; ++k) {
        for (int l = 0; l < p; ++l) {
          if (l != k) s(k, l) = positive_uniform();
        }
        exit(k) = positive_uniform();
      }
      break;
    case Structure::hyperexponential:
      for (int k = 0; k < p; ++k) exit(k) = positive_uniform();
      break;
    case Structure::gerlang:
      for (int k = 0; k < p - 1; ++k) s(k, k + 1) = positive_uniform();
      exit(p - 1) = positive_uniform();
      break;
    case Structure::coxian:
    case Structure::gcoxian:
      for (int k = 0; k < p - 1; ++k) s(k, k + 1) = positive_uniform();
      for (int k = 0; k < p; ++k) exit(k) = positive_uniform();
      break;
  }
  for (int k = 0; k < p; ++k) {
    s(k, k) = -(s.row(k).sum() + exit(k));
  }
  return PhaseType(std::move(alpha), std::move(s));
}

namespace {

void require_positive_arg(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error(std::string(what) + ": argument must be positive and finite");
  }
}

}  // namespace

double dens(const PhaseType& ph, double x) {
  require_positive_arg(x, "dens");
  const Matrix e = mat_exp(ph.S() * x);
  const double f = ph.alpha().dot(e * ph.exit_rates());
  return std::max(f, 0.0);
}

double survival(const PhaseType& ph, double x) {
  require_positive_arg(x, "cdf");
  const Matrix e = mat_exp(ph.S() * x);
  const double s = (ph.alpha().transpose() * e).sum();
  return std::clamp(s, 0.0, 1.0);
}

double cdf(const PhaseType& ph, double x) { return 1.0 - survival(ph, x); }

double quantile(const PhaseType& ph, double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw std::domain_error("quantile: probability must lie in (0,1)");
  }
  double lo = 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (cdf(ph, hi) < prob) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 1024 || !std::isfinite(hi)) {
      throw numeric_error("quantile: bracket did not capture the target probability");
    }
  }
  double mid = 0.5 * (lo + hi);
  for (int i = 0; i < 200; ++i) {
    mid = 0.5 * (lo + hi);
    const double f = cdf(ph, mid);
    if (std::abs(f - prob) <= 1e-10) return mid;
    if (f < prob) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
  }
  return mid;
}

double hazard(const PhaseType& ph, double x) {
  const double s = survival(ph, x);
  if (s <= 1e-300) {
    throw std::overflow_error("hazard: survival underflowed to zero");
  }
  return dens(ph, x) / s;
}

double moment(const PhaseType& ph, double theta) {
  if (!(theta > 0.0)) {
    throw std::domain_error("moment: theta must be positive");
  }
  const Matrix minus_s = -ph.S();
  const double rounded = std::round(theta);
  double weighted;
  if (std::abs(theta - rounded) < 1e-12) {
    // Integer order: repeated solves on (-S) avoid the eigendecomposition.
    Vector x = Vector::Ones(ph.dim());
    for (int i = 0; i < static_cast<int>(rounded); ++i) {
      x = lin_solve(minus_s, x);
    }
    weighted = ph.alpha().dot(x);
  } else {
    const Matrix m = mat_power(minus_s, -theta);
    weighted = ph.alpha().dot(m * Vector::Ones(ph.dim()));
  }
  return std::tgamma(1.0 + theta) * weighted;
}

double loglik(const PhaseType& ph, const Sample& sample) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < sample.obs.size(); ++i) {
    ll += sample.obs_weights(i) * std::log(dens(ph, sample.obs(i)));
  }
  for (Eigen::Index j = 0; j < sample.rcens.size(); ++j) {
    ll += sample.rcens_weights(j) * std::log(survival(ph, sample.rcens(j)));
  }
  return ll;
}

namespace {

Vector kron_vec(const Vector& a, const Vector& b) {
  Vector r(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    r.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return r;
}

}  // namespace

PhaseType sum_of(const PhaseType& a, const PhaseType& b) {
  const int p1 = a.dim();
  const int p2 = b.dim();
  Vector alpha = Vector::Zero(p1 + p2);
  alpha.head(p1) = a.alpha();
  Matrix s = Matrix::Zero(p1 + p2, p1 + p2);
  s.topLeftCorner(p1, p1) = a.S();
  s.topRightCorner(p1, p2) = a.exit_rates() * b.alpha().transpose();
  s.bottomRightCorner(p2, p2) = b.S();
  return PhaseType(std::move(alpha), std::move(s));
}

PhaseType min_of(const PhaseType& a, const PhaseType& b) {
  return PhaseType(kron_vec(a.alpha(), b.alpha()), kron_sum(a.S(), b.S()));
}

PhaseType max_of(const PhaseType& a, const PhaseType& b) {
  const int p1 = a.dim();
  const int p2 = b.dim();
  const int joint = p1 * p2;
  const int n = joint + p1 + p2;

  Vector alpha = Vector::Zero(n);
  alpha.head(joint) = kron_vec(a.alpha(), b.alpha());

  Matrix s = Matrix::Zero(n, n);
  s.topLeftCorner(joint, joint) = kron_sum(a.S(), b.S());
  // Partner 2 absorbs first: the joint chain collapses onto chain 1.
  s.block(0, joint, joint, p1) =
      kron_product(Matrix::Identity(p1, p1), b.exit_rates());
  // Partner 1 absorbs first: collapse onto chain 2.
  s.block(0, joint + p1, joint, p2) =
      kron_product(a.exit_rates(), Matrix::Identity(p2, p2));
  s.block(joint, joint, p1, p1) = a.S();
  s.block(joint + p1, joint + p1, p2, p2) = b.S();
  return PhaseType(std::move(alpha), std::move(s));
}

}  // namespace phasefit

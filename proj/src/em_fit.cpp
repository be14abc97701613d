#include "phasefit/em_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "phasefit/errors.hpp"
#include "phasefit/nelder_mead.hpp"

namespace phasefit {

double default_step_length(const Matrix& s) {
  return 0.1 / s.diagonal().cwiseAbs().maxCoeff();
}

namespace {

struct GridPoint {
  double t = 0.0;
  double exact_weight = 0.0;
  double censored_weight = 0.0;
};

std::vector<GridPoint> merged_grid(const Sample& sample) {
  std::vector<GridPoint> grid;
  grid.reserve(sample.obs.size() + sample.rcens.size());
  for (Eigen::Index i = 0; i < sample.obs.size(); ++i) {
    grid.push_back({sample.obs(i), sample.obs_weights(i), 0.0});
  }
  for (Eigen::Index j = 0; j < sample.rcens.size(); ++j) {
    grid.push_back({sample.rcens(j), 0.0, sample.rcens_weights(j)});
  }
  std::sort(grid.begin(), grid.end(),
            [](const GridPoint& a, const GridPoint& b) { return a.t < b.t; });
  std::vector<GridPoint> merged;
  merged.reserve(grid.size());
  for (const GridPoint& g : grid) {
    if (!merged.empty() && merged.back().t == g.t) {
      merged.back().exact_weight += g.exact_weight;
      merged.back().censored_weight += g.censored_weight;
    } else {
      merged.push_back(g);
    }
  }
  return merged;
}

// ODE state for the E-step integrals. `a` is shared between the exact and
// censored variants; b/c are density-normalized, bs/cs survival-normalized.
struct OdeState {
  RowVector a;
  Vector b;
  Matrix c;
  Vector bs;
  Matrix cs;
  bool with_censored = false;

  OdeState derivative(const Matrix& s, const Vector& exit) const {
    OdeState d;
    d.with_censored = with_censored;
    d.a = a * s;
    d.b = s * b;
    d.c = s * c + exit * a;
    if (with_censored) {
      d.bs = s * bs;
      d.cs = s * cs + Vector::Ones(s.rows()) * a;
    }
    return d;
  }

  void add_scaled(const OdeState& other, double factor) {
    a += factor * other.a;
    b += factor * other.b;
    c += factor * other.c;
    if (with_censored) {
      bs += factor * other.bs;
      cs += factor * other.cs;
    }
  }

  OdeState scaled_sum(const OdeState& k, double factor) const {
    OdeState r = *this;
    r.add_scaled(k, factor);
    return r;
  }

  bool finite() const {
    return a.allFinite() && b.allFinite() && c.allFinite() &&
           (!with_censored || (bs.allFinite() && cs.allFinite()));
  }
};

void rk4_advance(OdeState& state, const Matrix& s, const Vector& exit,
                 double h) {
  const OdeState k1 = state.derivative(s, exit);
  const OdeState k2 = state.scaled_sum(k1, 0.5 * h).derivative(s, exit);
  const OdeState k3 = state.scaled_sum(k2, 0.5 * h).derivative(s, exit);
  const OdeState k4 = state.scaled_sum(k3, h).derivative(s, exit);
  state.add_scaled(k1, h / 6.0);
  state.add_scaled(k2, h / 3.0);
  state.add_scaled(k3, h / 3.0);
  state.add_scaled(k4, h / 6.0);
}

}  // namespace

SufficientStats e_step(const PhaseType& ph, const Sample& sample,
                       double step_length) {
  if (!(step_length > 0.0)) {
    throw validation_error("e_step: step length must be positive");
  }
  if (sample.obs.size() + sample.rcens.size() == 0) {
    throw validation_error("e_step: empty sample");
  }
  if (!sample.all_positive()) {
    throw validation_error("e_step: sample values must be positive");
  }

  const int p = ph.dim();
  const Matrix& s = ph.S();
  const Vector& alpha = ph.alpha();
  const Vector& exit = ph.exit_rates();

  SufficientStats stats;
  stats.B = Vector::Zero(p);
  stats.Z = Vector::Zero(p);
  stats.N = Matrix::Zero(p, p);
  stats.Nexit = Vector::Zero(p);

  OdeState state;
  state.with_censored = sample.rcens.size() > 0;
  state.a = alpha.transpose();
  state.b = exit;
  state.c = Matrix::Zero(p, p);
  if (state.with_censored) {
    state.bs = Vector::Ones(p);
    state.cs = Matrix::Zero(p, p);
  }

  double t = 0.0;
  for (const GridPoint& point : merged_grid(sample)) {
    const double gap = point.t - t;
    const int substeps = std::max(1, static_cast<int>(std::ceil(gap / step_length)));
    const double h = gap / substeps;
    for (int i = 0; i < substeps; ++i) {
      rk4_advance(state, s, exit, h);
    }
    t = point.t;

    if (!state.finite()) {
      std::ostringstream msg;
      msg << "e_step: non-finite integration state at sample point " << point.t;
      throw numeric_error(msg.str());
    }

    if (point.exact_weight > 0.0) {
      const double density = alpha.dot(state.b);
      if (!(density > 0.0) || !std::isfinite(density)) {
        std::ostringstream msg;
        msg << "e_step: vanishing density at sample point " << point.t;
        throw numeric_error(msg.str());
      }
      const double w = point.exact_weight / density;
      stats.B.array() += w * alpha.array() * state.b.array();
      stats.Z += w * state.c.diagonal();
      stats.Nexit.array() += w * exit.array() * state.a.transpose().array();
      for (int k = 0; k < p; ++k) {
        for (int l = 0; l < p; ++l) {
          if (l != k) stats.N(k, l) += w * s(k, l) * state.c(l, k);
        }
      }
    }
    if (point.censored_weight > 0.0) {
      const double surv = alpha.dot(state.bs);
      if (!(surv > 0.0) || !std::isfinite(surv)) {
        std::ostringstream msg;
        msg << "e_step: vanishing survival at censoring point " << point.t;
        throw numeric_error(msg.str());
      }
      const double w = point.censored_weight / surv;
      stats.B.array() += w * alpha.array() * state.bs.array();
      stats.Z += w * state.cs.diagonal();
      for (int k = 0; k < p; ++k) {
        for (int l = 0; l < p; ++l) {
          if (l != k) stats.N(k, l) += w * s(k, l) * state.cs(l, k);
        }
      }
    }
  }
  return stats;
}

PhaseType m_step(const PhaseType& previous, const SufficientStats& stats,
                 double total_weight) {
  const int p = previous.dim();
  if (!(total_weight > 0.0)) {
    throw validation_error("m_step: total weight must be positive");
  }

  Vector alpha = stats.B / total_weight;
  alpha /= alpha.sum();  // absorb float drift; zeros are unaffected

  Matrix s = Matrix::Zero(p, p);
  for (int k = 0; k < p; ++k) {
    if (stats.Z(k) > 0.0) {
      double row_total = 0.0;
      for (int l = 0; l < p; ++l) {
        if (l == k) continue;
        s(k, l) = stats.N(k, l) / stats.Z(k);
        row_total += s(k, l);
      }
      const double exit_rate = stats.Nexit(k) / stats.Z(k);
      s(k, k) = -(row_total + exit_rate);
    } else {
      s.row(k) = previous.S().row(k);
    }
  }
  return PhaseType(std::move(alpha), std::move(s));
}

namespace {

void check_options(const EmOptions& options) {
  if (options.steps < 1) throw validation_error("fit: steps must be >= 1");
  if (options.print_every < 1) throw validation_error("fit: print_every must be >= 1");
  if (options.beta_depth < 1) throw validation_error("fit: beta_depth must be >= 1");
  if (options.rk_step && !(*options.rk_step > 0.0)) {
    throw validation_error("fit: rk_step must be positive");
  }
}

void check_sample_for_fit(const Sample& sample) {
  if (sample.obs.size() == 0) {
    throw validation_error("fit: at least one exact observation is required");
  }
}

void record(FitReport& report, const EmOptions& options, int step, double ll) {
  report.trace_steps.push_back(step);
  report.loglik_trace.push_back(ll);
  if (options.on_trace) options.on_trace(step, ll);
}

Vector beta_to_unconstrained(TransformFamily family, const Vector& beta) {
  Vector u = beta;
  switch (family) {
    case TransformFamily::pareto:
    case TransformFamily::weibull:
    case TransformFamily::gompertz:
      u(0) = std::log(beta(0));
      break;
    case TransformFamily::lognormal:
      u(0) = std::log(beta(0) - 1.0);
      break;
    case TransformFamily::loglogistic:
      u(0) = std::log(beta(0));
      u(1) = std::log(beta(1));
      break;
    case TransformFamily::gev:
      u(1) = std::log(beta(1));  // mu and xi are unconstrained
      break;
  }
  return u;
}

Vector beta_from_unconstrained(TransformFamily family, const Vector& u) {
  Vector beta = u;
  switch (family) {
    case TransformFamily::pareto:
    case TransformFamily::weibull:
    case TransformFamily::gompertz:
      beta(0) = std::exp(u(0));
      break;
    case TransformFamily::lognormal:
      beta(0) = 1.0 + std::exp(u(0));
      break;
    case TransformFamily::loglogistic:
      beta(0) = std::exp(u(0));
      beta(1) = std::exp(u(1));
      break;
    case TransformFamily::gev:
      beta(1) = std::exp(u(1));
      break;
  }
  return beta;
}

}  // namespace

FitReport fit(const PhaseType& init, const Sample& sample,
              const EmOptions& options) {
  check_options(options);
  check_sample_for_fit(sample);
  if (!sample.all_positive()) {
    throw validation_error("fit: phase-type data must be positive");
  }

  PhaseType current = init;
  FitReport report{current, {}, {}, 0};
  const double total = sample.total_weight();
  for (int step = 1; step <= options.steps; ++step) {
    const double h =
        options.rk_step ? *options.rk_step : default_step_length(current.S());
    const SufficientStats stats = e_step(current, sample, h);
    current = m_step(current, stats, total);
    if (step % options.print_every == 0 || step == options.steps) {
      record(report, options, step, loglik(current, sample));
    }
  }
  report.model = current;
  report.iterations_run = options.steps;
  return report;
}

double beta_objective(TransformFamily family, const Vector& alpha,
                      const Matrix& s, const Vector& beta,
                      const Sample& sample) {
  const InhomPhaseType candidate(PhaseType(alpha, s), Transform(family, beta));
  return loglik(candidate, sample);
}

FitReport fit(const InhomPhaseType& init, const Sample& sample,
              const EmOptions& options) {
  check_options(options);
  check_sample_for_fit(sample);

  const TransformFamily family = init.transform().family();
  if (family == TransformFamily::gev) {
    if (sample.rcens.size() > 0) {
      // A right-censored observation maps to a left constraint on the
      // underlying absorption time, which the E-step does not support.
      throw validation_error(
          "fit: right-censored data is not supported for the gev family");
    }
  } else if (!sample.all_positive()) {
    throw validation_error("fit: data must be positive for the " +
                           to_string(family) + " family");
  }

  PhaseType base = init.base();
  Vector beta = init.transform().params();
  FitReport report{init, {}, {}, 0};
  const double total = sample.total_weight();

  for (int step = 1; step <= options.steps; ++step) {
    const Transform transform(family, beta);
    Sample transformed = sample;
    for (Eigen::Index i = 0; i < transformed.obs.size(); ++i) {
      transformed.obs(i) = transform.g_inv(sample.obs(i));
    }
    for (Eigen::Index j = 0; j < transformed.rcens.size(); ++j) {
      transformed.rcens(j) = transform.g_inv(sample.rcens(j));
    }

    const double h =
        options.rk_step ? *options.rk_step : default_step_length(base.S());
    const SufficientStats stats = e_step(base, transformed, h);
    base = m_step(base, stats, total);

    const auto objective = [&](const Vector& u) {
      try {
        return beta_objective(family, base.alpha(), base.S(),
                              beta_from_unconstrained(family, u), sample);
      } catch (const std::domain_error&) {
        return -std::numeric_limits<double>::infinity();
      } catch (const validation_error&) {
        return -std::numeric_limits<double>::infinity();
      }
    };
    const NelderMeadResult inner = nelder_mead_max(
        objective, beta_to_unconstrained(family, beta), options.beta_depth, 1e-12);
    beta = beta_from_unconstrained(family, inner.x);

    if (step % options.print_every == 0 || step == options.steps) {
      record(report, options, step, inner.value);
    }
  }

  report.model = InhomPhaseType(base, Transform(family, beta));
  report.iterations_run = options.steps;
  return report;
}

double tail_index(const PhaseType& ph) {
  const Eigen::VectorXcd eigenvalues =
      Eigen::EigenSolver<Matrix>(ph.S(), false).eigenvalues();
  return -1.0 / eigenvalues.real().maxCoeff();
}

double tail_index(const InhomPhaseType& iph) {
  if (iph.transform().family() != TransformFamily::pareto) {
    throw validation_error("tail_index: defined for matrix-Pareto models");
  }
  return tail_index(iph.base());
}

}  // namespace phasefit

#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "phasefit/iph.hpp"
#include "phasefit/ph.hpp"
#include "phasefit/sample.hpp"

namespace phasefit {

// Conditional expectations of the hidden-chain statistics: starts per state,
// occupation times, transition counts (off-diagonal of N) and absorption
// counts. sum(B) equals the total weight; sum(Nexit) equals the exact weight.
struct SufficientStats {
  Vector B;
  Vector Z;
  Matrix N;
  Vector Nexit;
};

struct EmOptions {
  int steps = 1000;
  // Runge-Kutta step length; when unset it is recomputed from the current
  // sub-intensity at every iteration as 0.1 / max |s_kk|.
  std::optional<double> rk_step;
  // Inner simplex iterations for the transform-parameter update.
  int beta_depth = 10;
  // Log-likelihood is recorded every print_every iterations and at the end.
  int print_every = 100;
  // Optional observer invoked at each recorded iteration.
  std::function<void(int step, double loglik)> on_trace;
};

struct FitReport {
  std::variant<PhaseType, InhomPhaseType> model;
  std::vector<int> trace_steps;
  std::vector<double> loglik_trace;
  int iterations_run = 0;

  const PhaseType& ph() const { return std::get<PhaseType>(model); }
  const InhomPhaseType& iph() const { return std::get<InhomPhaseType>(model); }
};

// 0.1 / max_k |s_kk|.
double default_step_length(const Matrix& s);

// One E-step: the sample is sorted and deduplicated into weighted distinct
// points, and the coupled ODE system for a(y) = alpha exp(Sy),
// b(y) = exp(Sy) s and c(y,k) is advanced by classical RK4 between
// consecutive points (each gap subdivided into ceil(gap/step) equal steps).
// Right-censored points contribute through the survival-normalized variants
// and add nothing to Nexit.
SufficientStats e_step(const PhaseType& ph, const Sample& sample,
                       double step_length);

// One M-step. States with zero occupation time keep their previous rates.
PhaseType m_step(const PhaseType& previous, const SufficientStats& stats,
                 double total_weight);

// EM for phase-type models.
FitReport fit(const PhaseType& init, const Sample& sample,
              const EmOptions& options);

// EM for inhomogeneous models: transform the data to the phase-type scale,
// run one E/M cycle, then improve the transform parameters by a bounded
// simplex search on the observable-scale log-likelihood.
FitReport fit(const InhomPhaseType& init, const Sample& sample,
              const EmOptions& options);

// Observable-scale weighted log-likelihood for fixed (alpha, S) as a function
// of the transform parameters; censored points contribute survival terms.
double beta_objective(TransformFamily family, const Vector& alpha,
                      const Matrix& s, const Vector& beta,
                      const Sample& sample);

// Pareto-type tail index: -1 / (largest real eigenvalue of S).
double tail_index(const PhaseType& ph);
double tail_index(const InhomPhaseType& iph);  // matrix-Pareto models only

}  // namespace phasefit

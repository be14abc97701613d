#include "phasefit/sampling.hpp"

#include <cmath>

#include "phasefit/errors.hpp"

namespace phasefit {

namespace {

// Largest admissible jump count before declaring the chain stuck; a valid
// representation absorbs long before this.
constexpr long kMaxJumps = 100'000'000;

int draw_start_state(const Vector& alpha, Rng& rng) {
  const double u = rng.uniform();
  double cum = 0.0;
  int last_positive = -1;
  for (Eigen::Index k = 0; k < alpha.size(); ++k) {
    if (alpha(k) > 0.0) last_positive = static_cast<int>(k);
    cum += alpha(k);
    if (u < cum && alpha(k) > 0.0) return static_cast<int>(k);
  }
  return last_positive;
}

double draw_absorption_time(const PhaseType& ph, Rng& rng) {
  const Matrix& s = ph.S();
  const int p = ph.dim();

  int state = draw_start_state(ph.alpha(), rng);
  double time = 0.0;
  for (long jumps = 0; jumps < kMaxJumps; ++jumps) {
    const double rate = -s(state, state);
    time += -std::log1p(-rng.uniform()) / rate;

    const double u = rng.uniform() * rate;
    double cum = 0.0;
    int next = -1;
    for (int l = 0; l < p; ++l) {
      if (l == state) continue;
      cum += s(state, l);
      if (u < cum) {
        next = l;
        break;
      }
    }
    if (next < 0) {
      // Remaining probability mass belongs to the exit rate.
      return time;
    }
    state = next;
  }
  throw numeric_error("simulate: absorption not reached (chain appears trapped)");
}

}  // namespace

std::vector<double> simulate(const PhaseType& ph, std::size_t n, Rng& rng) {
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(draw_absorption_time(ph, rng));
  }
  return out;
}

std::vector<double> simulate(const InhomPhaseType& iph, std::size_t n, Rng& rng) {
  const Transform& t = iph.transform();
  if (t.family() == TransformFamily::gev) {
    return simulate_mgev(iph.base(), t.params()(0), t.params()(1),
                         t.params()(2), n, rng);
  }
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(t.g(draw_absorption_time(iph.base(), rng)));
  }
  return out;
}

std::vector<double> simulate_mgev(const PhaseType& base, double mu,
                                  double sigma, double xi, std::size_t n,
                                  Rng& rng) {
  if (!(sigma > 0.0)) {
    throw validation_error("simulate_mgev: sigma must be > 0");
  }
  const bool gumbel = std::abs(xi) < 1e-10;
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = draw_absorption_time(base, rng);
    out.push_back(gumbel ? mu - sigma * std::log(y)
                         : mu + sigma * (std::pow(y, -xi) - 1.0) / xi);
  }
  return out;
}

}  // namespace phasefit

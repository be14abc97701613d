#pragma once

#include <cstddef>
#include <vector>

#include "phasefit/iph.hpp"
#include "phasefit/ph.hpp"
#include "phasefit/rng.hpp"

namespace phasefit {

// Absorption times of the underlying Markov jump process: the start state
// follows alpha, sojourns are exponential with rate -s_kk, and each jump
// picks the next transient state with probability s_kl / -s_kk (states
// scanned in index order, absorption taken last).
std::vector<double> simulate(const PhaseType& ph, std::size_t n, Rng& rng);

// Draws g(Y) for Y from the base; gev dispatches to simulate_mgev.
std::vector<double> simulate(const InhomPhaseType& iph, std::size_t n, Rng& rng);

// Matrix-GEV draws: X = mu + sigma (Y^-xi - 1) / xi, or mu - sigma log Y when
// |xi| < 1e-10.
std::vector<double> simulate_mgev(const PhaseType& base, double mu,
                                  double sigma, double xi, std::size_t n,
                                  Rng& rng);

}  // namespace phasefit

#pragma once

#include "phasefit/types.hpp"

namespace phasefit {

// A dataset of exact observations and right-censoring points, each with
// positive weights. Values must be finite; positivity is enforced by the
// routines that require it (the matrix-GEV family admits negative values).
struct Sample {
  Vector obs;
  Vector obs_weights;
  Vector rcens;
  Vector rcens_weights;

  Sample() = default;
  Sample(Vector observations, Vector weights, Vector censored = Vector(),
         Vector censored_weights = Vector());

  // Exact observations with unit weights.
  static Sample exact(Vector observations);

  double exact_weight() const { return obs_weights.sum(); }
  double censored_weight() const {
    return rcens_weights.size() > 0 ? rcens_weights.sum() : 0.0;
  }
  double total_weight() const { return exact_weight() + censored_weight(); }

  // All values strictly positive (required by every family except gev).
  bool all_positive() const;
};

}  // namespace phasefit

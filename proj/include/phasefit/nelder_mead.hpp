#pragma once

#include <functional>

#include "phasefit/types.hpp"

namespace phasefit {

struct NelderMeadResult {
  Vector x;
  double value;
  int iterations = 0;
};

// Derivative-free maximization by the simplex method with coefficients
// reflection 1, expansion 2, contraction 0.5, shrink 0.5. The initial simplex
// contains x0, so the result is never worse than the starting point.
// Non-finite objective values at candidate points are treated as rejections;
// a non-finite objective at x0 raises numeric_error.
NelderMeadResult nelder_mead_max(
    const std::function<double(const Vector&)>& objective, const Vector& x0,
    int max_iter, double tol);

}  // namespace phasefit

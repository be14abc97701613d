#include "phasefit/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "phasefit/errors.hpp"

namespace phasefit {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

double guarded(const std::function<double(const Vector&)>& f, const Vector& x) {
  const double v = f(x);
  return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
}

}  // namespace

NelderMeadResult nelder_mead_max(
    const std::function<double(const Vector&)>& objective, const Vector& x0,
    int max_iter, double tol) {
  const int n = static_cast<int>(x0.size());
  if (n < 1) throw std::invalid_argument("nelder_mead: empty start point");

  std::vector<Vector> simplex;
  std::vector<double> value;
  simplex.reserve(n + 1);
  value.reserve(n + 1);

  simplex.push_back(x0);
  value.push_back(objective(x0));
  if (!std::isfinite(value[0])) {
    throw numeric_error("nelder_mead: objective not finite at the start point");
  }
  for (int i = 0; i < n; ++i) {
    Vector v = x0;
    v(i) += (std::abs(x0(i)) > 1e-8) ? 0.1 * std::abs(x0(i)) : 0.1;
    simplex.push_back(v);
    value.push_back(guarded(objective, v));
  }

  auto order = [&]() {
    // Descending by objective: index 0 is the best vertex.
    std::vector<int> idx(n + 1);
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return value[a] > value[b]; });
    std::vector<Vector> s2(n + 1);
    std::vector<double> v2(n + 1);
    for (int i = 0; i <= n; ++i) {
      s2[i] = simplex[idx[i]];
      v2[i] = value[idx[i]];
    }
    simplex.swap(s2);
    value.swap(v2);
  };

  const double x_tol = tol * (1.0 + x0.cwiseAbs().maxCoeff());
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    order();
    double diameter = 0.0;
    for (int i = 1; i <= n; ++i) {
      diameter = std::max(
          diameter, (simplex[i] - simplex[0]).cwiseAbs().maxCoeff());
    }
    if (std::isfinite(value[n]) && diameter <= x_tol &&
        value[0] - value[n] <= tol * (1.0 + std::abs(value[0]))) {
      break;
    }

    Vector centroid = Vector::Zero(n);
    for (int i = 0; i < n; ++i) centroid += simplex[i];
    centroid /= n;

    const Vector reflected = centroid + kReflect * (centroid - simplex[n]);
    const double f_reflected = guarded(objective, reflected);

    if (f_reflected > value[0]) {
      const Vector expanded = centroid + kExpand * (reflected - centroid);
      const double f_expanded = guarded(objective, expanded);
      if (f_expanded > f_reflected) {
        simplex[n] = expanded;
        value[n] = f_expanded;
      } else {
        simplex[n] = reflected;
        value[n] = f_reflected;
      }
      continue;
    }
    if (f_reflected > value[n - 1]) {
      simplex[n] = reflected;
      value[n] = f_reflected;
      continue;
    }

    if (f_reflected > value[n]) {
      const Vector contracted = centroid + kContract * (reflected - centroid);
      const double f_contracted = guarded(objective, contracted);
      if (f_contracted >= f_reflected) {
        simplex[n] = contracted;
        value[n] = f_contracted;
        continue;
      }
    } else {
      const Vector contracted = centroid + kContract * (simplex[n] - centroid);
      const double f_contracted = guarded(objective, contracted);
      if (f_contracted > value[n]) {
        simplex[n] = contracted;
        value[n] = f_contracted;
        continue;
      }
    }

    for (int i = 1; i <= n; ++i) {
      simplex[i] = simplex[0] + kShrink * (simplex[i] - simplex[0]);
      value[i] = guarded(objective, simplex[i]);
    }
  }

  order();
  return NelderMeadResult{simplex[0], value[0], iter};
}

}  // namespace phasefit

#pragma once

// Test-side oracles: quadrature, closed-form reference distributions,
// brute-force matrix constructions and sample statistics. Everything here is
// independent of the library code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

using Fn = std::function<double(double)>;

namespace detail {

// `tol` is relative to the local panel value; panels whose Richardson
// correction is small relative to their own contribution are accepted.
inline double simpson_segment(const Fn& f, double a, double b, double fa,
                              double fm, double fb, double whole, double tol,
                              int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 ||
      std::abs(delta) <= 15.0 * tol * (std::abs(left + right) + 1e-300)) {
    return left + right + delta / 15.0;
  }
  return simpson_segment(f, a, m, fa, flm, fm, left, tol, depth - 1) +
         simpson_segment(f, m, b, fm, frm, fb, right, tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature on [a, b] with relative tolerance `tol`.
inline double integrate(const Fn& f, double a, double b, double tol = 1e-9,
                        int max_depth = 40) {
  if (!(b > a)) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_segment(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Integral over [a, inf): geometrically growing segments, stopping once a
// segment contributes less than `tail_tol` in absolute value.
inline double integrate_to_inf(const Fn& f, double a, double tol = 1e-9,
                               double tail_tol = 1e-12, double first_width = 1.0,
                               int max_segments = 400) {
  double total = 0.0;
  double lo = a;
  double width = first_width;
  for (int i = 0; i < max_segments; ++i) {
    const double hi = lo + width;
    const double part = integrate(f, lo, hi, tol);
    total += part;
    if (std::abs(part) < tail_tol && i > 2) break;
    lo = hi;
    width *= 2.0;
  }
  return total;
}

// Kolmogorov-Smirnov distance between a sample and a distribution function.
inline double ks_distance(std::vector<double> sample, const Fn& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double fx = cdf(sample[i]);
    d = std::max(d, std::abs(fx - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - fx));
  }
  return d;
}

// Two-sample Kolmogorov-Smirnov distance.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                             static_cast<double>(j) / b.size()));
  }
  return d;
}

// Bisection root finder for monotone functions.
inline double bisect(const Fn& f, double lo, double hi, double tol = 1e-12,
                     int max_iter = 200) {
  double flo = f(lo);
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::abs(hi - lo) < tol) return mid;
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// --- closed-form reference distributions (scalar parameters) ---

inline double erlang_cdf(int k, double rate, double x) {
  // 1 - sum_{j<k} (rate x)^j e^{-rate x} / j!
  double term = std::exp(-rate * x);
  double sum = term;
  for (int j = 1; j < k; ++j) {
    term *= rate * x / j;
    sum += term;
  }
  return 1.0 - sum;
}

inline double erlang_dens(int k, double rate, double x) {
  double v = rate * std::exp(-rate * x);
  for (int j = 1; j < k; ++j) v *= rate * x / j;
  return v;
}

inline double lomax_cdf(double tail_rate, double scale, double x) {
  // survival (x/scale + 1)^(-tail_rate)
  return 1.0 - std::pow(x / scale + 1.0, -tail_rate);
}

inline double weibull_dens(double rate, double shape, double x) {
  return rate * shape * std::pow(x, shape - 1.0) *
         std::exp(-rate * std::pow(x, shape));
}

inline double weibull_cdf(double rate, double shape, double x) {
  return 1.0 - std::exp(-rate * std::pow(x, shape));
}

inline double gompertz_dens(double rate, double shape, double x) {
  return rate * std::exp(shape * x) *
         std::exp(-rate * std::expm1(shape * x) / shape);
}

inline double gompertz_cdf(double rate, double shape, double x) {
  return 1.0 - std::exp(-rate * std::expm1(shape * x) / shape);
}

inline double gumbel_cdf(double mu, double sigma, double x) {
  return std::exp(-std::exp(-(x - mu) / sigma));
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

inline double truncnorm_cdf(double mu, double sigma, double lower, double x) {
  const double lo = normal_cdf((lower - mu) / sigma);
  if (x <= lower) return 0.0;
  return (normal_cdf((x - mu) / sigma) - lo) / (1.0 - lo);
}

inline double truncnorm_dens(double mu, double sigma, double lower, double x) {
  if (x <= lower) return 0.0;
  const double lo = normal_cdf((lower - mu) / sigma);
  return normal_pdf((x - mu) / sigma) / (sigma * (1.0 - lo));
}

// --- brute-force matrix constructions ---

// Truncated Taylor series for the matrix exponential.
inline Eigen::MatrixXd taylor_exp(const Eigen::MatrixXd& a, int terms = 60) {
  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::MatrixXd power = sum;
  for (int n = 1; n <= terms; ++n) {
    power = (power * a) / static_cast<double>(n);
    sum += power;
  }
  return sum;
}

// Kronecker product straight from the index definition
// (A (x) B)[i*rb + k, j*cb + l] = A[i,j] B[k,l].
inline Eigen::MatrixXd kron_by_index(const Eigen::MatrixXd& a,
                                     const Eigen::MatrixXd& b) {
  Eigen::MatrixXd r(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return r;
}

inline Eigen::MatrixXd kron_sum_by_index(const Eigen::MatrixXd& a,
                                         const Eigen::MatrixXd& b) {
  return kron_by_index(a, Eigen::MatrixXd::Identity(b.rows(), b.cols())) +
         kron_by_index(Eigen::MatrixXd::Identity(a.rows(), a.cols()), b);
}

// --- sample statistics ---

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double stddev(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace oracles

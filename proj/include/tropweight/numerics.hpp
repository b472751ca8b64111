#ifndef TROPWEIGHT_NUMERICS_HPP
#define TROPWEIGHT_NUMERICS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace tropweight {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// Value of the affine term b + n*x with a single rounding.
inline double line_at(std::int64_t n, double b, double x) {
  return std::fma(static_cast<double>(n), x, b);
}

/// Uniform grid over [lo, hi], endpoints included. n >= 2.
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw std::invalid_argument("linspace requires n >= 2");
  if (!(lo < hi)) throw std::invalid_argument("linspace requires lo < hi");
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::fma(static_cast<double>(i), step, lo);
  out.back() = hi;
  return out;
}

/// log(sum exp(v)) over the values, skipping entries more than `window`
/// log-units below the maximum. Empty input yields -inf.
inline double log_sum_exp(std::span<const double> values, double window = 40.0) {
  double m = kNegInf;
  for (double v : values) m = std::max(m, v);
  if (m == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double v : values)
    if (v >= m - window) acc += std::exp(v - m);
  return m + std::log(acc);
}

/// Root of f on [lo, hi] assuming f(lo) <= 0 <= f(hi) and f nondecreasing.
/// Stops when the bracket width drops below xtol. Step functions are fine:
/// an exact zero of f is returned as soon as it is hit.
inline double bisect_nondecreasing(const std::function<double(double)>& f,
                                   double lo, double hi, double xtol = 1e-12) {
  for (int it = 0; it < 240 && hi - lo > xtol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = f(mid);
    if (v < 0.0) {
      lo = mid;
    } else if (v > 0.0) {
      hi = mid;
    } else {
      return mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace tropweight

#endif

#ifndef TROPWEIGHT_WEIGHTS_HPP
#define TROPWEIGHT_WEIGHTS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "tropweight/series.hpp"

namespace tropweight {

/// A radial weight seen through its logarithmic transform: phi(x) is the
/// log of the weight at radius e^x. phi is nondecreasing and convex, and is
/// held constant below x_floor (the weight is positive and continuous at 0).
struct LogTransform {
  std::function<double(double)> phi;
  std::function<double(double)> dphi;
  std::function<double(double)> ddphi;
  /// Inverse of dphi on the attained slope range; empty when the family has
  /// no usable closed form (table, tropical).
  std::function<double(double)> dphi_inverse;
  double x_floor = 0.0;
  /// Set when the weight is itself a tropical envelope; lets envelope-exact
  /// operations reuse the terms bit-for-bit.
  std::optional<TropicalSeries> tropical_source;

  /// Oracle from a raw phi: derivatives fall back to central differences.
  static LogTransform from_phi(std::function<double(double)> phi,
                               double x_floor, double fd_step = 1e-5);
};

struct MonomialFamily { std::int64_t m = 1; };              // log(1 + e^{mx})
struct ExpPowerFamily { double beta = 1.0; };               // e^{beta x}
struct LogPowerFamily { double alpha = 2.0; };              // x^alpha above 1
struct TropicalFamily { TropicalSeries terms; };            // envelope itself
struct TableFamily {                                        // piecewise linear
  std::vector<std::pair<double, double>> samples;           // (x, phi) pairs
};

struct WeightSpec {
  std::variant<MonomialFamily, ExpPowerFamily, LogPowerFamily, TropicalFamily,
               TableFamily>
      family;
};

/// Builds the oracle for a catalog family. Throws std::invalid_argument on
/// bad parameters (alpha <= 1, non-convex table, missing constant term...).
LogTransform make_weight(const WeightSpec& spec);

/// Evidence (not proof) that the weight grows faster than every polynomial:
/// the slope probe dphi(x_max) exceeds the threshold.
bool is_rapid(const LogTransform& w, double slope_threshold, double x_max);

struct ConvexityViolation {
  double x1, x2, x3;
  double excess;  // amount the middle value sticks out above the chord
};

/// Midpoint-convexity sweep over consecutive grid triples; empty result
/// means no violation beyond tol.
std::vector<ConvexityViolation> check_convexity(const LogTransform& w,
                                                std::span<const double> grid,
                                                double tol = 1e-9);

}  // namespace tropweight

#endif

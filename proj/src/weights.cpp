#include "tropweight/weights.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "tropweight/numerics.hpp"

namespace tropweight {
namespace {

// log(1 + e^u) without overflow.
double log1p_exp(double u) {
  if (u > 0.0) return u + std::log1p(std::exp(-u));
  return std::log1p(std::exp(u));
}

double logistic(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

LogTransform make_monomial(std::int64_t m) {
  if (m < 1) throw std::invalid_argument("monomial weight requires m >= 1");
  const double md = static_cast<double>(m);
  // log(1 + e^{mx}) is flat to machine precision well before this point.
  const double floor_x = -46.0 / md;
  LogTransform w;
  w.x_floor = floor_x;
  w.phi = [md, floor_x](double x) { return log1p_exp(md * std::max(x, floor_x)); };
  w.dphi = [md, floor_x](double x) {
    return x < floor_x ? 0.0 : md * logistic(md * x);
  };
  w.ddphi = [md, floor_x](double x) {
    if (x < floor_x) return 0.0;
    const double s = logistic(md * x);
    return md * md * s * (1.0 - s);
  };
  w.dphi_inverse = [md, floor_x](double u) {
    if (u <= 0.0) return floor_x;
    if (u >= md) return kPosInf;
    return std::log(u / (md - u)) / md;
  };
  return w;
}

LogTransform make_exp_power(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("exp_power weight requires beta > 0");
  const double floor_x = -46.0 / beta;
  LogTransform w;
  w.x_floor = floor_x;
  w.phi = [beta, floor_x](double x) { return std::exp(beta * std::max(x, floor_x)); };
  w.dphi = [beta, floor_x](double x) {
    return x < floor_x ? 0.0 : beta * std::exp(beta * x);
  };
  w.ddphi = [beta, floor_x](double x) {
    return x < floor_x ? 0.0 : beta * beta * std::exp(beta * x);
  };
  w.dphi_inverse = [beta, floor_x](double u) {
    if (u <= 0.0) return floor_x;
    return std::max(std::log(u / beta) / beta, floor_x);
  };
  return w;
}

LogTransform make_log_power(double alpha) {
  if (!(alpha > 1.0)) throw std::invalid_argument("log_power weight requires alpha > 1");
  LogTransform w;
  w.x_floor = 1.0;
  w.phi = [alpha](double x) { return x <= 1.0 ? 1.0 : std::pow(x, alpha); };
  w.dphi = [alpha](double x) {
    return x < 1.0 ? 0.0 : alpha * std::pow(x, alpha - 1.0);
  };
  w.ddphi = [alpha](double x) {
    return x < 1.0 ? 0.0 : alpha * (alpha - 1.0) * std::pow(x, alpha - 2.0);
  };
  w.dphi_inverse = [alpha](double u) {
    if (u < alpha) return 1.0;  // slopes in (0, alpha) jump over the kink
    return std::pow(u / alpha, 1.0 / (alpha - 1.0));
  };
  return w;
}

LogTransform make_tropical(const TropicalSeries& series) {
  if (series.empty())
    throw std::invalid_argument("tropical weight requires a nonempty series");
  if (series.term(0).slope != 0) {
    throw std::invalid_argument(
        "tropical weight requires a slope-0 term (the weight must be positive at 0)");
  }
  LogTransform w;
  // Below the first breakpoint the constant term is active.
  w.x_floor = series.has_term(1) ? series.breakpoint(0) : 0.0;
  w.phi = [series](double x) { return series.eval(x).value; };
  w.dphi = [series](double x) {
    return static_cast<double>(series.eval(x).slope);
  };
  w.ddphi = [](double) { return 0.0; };
  w.tropical_source = series;
  return w;
}

LogTransform make_table(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("table weight requires at least 2 samples");
  std::vector<double> xs, ys, slopes;
  xs.reserve(samples.size());
  ys.reserve(samples.size());
  for (const auto& [x, y] : samples) {
    if (!xs.empty() && !(x > xs.back()))
      throw std::invalid_argument("table weight samples must be strictly increasing in x");
    xs.push_back(x);
    ys.push_back(y);
  }
  slopes.reserve(xs.size() - 1);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double s = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    if (s < -1e-12)
      throw std::invalid_argument("table weight must be nondecreasing");
    if (!slopes.empty() && s < slopes.back() - 1e-9)
      throw std::invalid_argument("table weight samples are not convex-consistent");
    slopes.push_back(s);
  }
  LogTransform w;
  w.x_floor = xs.front();
  // Piece for x: ties at a sample resolve to the left piece; beyond the last
  // sample the final slope extrapolates.
  auto piece = [xs](double x) -> std::size_t {
    if (x <= xs.front()) return 0;
    std::size_t lo = 0, hi = xs.size() - 1;
    while (lo + 1 < hi) {
      const std::size_t mid = (lo + hi) / 2;
      (xs[mid] < x ? lo : hi) = mid;
    }
    return lo;
  };
  w.phi = [xs, ys, slopes, piece](double x) {
    if (x <= xs.front()) return ys.front();
    const std::size_t i = piece(x);
    return std::fma(slopes[i], x - xs[i], ys[i]);
  };
  w.dphi = [xs, slopes, piece](double x) {
    if (x < xs.front()) return 0.0;
    return slopes[piece(x)];
  };
  w.ddphi = [](double) { return 0.0; };
  return w;
}

}  // namespace

LogTransform LogTransform::from_phi(std::function<double(double)> phi,
                                    double x_floor, double fd_step) {
  if (!phi) throw std::invalid_argument("from_phi requires a callable");
  LogTransform w;
  w.x_floor = x_floor;
  auto floored = [phi = std::move(phi), x_floor](double x) {
    return phi(std::max(x, x_floor));
  };
  w.phi = floored;
  w.dphi = [floored, fd_step](double x) {
    return (floored(x + fd_step) - floored(x - fd_step)) / (2.0 * fd_step);
  };
  auto d = w.dphi;
  w.ddphi = [d, fd_step](double x) {
    return (d(x + fd_step) - d(x - fd_step)) / (2.0 * fd_step);
  };
  return w;
}

LogTransform make_weight(const WeightSpec& spec) {
  return std::visit(
      [](const auto& fam) -> LogTransform {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, MonomialFamily>) {
          return make_monomial(fam.m);
        } else if constexpr (std::is_same_v<T, ExpPowerFamily>) {
          return make_exp_power(fam.beta);
        } else if constexpr (std::is_same_v<T, LogPowerFamily>) {
          return make_log_power(fam.alpha);
        } else if constexpr (std::is_same_v<T, TropicalFamily>) {
          return make_tropical(fam.terms);
        } else {
          return make_table(fam.samples);
        }
      },
      spec.family);
}

bool is_rapid(const LogTransform& w, double slope_threshold, double x_max) {
  if (!(slope_threshold > 0.0))
    throw std::invalid_argument("is_rapid requires slope_threshold > 0");
  return w.dphi(x_max) > slope_threshold;
}

std::vector<ConvexityViolation> check_convexity(const LogTransform& w,
                                                std::span<const double> grid,
                                                double tol) {
  if (grid.size() < 3)
    throw std::invalid_argument("check_convexity requires a grid of length >= 3");
  std::vector<ConvexityViolation> out;
  for (std::size_t i = 0; i + 2 < grid.size(); ++i) {
    const double x1 = grid[i], x2 = grid[i + 1], x3 = grid[i + 2];
    if (!(x1 < x2 && x2 < x3))
      throw std::invalid_argument("check_convexity grid must be strictly increasing");
    const double lambda = (x3 - x2) / (x3 - x1);
    const double chord = lambda * w.phi(x1) + (1.0 - lambda) * w.phi(x3);
    const double mid = w.phi(x2);
    if (mid > chord + tol)
      out.push_back({x1, x2, x3, mid - chord});
  }
  return out;
}

}  // namespace tropweight

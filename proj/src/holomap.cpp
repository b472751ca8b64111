#include "tropweight/holomap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "tropweight/numerics.hpp"

namespace tropweight {
namespace {

double entry_value(const LogPowerEntry& e, double log_t) {
  // fma(0, -inf, b) would be NaN; the constant term is just b.
  if (e.exponent == 0) return e.log_coeff;
  return line_at(e.exponent, e.log_coeff, log_t);
}

void require_increasing_exponents(const LogPowerSeries& s) {
  for (std::size_t i = 1; i < s.entries.size(); ++i) {
    if (s.entries[i].exponent <= s.entries[i - 1].exponent)
      throw std::invalid_argument("log power series exponents must strictly increase");
  }
}

}  // namespace

std::optional<LogComplex> log_complex_sum(std::span<const LogComplex> parts,
                                          double window, double cancel_tol) {
  double m = kNegInf;
  for (const auto& p : parts) m = std::max(m, p.log_mod);
  if (m == kNegInf) return LogComplex{kNegInf, 0.0};

  std::size_t active = 0;
  const LogComplex* only = nullptr;
  for (const auto& p : parts) {
    if (p.log_mod >= m - window) {
      ++active;
      only = &p;
    }
  }
  if (active == 1) return LogComplex{only->log_mod, only->arg};

  double re = 0.0, im = 0.0, mass = 0.0;
  for (const auto& p : parts) {
    if (p.log_mod < m - window) continue;
    const double r = std::exp(p.log_mod - m);
    re += r * std::cos(p.arg);
    im += r * std::sin(p.arg);
    mass += r;
  }
  const double mod = std::hypot(re, im);
  if (mod <= cancel_tol * mass) return std::nullopt;
  return LogComplex{m + std::log(mod), std::atan2(im, re)};
}

std::optional<LogComplex> eval_log_complex(const LogPowerSeries& S,
                                           double log_t, double theta) {
  require_increasing_exponents(S);
  std::vector<LogComplex> parts;
  parts.reserve(S.entries.size());
  for (const auto& e : S.entries) {
    parts.push_back(
        LogComplex{entry_value(e, log_t), static_cast<double>(e.exponent) * theta});
  }
  return log_complex_sum(parts);
}

std::optional<double> eval_log_modulus(const LogPowerSeries& S, double log_t,
                                       double theta) {
  if (S.empty())
    throw std::invalid_argument("eval_log_modulus: empty series");
  const auto c = eval_log_complex(S, log_t, theta);
  if (!c) return std::nullopt;
  return c->log_mod;
}

LogPowerSeries derivative_series(const LogPowerSeries& S) {
  LogPowerSeries d;
  d.truncation_index = S.truncation_index;
  for (const auto& e : S.entries) {
    if (e.exponent == 0) continue;
    d.entries.push_back(LogPowerEntry{
        e.exponent - 1,
        e.log_coeff + std::log(static_cast<double>(e.exponent))});
  }
  return d;
}

double max_modulus_estimate(const LogPowerSeries& S, double log_t,
                            int n_phases) {
  if (n_phases < 1)
    throw std::invalid_argument("max_modulus_estimate requires n_phases >= 1");
  double best = kNegInf;
  for (int j = 0; j < n_phases; ++j) {
    const double theta =
        2.0 * std::numbers::pi * static_cast<double>(j) / n_phases;
    const auto v = eval_log_modulus(S, log_t, theta);
    if (v) best = std::max(best, *v);
  }
  return best;
}

EquivalenceCertificate verify_equivalence(
    const std::array<LogPowerSeries, 3>& g, const LogTransform& w, double h,
    std::span<const double> grid_log_t, std::span<const double> phases,
    double tol) {
  for (const auto& s : g) require_increasing_exponents(s);
  bool tail_complete = true;
  bool any_entries = false;
  for (const auto& s : g) {
    if (s.entries.empty()) continue;
    any_entries = true;
    if (!s.tail_complete) tail_complete = false;
  }
  if (!any_entries)
    throw std::invalid_argument("verify_equivalence: all three series empty");

  // The chain's final term (largest exponent overall) bounds the dropped
  // tail: past the split, terms decay by h per step of three.
  LogPowerEntry last{-1, kNegInf};
  for (const auto& s : g)
    for (const auto& e : s.entries)
      if (e.exponent > last.exponent) last = e;
  const double tail_margin = 40.0 + std::log(3.0 / (1.0 - std::exp(-h)));

  EquivalenceCertificate cert;
  cert.h = h;
  cert.paper_low = std::log(0.5) - h;
  cert.paper_high = std::log(6.0);
  cert.tolerance = tol;
  cert.c_low = kPosInf;
  cert.c_high = kNegInf;

  for (double x : grid_log_t) {
    if (!tail_complete) {
      double m = kNegInf;
      for (const auto& s : g)
        for (const auto& e : s.entries) m = std::max(m, entry_value(e, x));
      const double v_last = entry_value(last, x);
      if (v_last > m - tail_margin) {
        std::ostringstream msg;
        msg << "verify_equivalence: truncated tail is not negligible at log_t="
            << x << " (last term within " << m - v_last
            << " log-units of the dominant term); extend the chain or shrink "
               "the grid";
        throw std::runtime_error(msg.str());
      }
    }
    const double phi = w.phi(x);
    for (double theta : phases) {
      std::vector<double> comps;
      comps.reserve(3);
      for (const auto& s : g) {
        if (s.empty()) continue;
        const auto v = eval_log_modulus(s, x, theta);
        if (v && *v > kNegInf) comps.push_back(*v);
      }
      const double L = log_sum_exp(comps);
      const double diff = L - phi;
      cert.c_low = std::min(cert.c_low, diff);
      cert.c_high = std::max(cert.c_high, diff);
      const double slack_low = diff - cert.paper_low;
      const double slack_high = cert.paper_high - diff;
      if (slack_low < -tol || slack_high < -tol) {
        cert.violations.push_back(EquivalenceCertificate::Violation{
            x, theta, L, phi, slack_low, slack_high});
      }
      ++cert.points_checked;
    }
  }
  cert.passed = cert.violations.empty();
  return cert;
}

std::optional<LogComplex> eval_component(const HoloComponent& c,
                                         const MapPoint& z) {
  const MapPoint w{z.log_r, z.theta + c.input_rotation};
  std::vector<LogComplex> parts;
  parts.reserve(c.series.entries.size() + 1);
  if (c.add_identity) parts.push_back(LogComplex{w.log_r, w.theta});
  for (const auto& e : c.series.entries) {
    parts.push_back(LogComplex{entry_value(e, w.log_r),
                               static_cast<double>(e.exponent) * w.theta});
  }
  return log_complex_sum(parts);
}

HoloComponent derivative_component(const HoloComponent& c) {
  // d/dz [S(e^{ir} z) + e^{ir} z] = e^{ir} (S'(w) + 1); the outer unimodular
  // factor does not change moduli, so it is folded into the rotation.
  HoloComponent d;
  d.series = derivative_series(c.series);
  d.add_identity = false;
  d.input_rotation = c.input_rotation;
  if (c.add_identity) {
    // represent the +1 as an exponent-0 entry
    LogPowerEntry unit{0, 0.0};
    d.series.entries.insert(d.series.entries.begin(), unit);
    // exponent collision with a possible constant from the series cannot
    // happen: a derivative series has no exponent equal to 0 unless the
    // source had exponent 1; merge if so.
    if (d.series.entries.size() >= 2 &&
        d.series.entries[1].exponent == 0) {
      // |1 + a| with a > 0 on the positive axis: combine exactly
      const double b = d.series.entries[1].log_coeff;
      d.series.entries.erase(d.series.entries.begin() + 1);
      d.series.entries.front().log_coeff = std::log1p(std::exp(b));
    }
  }
  return d;
}

MapEval eval_map(const HoloMap& f, const MapPoint& z) {
  MapEval out;
  out.log_modulus_per_component.reserve(f.arity());
  std::vector<double> defined;
  double best_v = kNegInf;
  out.dominant_exponent = 0;
  for (const auto& c : f.components) {
    const auto v = eval_component(c, z);
    if (v) {
      out.log_modulus_per_component.push_back(v->log_mod);
      if (v->log_mod > kNegInf) defined.push_back(v->log_mod);
    } else {
      out.log_modulus_per_component.push_back(std::nullopt);
    }
    if (c.add_identity && z.log_r > best_v) {
      best_v = z.log_r;
      out.dominant_exponent = 1;
    }
    for (const auto& e : c.series.entries) {
      const double ev = entry_value(e, z.log_r);
      if (ev > best_v) {
        best_v = ev;
        out.dominant_exponent = e.exponent;
      }
    }
  }
  out.log_sum_of_moduli = log_sum_exp(defined);
  return out;
}

namespace {

bool point_nonvanishing(const std::vector<HoloComponent>& comps,
                        const MapPoint& z) {
  for (const auto& c : comps) {
    const auto v = eval_component(c, z);
    if (v && v->log_mod > kNegInf) return true;
  }
  return false;
}

}  // namespace

HoloMap assemble_immersion(const std::array<LogPowerSeries, 3>& g,
                           int theta_grid,
                           std::span<const MapPoint> check_grid) {
  if (theta_grid < 1)
    throw std::invalid_argument("assemble_immersion requires theta_grid >= 1");
  if (g[0].empty() || g[0].entries.front().exponent != 0)
    throw std::invalid_argument(
        "assemble_immersion: g1 must start with the exponent-0 term");
  if (!g[2].empty() && g[2].entries.front().exponent < 2)
    throw std::invalid_argument(
        "assemble_immersion: g3 must have lowest exponent >= 2");

  for (int j = 0; j < theta_grid; ++j) {
    const double theta =
        2.0 * std::numbers::pi * static_cast<double>(j) / theta_grid;
    std::vector<HoloComponent> comps{
        HoloComponent{g[0], false, 0.0},
        HoloComponent{g[1], false, 0.0},
        HoloComponent{g[2], true, theta},
    };
    std::vector<HoloComponent> dcomps;
    dcomps.reserve(comps.size());
    for (const auto& c : comps) dcomps.push_back(derivative_component(c));

    bool ok = true;
    for (const auto& z : check_grid) {
      if (!point_nonvanishing(comps, z) || !point_nonvanishing(dcomps, z)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      HoloMap f;
      f.components = std::move(comps);
      f.theta = theta;
      return f;
    }
  }
  throw std::runtime_error(
      "assemble_immersion: no rotation passed the nonvanishing checks; "
      "a denser theta grid should find one");
}

HoloMap assemble_embedding(const std::array<LogPowerSeries, 3>& g) {
  HoloMap f;
  f.components = {
      HoloComponent{g[0], false, 0.0},
      HoloComponent{g[1], false, 0.0},
      HoloComponent{g[2], false, 0.0},
      HoloComponent{LogPowerSeries{}, true, 0.0},
  };
  return f;
}

HoloMap assemble_embedding(const HoloMap& imm) {
  HoloMap f = imm;
  f.components.push_back(HoloComponent{LogPowerSeries{}, true, 0.0});
  return f;
}

TropicalSeries harmonic_square_series(const TropicalSeries& T) {
  if (T.empty())
    throw std::invalid_argument("harmonic_square_series: empty series");
  auto i = std::make_shared<std::size_t>(0);
  auto gen = [T, i]() -> std::optional<TropicalTerm> {
    const std::size_t idx = (*i)++;
    if (!T.has_term(idx)) return std::nullopt;
    const TropicalTerm t = T.term(idx);
    return TropicalTerm{2 * t.slope, 2.0 * t.intercept};
  };
  return TropicalSeries::lazy(std::move(gen));
}

TropicalSeries halve_square_series(const TropicalSeries& S) {
  if (S.empty())
    throw std::invalid_argument("halve_square_series: empty series");
  auto i = std::make_shared<std::size_t>(0);
  auto gen = [S, i]() -> std::optional<TropicalTerm> {
    const std::size_t idx = (*i)++;
    if (!S.has_term(idx)) return std::nullopt;
    const TropicalTerm t = S.term(idx);
    if (t.slope % 2 != 0)
      throw std::invalid_argument("halve_square_series: odd exponent");
    return TropicalTerm{t.slope / 2, 0.5 * t.intercept};
  };
  return TropicalSeries::lazy(std::move(gen));
}

std::vector<HarmonicEvaluator> harmonic_components(const HoloMap& f) {
  if (f.arity() < 1)
    throw std::invalid_argument("harmonic_components: empty map");
  std::vector<HarmonicEvaluator> out;
  out.reserve(2 * f.arity());
  for (const auto& comp : f.components) {
    for (const bool imag : {false, true}) {
      out.push_back([comp, imag](const MapPoint& z) -> SignedLog {
        const auto v = eval_component(comp, z);
        if (!v || v->log_mod == kNegInf) return SignedLog{kNegInf, 0};
        const double t = imag ? std::sin(v->arg) : std::cos(v->arg);
        if (t == 0.0) return SignedLog{kNegInf, 0};
        return SignedLog{v->log_mod + std::log(std::abs(t)), t > 0.0 ? 1 : -1};
      });
    }
  }
  return out;
}

}  // namespace tropweight

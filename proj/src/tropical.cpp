#include "tropweight/tropical.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "tropweight/numerics.hpp"

namespace tropweight {
namespace {

const char* kCaveat =
    "finite probes cannot certify limits: rapidity, sup h_n and the "
    "minorant ratio are evidence on the sampled ranges only";

// Tangent lookup against an exact tropical envelope. Slopes present in the
// series come back term-exact; slopes between series slopes touch at a
// vertex; slopes above a finite series are unattained.
TangentLine tangent_from_source(const TropicalSeries& src, std::int64_t k) {
  std::size_t i = 0;
  while (src.has_term(i) && src.term(i).slope < k) ++i;
  if (!src.has_term(i)) {
    return TangentLine{k, 0.0, 0.0, false, false};
  }
  const TropicalTerm t = src.term(i);
  if (t.slope == k) {
    double touch;
    if (i == 0) {
      touch = src.has_term(1) ? src.breakpoint(0) - 1.0 : 0.0;
    } else if (src.has_term(i + 1)) {
      touch = 0.5 * (src.breakpoint(i - 1) + src.breakpoint(i));
    } else {
      touch = src.breakpoint(i - 1) + 1.0;
    }
    return TangentLine{k, t.intercept, touch, true, true};
  }
  // k sits between the slopes of terms i-1 and i: the best line of slope k
  // pivots on their crossing vertex.
  const double xv = src.breakpoint(i - 1);
  const double b = std::fma(static_cast<double>(-k), xv, src.eval(xv).value);
  return TangentLine{k, b, xv, true, false};
}

}  // namespace

TangentLine tangent_line(const LogTransform& w, std::int64_t k,
                         const SlopeSearchOptions& opts) {
  if (k < 0) throw std::invalid_argument("tangent_line requires slope k >= 0");
  if (k == 0) {
    const double b = w.phi(w.x_floor);
    const bool smooth = std::abs(w.dphi(w.x_floor)) <= opts.attain_tol;
    return TangentLine{0, b, w.x_floor, true, smooth};
  }
  if (w.tropical_source) return tangent_from_source(*w.tropical_source, k);

  const double kd = static_cast<double>(k);
  const double d_floor = w.dphi(w.x_floor);
  if (d_floor >= kd) {
    // phi - kx already grows to the right of the floor: minimum at x_floor.
    const double b = std::fma(-kd, w.x_floor, w.phi(w.x_floor));
    return TangentLine{k, b, w.x_floor,
                       true, std::abs(d_floor - kd) <= opts.attain_tol * std::max(1.0, kd)};
  }
  double a = kNegInf;
  if (w.dphi_inverse) {
    const double candidate = w.dphi_inverse(kd);
    if (std::isfinite(candidate) && candidate >= w.x_floor &&
        std::abs(w.dphi(candidate) - kd) <= opts.attain_tol * std::max(1.0, kd)) {
      a = candidate;
    }
  }
  if (a == kNegInf) {
    double span = 1.0;
    double hi = w.x_floor + span;
    while (w.dphi(hi) < kd) {
      span *= 2.0;
      hi = w.x_floor + span;
      if (span > opts.x_cap) {
        return TangentLine{k, 0.0, 0.0, false, false};
      }
    }
    a = bisect_nondecreasing([&w, kd](double x) { return w.dphi(x) - kd; },
                             w.x_floor, hi, opts.xtol);
  }
  const double b = std::fma(-kd, a, w.phi(a));
  const bool smooth = std::abs(w.dphi(a) - kd) <= opts.attain_tol * std::max(1.0, kd);
  return TangentLine{k, b, a, true, smooth};
}

TropicalSeries monomial_minorant(const LogTransform& w,
                                 const SlopeSearchOptions& opts) {
  if (w.tropical_source) return *w.tropical_source;
  auto next_k = std::make_shared<std::int64_t>(0);
  auto gen = [w, opts, next_k]() -> std::optional<TropicalTerm> {
    const std::int64_t k = (*next_k)++;
    const TangentLine t = tangent_line(w, k, opts);
    // dphi is nondecreasing: once a slope is out of reach, all larger ones are.
    if (!t.attained) return std::nullopt;
    return TropicalTerm{t.slope, t.intercept};
  };
  return TropicalSeries::lazy(std::move(gen));
}

FiniteMinorant monomial_minorant_upto(const LogTransform& w, std::int64_t k_max,
                                      const SlopeSearchOptions& opts) {
  if (k_max < 0) throw std::invalid_argument("k_max must be >= 0");
  FiniteMinorant out;
  std::vector<TropicalTerm> terms;
  if (w.tropical_source) {
    const TropicalSeries& src = *w.tropical_source;
    for (std::size_t i = 0; src.has_term(i) && src.term(i).slope <= k_max; ++i)
      terms.push_back(src.term(i));
  } else {
    for (std::int64_t k = 0; k <= k_max; ++k) {
      const TangentLine t = tangent_line(w, k, opts);
      if (!t.attained) {
        out.unattained.push_back(k);
        continue;
      }
      terms.push_back(TropicalTerm{t.slope, t.intercept});
    }
  }
  if (terms.empty())
    throw std::runtime_error("monomial minorant: no slope was attained");
  out.series = essential_filter(terms);
  return out;
}

double essentiality_ratio(const LogTransform& w, const TropicalSeries& T,
                          std::span<const double> grid) {
  double sup = kNegInf;
  for (double x : grid) sup = std::max(sup, w.phi(x) - T.eval(x).value);
  return sup;
}

WeightBracket associated_weight_bracket(const LogTransform& w,
                                        const TropicalSeries& T, double t,
                                        const RapidityProbe& probe) {
  if (!(t > 0.0))
    throw std::invalid_argument("associated_weight_bracket requires t > 0");
  if (!is_rapid(w, probe.slope_threshold, probe.x_max)) {
    throw std::domain_error(
        "associated_weight_bracket: weight is non-rapid; the bracket only "
        "holds for rapid weights (polynomial case is handled separately)");
  }
  const double log_p = T.eval(std::log(t)).value;
  WeightBracket b;
  b.log_lower = log_p;
  b.log_upper = log_p + std::log(6.0);
  b.lower = std::exp(b.log_lower);
  b.upper = std::exp(b.log_upper);
  return b;
}

TangentGaps tangent_gaps(const LogTransform& w, std::int64_t n_min,
                         std::int64_t n_max, const SlopeSearchOptions& opts) {
  if (n_min < 0 || n_max < n_min)
    throw std::invalid_argument("tangent_gaps requires 0 <= n_min <= n_max");
  TangentGaps out;
  TangentLine cur = tangent_line(w, n_min, opts);
  for (std::int64_t n = n_min; n <= n_max; ++n) {
    TangentLine nxt = tangent_line(w, n + 1, opts);
    const bool ok = cur.attained && cur.smooth_tangency && nxt.attained &&
                    nxt.smooth_tangency;
    if (!ok) {
      out.omitted.push_back(n);
    } else {
      TangentGapRecord rec;
      rec.n = n;
      rec.a_n = cur.touch_x;
      rec.d_n = intersection_x(TropicalTerm{cur.slope, cur.intercept},
                               TropicalTerm{nxt.slope, nxt.intercept});
      rec.h_n = w.phi(rec.d_n) - line_at(cur.slope, cur.intercept, rec.d_n);
      out.records.push_back(rec);
    }
    cur = nxt;
  }
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::tropical_evidence: return "tropical_evidence";
    case Verdict::non_tropical_evidence: return "non_tropical_evidence";
    case Verdict::non_rapid_polynomial: return "non_rapid_polynomial";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Least-squares slope of h against n, normalized by the gap scale over the
// full span; positive values mean the gaps grow along the range.
double gap_trend(const std::vector<TangentGapRecord>& recs) {
  const std::size_t n = recs.size();
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (const auto& r : recs) {
    mx += static_cast<double>(r.n);
    my += r.h_n;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (const auto& r : recs) {
    const double dx = static_cast<double>(r.n) - mx;
    sxy += dx * (r.h_n - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) return 0.0;
  const double span = static_cast<double>(recs.back().n - recs.front().n);
  const double scale = std::max(std::abs(my), 1e-300);
  return (sxy / sxx) * span / scale;
}

}  // namespace

ClassificationReport classify(const LogTransform& w,
                              const ClassifyParams& params) {
  ClassificationReport rep;
  rep.caveat = kCaveat;
  rep.probe_slope_threshold = params.rapid_slope_threshold > 0.0
                                  ? params.rapid_slope_threshold
                                  : static_cast<double>(params.n_max + 1);
  rep.probe_x_max = params.rapid_x_max;
  rep.dphi_at_probe = w.dphi(rep.probe_x_max);
  rep.rapid = rep.dphi_at_probe > rep.probe_slope_threshold;
  if (!rep.rapid) {
    rep.verdict = Verdict::non_rapid_polynomial;
    return rep;
  }

  TangentGaps gaps = tangent_gaps(w, params.n_min, params.n_max, params.slope_search);
  rep.gaps = std::move(gaps.records);
  rep.omitted_slopes = std::move(gaps.omitted);
  if (rep.gaps.empty()) {
    rep.verdict = Verdict::inconclusive;
    return rep;
  }

  rep.sup_gap = kNegInf;
  for (const auto& r : rep.gaps) rep.sup_gap = std::max(rep.sup_gap, r.h_n);

  // Ratio evidence: phi minus the minorant envelope, probed at the tangent
  // crossings (where the gap peaks) unless the caller supplied a grid.
  const TropicalSeries minorant = monomial_minorant(w, params.slope_search);
  std::vector<double> grid = params.ratio_grid;
  if (grid.empty()) {
    grid.reserve(rep.gaps.size());
    for (const auto& r : rep.gaps) grid.push_back(r.d_n);
  }
  rep.ratio_evidence = essentiality_ratio(w, minorant, grid);

  // Tail-gap bound: 1 over the probed curvature floor when the curvature
  // stays away from zero, else an absolute cap.
  const double n_mid = 0.5 * static_cast<double>(params.n_min + params.n_max);
  std::vector<const TangentGapRecord*> tail;
  for (const auto& r : rep.gaps)
    if (static_cast<double>(r.n) > n_mid) tail.push_back(&r);
  if (tail.empty()) tail.push_back(&rep.gaps.back());

  double curv_min = kPosInf;
  for (const auto* r : tail) curv_min = std::min(curv_min, w.ddphi(r->a_n));
  if (params.gap_bound) {
    rep.tail_gap_bound = *params.gap_bound;
  } else if (curv_min > params.curvature_floor) {
    rep.tail_gap_bound = 1.0 / curv_min;
  } else {
    rep.tail_gap_bound = params.absolute_cap;
  }

  double max_tail = kNegInf;
  for (const auto* r : tail) max_tail = std::max(max_tail, r->h_n);

  const double trend = gap_trend(rep.gaps);
  const bool increasing = trend > 0.05;

  std::vector<double> early;
  const std::size_t early_count =
      std::max<std::size_t>(5, rep.gaps.size() / 10);
  for (std::size_t i = 0; i < std::min(early_count, rep.gaps.size()); ++i)
    early.push_back(rep.gaps[i].h_n);
  const double early_median = median_of(early);

  if (max_tail <= rep.tail_gap_bound && !increasing) {
    rep.verdict = Verdict::tropical_evidence;
  } else if (increasing &&
             rep.sup_gap > params.divergence_factor * early_median) {
    rep.verdict = Verdict::non_tropical_evidence;
  } else {
    rep.verdict = Verdict::inconclusive;
  }
  return rep;
}

}  // namespace tropweight

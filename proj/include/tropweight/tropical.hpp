#ifndef TROPWEIGHT_TROPICAL_HPP
#define TROPWEIGHT_TROPICAL_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tropweight/series.hpp"
#include "tropweight/weights.hpp"

namespace tropweight {

struct SlopeSearchOptions {
  double x_cap = 1e8;       // give up on a slope past this abscissa
  double xtol = 1e-12;      // bracket width for the slope equation
  double attain_tol = 1e-6; // dphi(a) == k tolerance for a genuine tangency
};

/// Best line of slope k below phi: intercept = inf_x (phi(x) - k x).
/// `attained` is false when the infimum is not reached before x_cap (u_k
/// infinite, the slope exceeds what the weight can pay for). A line may be
/// attained at a kink without a genuine tangency; `smooth_tangency`
/// distinguishes the two.
struct TangentLine {
  std::int64_t slope = 0;
  double intercept = 0.0;
  double touch_x = 0.0;
  bool attained = false;
  bool smooth_tangency = false;
};

TangentLine tangent_line(const LogTransform& w, std::int64_t k,
                         const SlopeSearchOptions& opts = {});

/// The monomial minorant as a log-domain envelope: one line per integer
/// slope k >= 0 with intercept -log u_k, essential terms only. Lazy; the
/// series ends where slopes stop being attained (non-rapid weights).
/// Weights that are themselves tropical envelopes are returned term-exact.
TropicalSeries monomial_minorant(const LogTransform& w,
                                 const SlopeSearchOptions& opts = {});

struct FiniteMinorant {
  TropicalSeries series;
  std::vector<std::int64_t> unattained;  // slopes with u_k infinite
};

/// Minorant restricted to slopes 0..k_max.
FiniteMinorant monomial_minorant_upto(const LogTransform& w, std::int64_t k_max,
                                      const SlopeSearchOptions& opts = {});

/// sup over the grid of phi(x) - envelope(x): log of the best constant
/// witnessed for the weight-vs-minorant comparison. Nonnegative when T is
/// the minorant of w.
double essentiality_ratio(const LogTransform& w, const TropicalSeries& T,
                          std::span<const double> grid);

/// Two-sided enclosure of the associated weight at radius t, valid for
/// rapid weights: [P(t), 6 P(t)], kept in log form to survive the
/// magnitudes involved.
struct WeightBracket {
  double log_lower = 0.0;
  double log_upper = 0.0;
  double lower = 0.0;   // exp of the above; may overflow to +inf
  double upper = 0.0;
};

struct RapidityProbe {
  double slope_threshold = 1e3;
  double x_max = 1e6;
};

WeightBracket associated_weight_bracket(const LogTransform& w,
                                        const TropicalSeries& T, double t,
                                        const RapidityProbe& probe = {});

/// Integer-slope tangent geometry: a_n is the tangency abscissa of slope n,
/// d_n the crossing of consecutive tangents, h_n the height of phi above
/// the crossing.
struct TangentGapRecord {
  std::int64_t n = 0;
  double a_n = 0.0;
  double d_n = 0.0;
  double h_n = 0.0;
};

struct TangentGaps {
  std::vector<TangentGapRecord> records;
  std::vector<std::int64_t> omitted;  // slopes without a genuine tangency
};

TangentGaps tangent_gaps(const LogTransform& w, std::int64_t n_min,
                         std::int64_t n_max,
                         const SlopeSearchOptions& opts = {});

enum class Verdict {
  tropical_evidence,
  non_tropical_evidence,
  non_rapid_polynomial,
  inconclusive,
};

std::string to_string(Verdict v);

struct ClassifyParams {
  std::int64_t n_min = 2;
  std::int64_t n_max = 200;
  double rapid_slope_threshold = 0.0;  // 0: use n_max + 1
  double rapid_x_max = 1e6;
  std::optional<double> gap_bound;     // override for the tail-gap bound
  double divergence_factor = 10.0;
  double curvature_floor = 1e-6;
  double absolute_cap = 10.0;
  std::vector<double> ratio_grid;      // empty: use the gap abscissas
  SlopeSearchOptions slope_search;
};

struct ClassificationReport {
  bool rapid = false;
  double probe_slope_threshold = 0.0;
  double probe_x_max = 0.0;
  double dphi_at_probe = 0.0;
  std::vector<TangentGapRecord> gaps;
  std::vector<std::int64_t> omitted_slopes;
  double sup_gap = 0.0;
  double tail_gap_bound = 0.0;
  double ratio_evidence = 0.0;
  Verdict verdict = Verdict::inconclusive;
  std::string caveat;
};

/// Graded evidence for membership in the log-tropical class: finite probes
/// of rapidity, tangent gaps and the minorant ratio. Never a proof; the
/// caveat says so.
ClassificationReport classify(const LogTransform& w,
                              const ClassifyParams& params = {});

}  // namespace tropweight

#endif

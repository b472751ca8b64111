#ifndef TROPWEIGHT_HOLOMAP_HPP
#define TROPWEIGHT_HOLOMAP_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tropweight/series.hpp"
#include "tropweight/weights.hpp"

namespace tropweight {

/// Power series with positive coefficients stored in the log domain:
/// sum of e^{log_coeff} z^{exponent}. Coefficients are never materialized.
struct LogPowerEntry {
  std::int64_t exponent = 0;
  double log_coeff = 0.0;
};

struct LogPowerSeries {
  std::vector<LogPowerEntry> entries;  // strictly increasing exponents
  std::size_t truncation_index = 0;    // chain length this view was cut from
  /// True when the view holds every term there is (the source chain
  /// terminated); false means a tail was dropped.
  bool tail_complete = false;

  bool empty() const { return entries.empty(); }
};

/// A point z = e^{log_r} e^{i theta} kept in log-polar form; radii beyond
/// double range are routine here.
struct MapPoint {
  double log_r = 0.0;
  double theta = 0.0;
};

/// A nonzero complex value e^{log_mod} e^{i arg}.
struct LogComplex {
  double log_mod = 0.0;
  double arg = 0.0;
};

/// Sum of complex values given in log-polar form, factored on the largest
/// modulus; parts more than `window` log-units down are dropped. Returns
/// nullopt when the sum is cancellation-dominated (|sum| below cancel_tol
/// times the total mass), in which case the log of the result would be
/// noise rather than a value. An empty part list is an exact zero, reported
/// as log_mod = -inf.
std::optional<LogComplex> log_complex_sum(std::span<const LogComplex> parts,
                                          double window = 40.0,
                                          double cancel_tol = 1e-13);

/// Full complex value of the series at z in log-polar form.
std::optional<LogComplex> eval_log_complex(const LogPowerSeries& S,
                                           double log_t, double theta);

/// log|S(z)| at z = e^{log_t} e^{i theta}. Nonempty S required. nullopt
/// signals a cancellation-dominated sum (a near-zero of the series).
std::optional<double> eval_log_modulus(const LogPowerSeries& S, double log_t,
                                       double theta);

/// Term-wise derivative: exponent n -> n-1, log-coefficient b -> b + log n.
LogPowerSeries derivative_series(const LogPowerSeries& S);

/// Max of eval_log_modulus over n_phases equispaced angles (0 included).
/// Positive coefficients put the true maximum on the positive axis.
double max_modulus_estimate(const LogPowerSeries& S, double log_t,
                            int n_phases);

struct EquivalenceCertificate {
  double h = 0.0;
  double c_low = 0.0;   // min over samples of log(sum |G_d|) - phi
  double c_high = 0.0;  // max of the same
  double paper_low = 0.0;   // log(1/2) - h
  double paper_high = 0.0;  // log 6
  double tolerance = 0.0;
  std::size_t points_checked = 0;
  struct Violation {
    double log_t = 0.0;
    double theta = 0.0;
    double log_sum = 0.0;
    double phi = 0.0;
    double slack_low = 0.0;
    double slack_high = 0.0;
  };
  std::vector<Violation> violations;
  bool passed = false;
};

/// Certifies the two-sided bound log(1/2) - h <= log(sum |G_d|) - phi
/// <= log 6 on the sample set. The dropped chain tail must sit at least 40
/// log-units below the dominant term at every radius; if not, this throws
/// rather than certifying on an unsound truncation.
EquivalenceCertificate verify_equivalence(
    const std::array<LogPowerSeries, 3>& g, const LogTransform& w, double h,
    std::span<const double> grid_log_t, std::span<const double> phases,
    double tol = 1e-9);

/// One coordinate of a holomorphic map: series(e^{i rot} z) plus optionally
/// the identity e^{i rot} z itself.
struct HoloComponent {
  LogPowerSeries series;
  bool add_identity = false;
  double input_rotation = 0.0;
};

struct HoloMap {
  std::vector<HoloComponent> components;
  double theta = 0.0;  // accepted rotation for the third coordinate
  std::size_t arity() const { return components.size(); }
};

struct MapEval {
  std::vector<std::optional<double>> log_modulus_per_component;
  double log_sum_of_moduli = 0.0;
  std::int64_t dominant_exponent = 0;
};

MapEval eval_map(const HoloMap& f, const MapPoint& z);
std::optional<LogComplex> eval_component(const HoloComponent& c,
                                         const MapPoint& z);
HoloComponent derivative_component(const HoloComponent& c);

/// (g1, g2, z + g3(e^{i theta} z)) with theta picked by scanning
/// `theta_grid` equispaced angles, accepting the first one for which every
/// check point has a nonvanishing component and a nonvanishing derivative
/// component. Throws when no angle passes (try a denser grid).
HoloMap assemble_immersion(const std::array<LogPowerSeries, 3>& g,
                           int theta_grid, std::span<const MapPoint> check_grid);

/// Four-coordinate embedding (g1, g2, g3, z); the identity coordinate makes
/// injectivity structural.
HoloMap assemble_embedding(const std::array<LogPowerSeries, 3>& g);
/// Variant appending z to an already assembled 3-component map.
HoloMap assemble_embedding(const HoloMap& imm);

/// Term doubling (k, b) -> (2k, 2b): the envelope of the result is the log
/// transform of the squared weight, with even exponents only.
TropicalSeries harmonic_square_series(const TropicalSeries& T);
/// Exact inverse of harmonic_square_series.
TropicalSeries halve_square_series(const TropicalSeries& S);

/// A real value sign * e^{log_abs}; sign 0 means an exact or
/// cancellation-level zero.
struct SignedLog {
  double log_abs = 0.0;
  int sign = 0;
};

using HarmonicEvaluator = std::function<SignedLog(const MapPoint&)>;

/// The 2n real parts (Re f_1, Im f_1, ..., Re f_n, Im f_n); their squares
/// sum to |f|^2 identically.
std::vector<HarmonicEvaluator> harmonic_components(const HoloMap& f);

}  // namespace tropweight

#endif

#ifndef TROPWEIGHT_THINNING_HPP
#define TROPWEIGHT_THINNING_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "tropweight/holomap.hpp"
#include "tropweight/series.hpp"
#include "tropweight/weights.hpp"

namespace tropweight {

/// Sparse sub-envelope of a tropical series: selected terms stay within h
/// of the full envelope while consecutive selections separate fast enough
/// for the lacunary split.
struct ThinnedChain {
  double h = 0.0;
  std::vector<TropicalTerm> selected;
  /// breakpoints_x[k] is the crossing of selected[k-1] and selected[k];
  /// breakpoints_x[0] is the -inf sentinel. Same length as `selected`.
  std::vector<double> breakpoints_x;
  TropicalSeries source;
  /// True when a finite source ran out of terms and the chain terminated.
  bool source_exhausted = false;

  std::size_t size() const { return selected.size(); }
  /// Index of the segment [x_k, x_{k+1}) containing x.
  std::size_t segment_of(double x) const;
};

/// Inductive thinning with separation parameter h >= 4: starting from the
/// slope-0 term, repeatedly jump to the farthest term whose crossing with
/// the current one stays strictly above envelope - h. At most k_max terms
/// are emitted per call. Finite sources yield a terminating chain.
ThinnedChain thin(const TropicalSeries& T, double h, std::size_t k_max);

struct CheckEntry {
  std::size_t k = 0;     // 1-based chain index the inequality is anchored at
  double x = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;    // lhs - rhs; negative beyond tolerance = violation
};

struct SeparationReport {
  /// Exact endpoint certificates: both sides are affine, so checking each
  /// half-line at its endpoint settles the whole half-line.
  std::vector<CheckEntry> endpoint_certificates;
  std::vector<CheckEntry> violations;
  bool passed = false;
};

/// Checks the chain separation inequalities
///   l_{k-1}(x) >= l_{k+2}(x) + h  for x <= x_{k-1},
///   l_{k+2}(x) >= l_{k-1}(x) + h  for x >= x_{k+1},
/// at the applicable grid points and exactly at the endpoints.
SeparationReport verify_separation(const ThinnedChain& chain,
                                   std::span<const double> grid,
                                   double tol = 1e-12);

struct ChainBoundsReport {
  std::vector<CheckEntry> violations;  // inequality index stored in `k` tag
  double worst_slack_i = 0.0;
  double worst_slack_ii = 0.0;
  double worst_slack_iii = 0.0;
  double max_phi_minus_chain = 0.0;  // observed depth of the chain under phi
  bool passed = false;
};

/// Certifies, in the log domain, the three chain inequalities on the grid:
///   (i)   l_k(x) <= phi(x)                          for all k;
///   (ii)  phi(x) - h <= l_k(x)                      on segment k;
///   (iii) logsumexp over |m - k| >= 3 of l_m(x)
///           <= log(1/2) + l_k(x)                    on segment k.
/// A selected term exceeding phi beyond tolerance is a hard error (the
/// chain does not belong to this weight), not a report entry.
ChainBoundsReport verify_chain_bounds(const ThinnedChain& chain,
                                      const LogTransform& w,
                                      std::span<const double> grid,
                                      double tol = 1e-12);

/// Lacunary split by chain index mod 3: entry k (1-based) goes to series
/// (k-1) mod 3. Exponent sets are disjoint and cover the chain exactly.
std::array<LogPowerSeries, 3> split(const ThinnedChain& chain);

}  // namespace tropweight

#endif

#ifndef TROPWEIGHT_SERIES_HPP
#define TROPWEIGHT_SERIES_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

namespace tropweight {

/// One affine term b + n*x of a tropical power series. Slopes are
/// nonnegative integers (monomial exponents in the multiplicative picture).
struct TropicalTerm {
  std::int64_t slope = 0;
  double intercept = 0.0;

  double at(double x) const;
  friend bool operator==(const TropicalTerm&, const TropicalTerm&) = default;
};

/// Abscissa where two terms of distinct slope cross.
double intersection_x(const TropicalTerm& a, const TropicalTerm& b);

/// Upper envelope of affine terms with strictly increasing integer slopes,
/// every stored term essential (it strictly wins on a nonempty open
/// interval). Finite series are fully materialized; a series may instead be
/// backed by a generator that yields candidate terms in strictly increasing
/// slope order, resolved on demand.
///
/// Lazily resolved terms are final once they are no longer the top of the
/// envelope stack: a later term can only displace the current top, never a
/// term whose dominance interval is already closed on the right. Resolution
/// and reads share one lock, so concurrent readers see a consistent prefix.
class TropicalSeries {
 public:
  /// Yields the next candidate term, or nullopt when exhausted.
  using Generator = std::function<std::optional<TropicalTerm>()>;

  TropicalSeries() = default;

  /// Series backed by a generator. A generator may run dry (the series is
  /// then finite); passing must_be_unbounded makes exhaustion an error, for
  /// series that claim infinitely many terms.
  static TropicalSeries lazy(Generator gen, bool must_be_unbounded = false);

  bool lazy_backed() const;

  /// Number of terms, known only for fully resolved series.
  std::optional<std::size_t> size() const;
  bool empty() const;

  /// True when term `i` exists (resolving as needed).
  bool has_term(std::size_t i) const;
  TropicalTerm term(std::size_t i) const;
  /// Crossing abscissa of terms i and i+1.
  double breakpoint(std::size_t i) const;

  struct Eval {
    double value = 0.0;
    std::int64_t slope = 0;  // attaining term; ties report the smaller slope
    std::size_t index = 0;
  };
  Eval eval(double x) const;

  /// First `count` terms (or all of them if fewer exist).
  std::vector<TropicalTerm> prefix(std::size_t count) const;

 private:
  friend TropicalSeries essential_filter(std::span<const TropicalTerm>);

  struct State {
    mutable std::mutex mutex;
    std::vector<TropicalTerm> terms;   // envelope stack
    std::vector<double> breakpoints;   // breakpoints[i] between terms i, i+1
    Generator gen;                     // empty for finite series
    bool exhausted = true;
    bool must_be_unbounded = false;
    std::int64_t last_slope_seen = -1;
  };

  explicit TropicalSeries(std::shared_ptr<State> s) : state_(std::move(s)) {}

  // All require state_->mutex held.
  static void push_term(State& st, const TropicalTerm& t);
  static bool pull_one(State& st);
  void resolve_index(State& st, std::size_t i) const;
  void resolve_past(State& st, double x) const;
  std::size_t usable_count(const State& st) const;

  std::shared_ptr<State> state_;
};

/// Upper envelope of an arbitrary finite term list: drops duplicate slopes
/// (keeping the largest intercept) and every term that never strictly
/// exceeds the rest. Rejects empty input. Order-insensitive.
TropicalSeries essential_filter(std::span<const TropicalTerm> raw);

}  // namespace tropweight

#endif

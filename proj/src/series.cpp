#include "tropweight/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tropweight/numerics.hpp"

namespace tropweight {
namespace {
// Guard against generators whose envelope never dominates (an invalid
// tropical series has an infinite supremum somewhere).
constexpr std::size_t kResolveBudget = 8'000'000;
}  // namespace

double TropicalTerm::at(double x) const { return line_at(slope, intercept, x); }

double intersection_x(const TropicalTerm& a, const TropicalTerm& b) {
  return (a.intercept - b.intercept) / static_cast<double>(b.slope - a.slope);
}

TropicalSeries TropicalSeries::lazy(Generator gen, bool must_be_unbounded) {
  if (!gen) throw std::invalid_argument("lazy series requires a generator");
  auto st = std::make_shared<State>();
  st->gen = std::move(gen);
  st->exhausted = false;
  st->must_be_unbounded = must_be_unbounded;
  return TropicalSeries(std::move(st));
}

bool TropicalSeries::lazy_backed() const {
  return state_ && !state_->exhausted;
}

std::optional<std::size_t> TropicalSeries::size() const {
  if (!state_) return 0;
  std::lock_guard lock(state_->mutex);
  if (state_->exhausted) return state_->terms.size();
  return std::nullopt;
}

bool TropicalSeries::empty() const {
  if (!state_) return true;
  std::lock_guard lock(state_->mutex);
  return state_->terms.empty() && state_->exhausted;
}

void TropicalSeries::push_term(State& st, const TropicalTerm& t) {
  if (t.slope < 0) throw std::invalid_argument("tropical term slope must be >= 0");
  if (!st.terms.empty() && t.slope == st.terms.back().slope) {
    if (t.intercept <= st.terms.back().intercept) return;
    st.terms.pop_back();
    if (!st.breakpoints.empty()) st.breakpoints.pop_back();
  }
  while (!st.terms.empty()) {
    const double x_new = intersection_x(st.terms.back(), t);
    if (st.terms.size() == 1) {
      st.breakpoints.push_back(x_new);
      break;
    }
    // The displaced term would dominate only on an empty interval: the
    // newcomer takes over at or before the point where the top term starts.
    if (x_new <= st.breakpoints.back()) {
      st.terms.pop_back();
      st.breakpoints.pop_back();
    } else {
      st.breakpoints.push_back(x_new);
      break;
    }
  }
  st.terms.push_back(t);
}

bool TropicalSeries::pull_one(State& st) {
  if (st.exhausted) return false;
  std::optional<TropicalTerm> next = st.gen();
  if (!next) {
    st.exhausted = true;
    st.gen = nullptr;
    if (st.must_be_unbounded) {
      throw std::runtime_error(
          "invalid lazy series: generator exhausted before domination");
    }
    return false;
  }
  if (next->slope <= st.last_slope_seen) {
    throw std::runtime_error(
        "invalid lazy series: generator slopes must be strictly increasing");
  }
  st.last_slope_seen = next->slope;
  push_term(st, *next);
  return true;
}

std::size_t TropicalSeries::usable_count(const State& st) const {
  // The top of a still-growing envelope stack may yet be displaced.
  if (st.exhausted) return st.terms.size();
  return st.terms.empty() ? 0 : st.terms.size() - 1;
}

void TropicalSeries::resolve_index(State& st, std::size_t i) const {
  std::size_t pulls = 0;
  while (usable_count(st) <= i && pull_one(st)) {
    if (++pulls > kResolveBudget)
      throw std::runtime_error("invalid lazy series: resolution budget exceeded");
  }
}

void TropicalSeries::resolve_past(State& st, double x) const {
  // The envelope is final on (-inf, x] once the top term's dominance
  // interval opens strictly beyond x; keeping two breakpoints past x leaves
  // one full safety term and makes repeated evals cheap.
  std::size_t pulls = 0;
  auto settled = [&st, x] {
    const auto& bp = st.breakpoints;
    return bp.size() >= 2 && bp[bp.size() - 2] > x;
  };
  while (!st.exhausted && !settled()) {
    if (!pull_one(st)) return;
    if (++pulls > kResolveBudget)
      throw std::runtime_error("invalid lazy series: resolution budget exceeded");
  }
}

bool TropicalSeries::has_term(std::size_t i) const {
  if (!state_) return false;
  std::lock_guard lock(state_->mutex);
  resolve_index(*state_, i);
  return i < usable_count(*state_);
}

TropicalTerm TropicalSeries::term(std::size_t i) const {
  if (!state_) throw std::out_of_range("term index on empty series");
  std::lock_guard lock(state_->mutex);
  resolve_index(*state_, i);
  if (i >= usable_count(*state_))
    throw std::out_of_range("tropical series term index out of range");
  return state_->terms[i];
}

double TropicalSeries::breakpoint(std::size_t i) const {
  if (!state_) throw std::out_of_range("breakpoint index on empty series");
  std::lock_guard lock(state_->mutex);
  resolve_index(*state_, i + 1);
  if (i + 1 >= usable_count(*state_))
    throw std::out_of_range("tropical series breakpoint index out of range");
  return state_->breakpoints[i];
}

TropicalSeries::Eval TropicalSeries::eval(double x) const {
  if (!state_) throw std::domain_error("eval on empty tropical series");
  std::lock_guard lock(state_->mutex);
  resolve_past(*state_, x);
  const auto& st = *state_;
  if (st.terms.empty()) throw std::domain_error("eval on empty tropical series");
  // First breakpoint >= x; at an exact tie the left (smaller slope) term
  // is reported.
  const auto it =
      std::lower_bound(st.breakpoints.begin(), st.breakpoints.end(), x);
  const auto idx = static_cast<std::size_t>(it - st.breakpoints.begin());
  const TropicalTerm& t = st.terms[idx];
  return Eval{t.at(x), t.slope, idx};
}

std::vector<TropicalTerm> TropicalSeries::prefix(std::size_t count) const {
  if (!state_ || count == 0) return {};
  std::lock_guard lock(state_->mutex);
  resolve_index(*state_, count - 1);
  const std::size_t n = std::min(count, usable_count(*state_));
  return {state_->terms.begin(), state_->terms.begin() + static_cast<long>(n)};
}

TropicalSeries essential_filter(std::span<const TropicalTerm> raw) {
  if (raw.empty())
    throw std::invalid_argument("essential_filter: empty term list");
  std::vector<TropicalTerm> sorted(raw.begin(), raw.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.slope != b.slope ? a.slope < b.slope : a.intercept < b.intercept;
  });
  auto st = std::make_shared<TropicalSeries::State>();
  for (const TropicalTerm& t : sorted) TropicalSeries::push_term(*st, t);
  return TropicalSeries(std::move(st));
}

}  // namespace tropweight

#include "tropweight/thinning.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tropweight/numerics.hpp"

namespace tropweight {

std::size_t ThinnedChain::segment_of(double x) const {
  // breakpoints_x[0] is -inf; segment k covers [x_k, x_{k+1}).
  const auto it =
      std::upper_bound(breakpoints_x.begin(), breakpoints_x.end(), x);
  const std::size_t idx = static_cast<std::size_t>(it - breakpoints_x.begin());
  return idx == 0 ? 0 : std::min(idx - 1, selected.size() - 1);
}

ThinnedChain thin(const TropicalSeries& T, double h, std::size_t k_max) {
  if (!(h >= 4.0)) throw std::invalid_argument("thin: h must be >= 4");
  if (k_max < 1) throw std::invalid_argument("thin: k_max must be >= 1");
  if (T.empty()) throw std::invalid_argument("thin: series has no terms");
  if (T.term(0).slope != 0) {
    throw std::invalid_argument(
        "thin: first term must have slope 0 (filter the minorant first)");
  }

  ThinnedChain chain;
  chain.h = h;
  chain.source = T;
  chain.selected.push_back(T.term(0));
  chain.breakpoints_x.push_back(kNegInf);

  std::size_t m = 0;  // index of the current selection in T
  while (chain.selected.size() < k_max) {
    if (!T.has_term(m + 1)) {
      chain.source_exhausted = true;
      break;
    }
    const TropicalTerm cur = chain.selected.back();
    // Largest s whose crossing with the current term stays strictly above
    // envelope - h. s = 1 always qualifies (the crossing with the next
    // essential term lies on the envelope itself).
    std::size_t s = 1;
    while (T.has_term(m + s + 1)) {
      const TropicalTerm cand = T.term(m + s + 1);
      const double xi = intersection_x(cur, cand);
      const double y = cur.at(xi);
      if (y > T.eval(xi).value - h) {
        ++s;
      } else {
        break;
      }
    }
    const TropicalTerm next = T.term(m + s);
    chain.breakpoints_x.push_back(intersection_x(cur, next));
    chain.selected.push_back(next);
    m += s;
  }
  if (!chain.source_exhausted && !T.has_term(m + 1)) chain.source_exhausted = true;
  return chain;
}

SeparationReport verify_separation(const ThinnedChain& chain,
                                   std::span<const double> grid, double tol) {
  const std::size_t K = chain.size();
  if (K < 4)
    throw std::invalid_argument("verify_separation needs at least 4 chain terms");
  SeparationReport rep;
  const auto& sel = chain.selected;
  const auto& bp = chain.breakpoints_x;

  auto record = [&](std::size_t k, double x, double lhs, double rhs) {
    CheckEntry e{k, x, lhs, rhs, lhs - rhs};
    if (e.slack < -tol) rep.violations.push_back(e);
    return e;
  };

  // 1-based index k runs over 2..K-2; sel[k-2] is l_{k-1}, sel[k+1] is
  // l_{k+2}.
  for (std::size_t k = 2; k + 2 <= K; ++k) {
    const TropicalTerm& lo = sel[k - 2];
    const TropicalTerm& hi = sel[k + 1];
    const double x_left = bp[k - 1];   // x_{k-1}
    const double x_right = bp[k + 1];  // x_{k+1}
    // Affine difference is monotone: the endpoint settles each half-line.
    rep.endpoint_certificates.push_back(
        record(k, x_left, lo.at(x_left), hi.at(x_left) + chain.h));
    rep.endpoint_certificates.push_back(
        record(k, x_right, hi.at(x_right), lo.at(x_right) + chain.h));
    for (double x : grid) {
      if (x <= x_left) record(k, x, lo.at(x), hi.at(x) + chain.h);
      if (x >= x_right) record(k, x, hi.at(x), lo.at(x) + chain.h);
    }
  }
  rep.passed = rep.violations.empty();
  return rep;
}

ChainBoundsReport verify_chain_bounds(const ThinnedChain& chain,
                                      const LogTransform& w,
                                      std::span<const double> grid,
                                      double tol) {
  if (chain.size() == 0)
    throw std::invalid_argument("verify_chain_bounds: empty chain");
  ChainBoundsReport rep;
  rep.worst_slack_i = kPosInf;
  rep.worst_slack_ii = kPosInf;
  rep.worst_slack_iii = kPosInf;
  rep.max_phi_minus_chain = kNegInf;
  const auto& sel = chain.selected;
  const std::size_t K = sel.size();

  std::vector<double> tail;
  tail.reserve(K);
  for (double x : grid) {
    const double phi = w.phi(x);

    // (i) every selected term stays below phi: mismatch is a hard error.
    for (std::size_t k = 0; k < K; ++k) {
      const double v = sel[k].at(x);
      const double slack = phi - v;
      rep.worst_slack_i = std::min(rep.worst_slack_i, slack);
      if (slack < -tol) {
        std::ostringstream msg;
        msg << "verify_chain_bounds: selected term " << k << " exceeds phi at x="
            << x << " by " << -slack << "; chain does not minorize this weight";
        throw std::runtime_error(msg.str());
      }
    }

    const std::size_t k = chain.segment_of(x);
    const double lk = sel[k].at(x);
    rep.max_phi_minus_chain = std::max(rep.max_phi_minus_chain, phi - lk);

    // (ii) the active term carries the weight up to e^{-h} on its segment.
    {
      const double lhs = lk;
      const double rhs = phi - chain.h;
      const double slack = lhs - rhs;
      rep.worst_slack_ii = std::min(rep.worst_slack_ii, slack);
      if (slack < -tol)
        rep.violations.push_back(CheckEntry{2, x, lhs, rhs, slack});
    }

    // (iii) far terms sum to at most half of the active one.
    tail.clear();
    for (std::size_t m = 0; m < K; ++m) {
      const std::size_t d = m > k ? m - k : k - m;
      if (d >= 3) tail.push_back(sel[m].at(x));
    }
    if (!tail.empty()) {
      const double lhs = log_sum_exp(tail, 40.0);
      const double rhs = std::log(0.5) + lk;
      const double slack = rhs - lhs;
      rep.worst_slack_iii = std::min(rep.worst_slack_iii, slack);
      if (slack < -tol)
        rep.violations.push_back(CheckEntry{3, x, lhs, rhs, slack});
    }
  }
  rep.passed = rep.violations.empty();
  return rep;
}

std::array<LogPowerSeries, 3> split(const ThinnedChain& chain) {
  if (chain.size() == 0) throw std::invalid_argument("split: empty chain");
  std::array<LogPowerSeries, 3> g;
  for (auto& s : g) {
    s.truncation_index = chain.size();
    s.tail_complete = chain.source_exhausted;
  }
  for (std::size_t j = 0; j < chain.size(); ++j) {
    const TropicalTerm& t = chain.selected[j];
    g[j % 3].entries.push_back(LogPowerEntry{t.slope, t.intercept});
  }
  return g;
}

}  // namespace tropweight

// Binomial tail probabilities, the geometric-series tail bound, and the
// closed-form probabilities of the per-row erasure events.
//
// All pmf evaluation happens in the log domain via lgamma; tail sums scale
// the terms by their largest member and accumulate with Neumaier's
// compensated summation.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace gabor {

/// ceil(v), except that values within 1e-9 (relative) of an integer snap to
/// it, so that e.g. 100 * 0.3 yields 30 rather than 31.
inline double snapped_ceil(double v) {
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v))) return r;
  return std::ceil(v);
}

inline double snapped_floor(double v) {
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v))) return r;
  return std::floor(v);
}

/// log C(n, y) theta^y (1 - theta)^(n - y) for 0 <= y <= n and 0 < theta < 1.
inline double binom_log_pmf(std::size_t n, std::size_t y, double theta) {
  const double nd = static_cast<double>(n), yd = static_cast<double>(y);
  return std::lgamma(nd + 1.0) - std::lgamma(yd + 1.0) - std::lgamma(nd - yd + 1.0) + yd * std::log(theta) +
         (nd - yd) * std::log1p(-theta);
}

namespace detail {

inline void require_theta(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in [0, 1]");
}

/// P(lo <= X <= hi) for X ~ B(n, theta), with lo, hi already clamped to [0, n].
inline double binom_range(std::size_t n, double theta, std::size_t lo, std::size_t hi) {
  if (lo > hi) return 0.0;
  if (theta == 0.0) return lo == 0 ? 1.0 : 0.0;
  if (theta == 1.0) return hi == n ? 1.0 : 0.0;
  if (lo == 0 && hi == n) return 1.0;
  std::vector<double> logs(hi - lo + 1);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t y = lo; y <= hi; ++y) {
    logs[y - lo] = binom_log_pmf(n, y, theta);
    top = std::max(top, logs[y - lo]);
  }
  double sum = 0.0, comp = 0.0;
  for (double l : logs) {
    const double term = std::exp(l - top);
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return std::clamp((sum + comp) * std::exp(top), 0.0, 1.0);
}

}  // namespace detail

/// P(X >= threshold) for X ~ B(n, theta); the first included count is ceil(threshold).
inline double binom_tail_upper(std::size_t n, double theta, double threshold) {
  detail::require_theta(theta);
  const double first = snapped_ceil(threshold);
  if (first <= 0.0) return 1.0;
  if (first > static_cast<double>(n)) return 0.0;
  return detail::binom_range(n, theta, static_cast<std::size_t>(first), n);
}

/// P(X <= threshold) for X ~ B(n, theta).
inline double binom_tail_lower(std::size_t n, double theta, double threshold) {
  detail::require_theta(theta);
  const double last = snapped_floor(threshold);
  if (last < 0.0) return 0.0;
  if (last >= static_cast<double>(n)) return 1.0;
  return detail::binom_range(n, theta, 0, static_cast<std::size_t>(last));
}

/// The geometric-series bound on P(X >= nk) for theta < k < 1.
struct TailBoundResult {
  double exact_tail = 0.0;   // P(X >= ceil(nk))
  double lemma_bound = 0.0;  // geometric_prefactor * C(n, y0) theta^y0 (1 - theta)^(n - y0)
  double geometric_prefactor = 0.0;  // 1 / (1 - ratio)
  double ratio = 0.0;  // (n - y0) theta / ((y0 + 1)(1 - theta))
  double leading_term = 0.0;
  std::size_t first_count = 0;  // y0 = ceil(nk)
  bool valid = false;  // ratio < 1, so the series converges and the bound applies
};

/// Bounds the upper tail by its first term times a geometric series whose
/// ratio is the largest ratio between consecutive summands, attained at y0.
inline TailBoundResult lemma_tail_bound(std::size_t n, double theta, double k) {
  if (n == 0) throw std::invalid_argument("lemma_tail_bound: n must be positive");
  if (!(theta > 0.0 && theta < k && k < 1.0)) {
    throw std::invalid_argument("lemma_tail_bound: requires 0 < theta < k < 1");
  }
  TailBoundResult r;
  const double y0 = snapped_ceil(static_cast<double>(n) * k);
  r.first_count = static_cast<std::size_t>(y0);
  const double nd = static_cast<double>(n);
  r.ratio = (nd - y0) * theta / ((y0 + 1.0) * (1.0 - theta));
  r.valid = r.ratio < 1.0;
  r.geometric_prefactor = r.valid ? 1.0 / (1.0 - r.ratio) : std::numeric_limits<double>::infinity();
  r.leading_term = std::exp(binom_log_pmf(n, r.first_count, theta));
  r.lemma_bound = r.valid ? r.geometric_prefactor * r.leading_term : std::numeric_limits<double>::infinity();
  r.exact_tail = binom_tail_upper(n, theta, y0);
  return r;
}

/// P(M_max < c) = P(X < c)^t for t independent rows, X ~ B(n, theta).
inline double prob_mmax_below(std::size_t n, std::size_t t, double theta, double c) {
  detail::require_theta(theta);
  if (t == 0) throw std::invalid_argument("prob_mmax_below: t must be positive");
  const double last = snapped_ceil(c) - 1.0;  // X < c  <=>  X <= ceil(c) - 1
  const double below = binom_tail_lower(n, theta, last);
  if (below == 0.0) return 0.0;
  const double above = binom_tail_upper(n, theta, last + 1.0);
  const double log_row = above < 0.5 ? std::log1p(-above) : std::log(below);
  return std::exp(static_cast<double>(t) * log_row);
}

/// P(M_min < c) = 1 - P(X >= c)^t.
inline double prob_mmin_below(std::size_t n, std::size_t t, double theta, double c) {
  detail::require_theta(theta);
  if (t == 0) throw std::invalid_argument("prob_mmin_below: t must be positive");
  const double last = snapped_ceil(c) - 1.0;
  const double above = binom_tail_upper(n, theta, last + 1.0);
  if (above == 0.0) return 1.0;
  const double below = binom_tail_lower(n, theta, last);
  const double log_row = below < 0.5 ? std::log1p(-below) : std::log(above);
  return -std::expm1(static_cast<double>(t) * log_row);
}

struct SupportBudget {
  std::size_t per_row = 0;  // largest E_max with E_max < 1 / (2 theta)
  std::size_t total = 0;    // t * per_row
};

inline SupportBudget support_budget(double theta, std::size_t t) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("support_budget: requires 0 < theta < 1");
  const double per_row = snapped_ceil(1.0 / (2.0 * theta)) - 1.0;
  SupportBudget b;
  b.per_row = static_cast<std::size_t>(std::max(0.0, per_row));
  b.total = t * b.per_row;
  return b;
}

}  // namespace gabor

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "chac/dendrogram.hpp"

namespace chac {

/// loss[K - 1] for K = 1..p: pseudo-inertia of the K-cluster cut, i.e. the
/// sum of the heights of the first p - K merges. loss(p) = 0.
inline std::vector<double> loss_curve(const Dendrogram& d) {
  const std::size_t p = d.size();
  std::vector<double> loss(p, 0.0);
  long double acc = 0;
  for (std::size_t k = p; k-- > 1;) {
    // loss(k) = loss(k + 1) + height of merge p - k (1-based)
    acc += d.merges()[p - k - 1].height;
    loss[k - 1] = static_cast<double>(acc);
  }
  return loss;
}

/// Expected proportions of the pieces of a unit stick broken at random into
/// n pieces, largest first: E_i = (1/n) sum_{k=i}^{n} 1/k.
inline std::vector<double> broken_stick_expectations(std::size_t n) {
  std::vector<double> out(n);
  long double tail = 0;
  for (std::size_t i = n; i >= 1; --i) {
    tail += 1.0L / static_cast<long double>(i);
    out[i - 1] = static_cast<double>(tail / static_cast<long double>(n));
  }
  return out;
}

/// log C(n, k) via log-gamma.
inline double log_binomial(std::size_t n, std::size_t k) {
  if (k > n) throw std::invalid_argument("log_binomial requires k <= n");
  if (k == 0 || k == n) return 0.0;
  const auto ln = static_cast<double>(n);
  const auto lk = static_cast<double>(k);
  return std::lgamma(ln + 1.0) - std::lgamma(lk + 1.0) - std::lgamma(ln - lk + 1.0);
}

struct Selection {
  std::size_t k = 1;
  /// Number of negative heights treated as zero (broken stick only).
  std::size_t clamped_heights = 0;
  /// Calibrated slope (slope heuristic only).
  double slope = 0.0;
};

/// Broken-stick stopping rule. Starting from the root, repeatedly undo the
/// available merge with the largest height; the i-th split is accepted while
/// its share of the total dispersion is at least E_i with n = p - 1 pieces.
inline Selection select_broken_stick(const Dendrogram& d) {
  const std::size_t p = d.size();
  if (p < 2) throw std::invalid_argument("broken stick needs at least 2 objects");
  const auto& merges = d.merges();

  Selection out;
  std::vector<double> disp(merges.size());
  long double total = 0;
  for (std::size_t t = 0; t < merges.size(); ++t) {
    disp[t] = std::max(merges[t].height, 0.0);
    out.clamped_heights += merges[t].height < 0.0;
    total += disp[t];
  }
  if (total <= 0) return out;

  const auto expected = broken_stick_expectations(merges.size());
  // (height, merge index): largest height first, later merge first on ties
  std::priority_queue<std::pair<double, std::size_t>> splittable;
  splittable.push({disp.back(), merges.size() - 1});
  std::size_t i = 0;
  while (!splittable.empty()) {
    const auto [h, t] = splittable.top();
    splittable.pop();
    if (static_cast<double>(h / total) < expected[i]) break;
    ++out.k;
    ++i;
    for (const NodeRef child : {merges[t].left, merges[t].right}) {
      if (child > 0) {
        const auto c = static_cast<std::size_t>(child - 1);
        splittable.push({disp[c], c});
      }
    }
  }
  return out;
}

struct SlopeOptions {
  /// Fraction of the K range, taken from the top, used to fit the slope.
  double fit_fraction = 0.5;
  /// Penalty multiplier applied to the fitted slope.
  double multiplier = 2.0;
  /// Theil-Sen uses all point pairs up to this many fit points; larger
  /// windows are thinned to evenly spaced points.
  std::size_t max_fit_points = 1500;
};

/// Median of pairwise slopes (Theil-Sen). Pairs with equal x are skipped;
/// returns 0 when no usable pair exists.
inline double theil_sen_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> slopes;
  for (std::size_t a = 0; a < x.size(); ++a) {
    for (std::size_t b = a + 1; b < x.size(); ++b) {
      if (x[b] != x[a]) slopes.push_back((y[b] - y[a]) / (x[b] - x[a]));
    }
  }
  if (slopes.empty()) return 0.0;
  const std::size_t mid = slopes.size() / 2;
  std::nth_element(slopes.begin(), slopes.begin() + static_cast<std::ptrdiff_t>(mid), slopes.end());
  const double upper = slopes[mid];
  if (slopes.size() % 2 == 1) return upper;
  const double lower =
      *std::max_element(slopes.begin(), slopes.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

/// Slope heuristic with penalty shape log C(p - 1, K - 1), given the loss
/// curve of a p-object hierarchy. The slope magnitude is fitted robustly on
/// the largest-K part of [1, k_max], and K minimizes
/// loss(K) + multiplier * slope * shape(K).
inline Selection select_slope_heuristic(const std::vector<double>& loss, std::size_t k_max,
                                        const SlopeOptions& opts = {}) {
  const std::size_t p = loss.size();
  if (k_max < 2) throw std::invalid_argument("k_max must be at least 2");
  if (k_max > p) throw std::invalid_argument("k_max must not exceed the number of objects");
  if (!(opts.fit_fraction > 0.0 && opts.fit_fraction <= 1.0)) {
    throw std::invalid_argument("fit fraction must lie in (0, 1]");
  }

  auto shape = [&](std::size_t k) { return log_binomial(p - 1, k - 1); };

  const auto window = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(opts.fit_fraction * static_cast<double>(k_max))), 2,
      k_max);
  const std::size_t k_lo = k_max - window + 1;
  const std::size_t points = std::min(window, std::max<std::size_t>(opts.max_fit_points, 2));
  std::vector<double> xs, ys;
  for (std::size_t n = 0; n < points; ++n) {
    const std::size_t k =
        points == window ? k_lo + n : k_lo + n * (window - 1) / (points - 1);
    xs.push_back(shape(k));
    ys.push_back(loss[k - 1]);
  }

  Selection out;
  out.slope = std::abs(theil_sen_slope(xs, ys));
  double best = 0.0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    const double crit = loss[k - 1] + opts.multiplier * out.slope * shape(k);
    if (k == 1 || crit < best) {
      best = crit;
      out.k = k;
    }
  }
  return out;
}

inline Selection select_slope_heuristic(const Dendrogram& d, std::size_t k_max,
                                        const SlopeOptions& opts = {}) {
  return select_slope_heuristic(loss_curve(d), k_max, opts);
}

}  // namespace chac

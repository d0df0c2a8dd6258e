#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chac/dendrogram.hpp"
#include "chac/error.hpp"

namespace chac {

namespace detail {

inline void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) {
    throw input_error("objects differ in size: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

/// Average ranks (1-based) of values in [0, max_value].
inline std::vector<double> average_ranks(const std::vector<std::uint32_t>& values,
                                         std::size_t max_value) {
  std::vector<std::size_t> count(max_value + 1, 0);
  for (auto v : values) ++count[v];
  std::vector<double> rank_of(max_value + 1, 0.0);
  std::size_t below = 0;
  for (std::size_t v = 0; v <= max_value; ++v) {
    // ranks below+1 .. below+count share their mean
    rank_of[v] = static_cast<double>(below) + 0.5 * static_cast<double>(count[v] + 1);
    below += count[v];
  }
  std::vector<double> out(values.size());
  for (std::size_t n = 0; n < values.size(); ++n) out[n] = rank_of[values[n]];
  return out;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n = static_cast<long double>(a.size());
  long double ma = 0, mb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ma += a[k];
    mb += b[k];
  }
  ma /= n;
  mb /= n;
  long double cov = 0, va = 0, vb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const long double da = a[k] - ma;
    const long double db = b[k] - mb;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  if (va == 0 || vb == 0) return 0.0;
  return static_cast<double>(cov / std::sqrt(va * vb));
}

inline double choose2(double n) { return n * (n - 1.0) / 2.0; }

}  // namespace detail

/// Fraction t / (p - 1) of leading merges, compared as child pairs, that two
/// hierarchies share. 1 when they are identical.
inline double first_difference_index(const Dendrogram& a, const Dendrogram& b) {
  detail::require_same_size(a.size(), b.size());
  const std::size_t steps = a.merges().size();
  if (steps == 0) return 1.0;
  std::size_t t = 0;
  while (t < steps && a.merges()[t].left == b.merges()[t].left &&
         a.merges()[t].right == b.merges()[t].right) {
    ++t;
  }
  return static_cast<double>(t) / static_cast<double>(steps);
}

/// Merge step (1-based) at which objects i < j first share a cluster.
/// For contiguous clusters that is the latest removal among the boundaries
/// separating them.
inline std::vector<std::uint32_t> pair_fusion_steps(
    const Dendrogram& d, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  const auto steps = d.boundary_steps();
  // Sparse table for O(1) range-maximum queries over boundary steps.
  const std::size_t n = steps.size();
  std::vector<std::vector<std::uint32_t>> table(1, std::vector<std::uint32_t>(steps.begin(), steps.end()));
  for (std::size_t w = 1; (std::size_t{1} << w) <= n; ++w) {
    const auto& prev = table.back();
    std::vector<std::uint32_t> level(n - (std::size_t{1} << w) + 1);
    for (std::size_t k = 0; k < level.size(); ++k) {
      level[k] = std::max(prev[k], prev[k + (std::size_t{1} << (w - 1))]);
    }
    table.push_back(std::move(level));
  }
  std::vector<std::uint32_t> out;
  out.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    // boundaries i .. j-1
    const std::size_t len = j - i;
    const auto w = static_cast<std::size_t>(std::bit_width(len) - 1);
    out.push_back(std::max(table[w][i], table[w][j - (std::size_t{1} << w)]));
  }
  return out;
}

struct BakersGammaOptions {
  /// Above this many objects, pairs are sampled instead of enumerated.
  std::size_t exact_cap = 2000;
  /// Number of sampled pairs; 0 means as many as the exact cap enumerates.
  std::size_t sample_pairs = 0;
  std::uint64_t seed = 20180401;
};

struct BakersGamma {
  double gamma = 1.0;
  bool subsampled = false;
  std::uint64_t seed = 0;
  std::size_t pairs = 0;
};

/// Spearman correlation, over object pairs, of the merge steps at which each
/// pair is first joined in the two hierarchies. Ties take average ranks.
inline BakersGamma bakers_gamma_detailed(const Dendrogram& a, const Dendrogram& b,
                                         const BakersGammaOptions& opts = {}) {
  detail::require_same_size(a.size(), b.size());
  const std::size_t p = a.size();
  BakersGamma out;
  out.seed = opts.seed;
  if (p < 2) return out;

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (p <= opts.exact_cap) {
    pairs.reserve(p * (p - 1) / 2);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = i + 1; j < p; ++j) pairs.emplace_back(i, j);
    }
  } else {
    out.subsampled = true;
    const std::size_t n =
        opts.sample_pairs > 0 ? opts.sample_pairs : opts.exact_cap * (opts.exact_cap - 1) / 2;
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<std::size_t> pick(0, p - 1);
    pairs.reserve(n);
    while (pairs.size() < n) {
      std::size_t i = pick(rng);
      std::size_t j = pick(rng);
      if (i == j) continue;
      if (i > j) std::swap(i, j);
      pairs.emplace_back(i, j);
    }
  }
  out.pairs = pairs.size();

  const auto sa = pair_fusion_steps(a, pairs);
  const auto sb = pair_fusion_steps(b, pairs);
  if (sa == sb) {
    out.gamma = 1.0;
    return out;
  }
  out.gamma = detail::pearson(detail::average_ranks(sa, p - 1), detail::average_ranks(sb, p - 1));
  return out;
}

inline double bakers_gamma(const Dendrogram& a, const Dendrogram& b,
                           const BakersGammaOptions& opts = {}) {
  return bakers_gamma_detailed(a, b, opts).gamma;
}

namespace detail {

struct PairCounts {
  double index = 0;     // sum over cells of C(n_ij, 2)
  double rows = 0;      // sum over a-clusters of C(a_i, 2)
  double cols = 0;      // sum over b-clusters of C(b_j, 2)
  double total = 0;     // C(n, 2)
};

inline PairCounts pair_counts(const Partition& a, const Partition& b) {
  require_same_size(a.size(), b.size());
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> cells;
  std::map<std::size_t, std::size_t> rows, cols;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ++cells[{a.labels[k], b.labels[k]}];
    ++rows[a.labels[k]];
    ++cols[b.labels[k]];
  }
  PairCounts out;
  for (const auto& [key, n] : cells) out.index += choose2(static_cast<double>(n));
  for (const auto& [key, n] : rows) out.rows += choose2(static_cast<double>(n));
  for (const auto& [key, n] : cols) out.cols += choose2(static_cast<double>(n));
  out.total = choose2(static_cast<double>(a.size()));
  return out;
}

}  // namespace detail

/// Hubert-Arabie adjusted Rand index.
inline double adjusted_rand(const Partition& a, const Partition& b) {
  const auto c = detail::pair_counts(a, b);
  if (c.total == 0) return 1.0;
  const double expected = c.rows * c.cols / c.total;
  const double max_index = 0.5 * (c.rows + c.cols);
  if (max_index == expected) {
    // Both partitions trivial (all singletons or one cluster).
    return c.index == max_index ? 1.0 : 0.0;
  }
  return (c.index - expected) / (max_index - expected);
}

/// Plain Rand index: fraction of object pairs on which the partitions agree.
inline double rand_index(const Partition& a, const Partition& b) {
  const auto c = detail::pair_counts(a, b);
  if (c.total == 0) return 1.0;
  const double agree = c.total + 2.0 * c.index - c.rows - c.cols;
  return agree / c.total;
}

}  // namespace chac

#pragma once

// Test-only helpers: brute-force references and matrix generators. Nothing
// here calls into the pencil table or the engine.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "chac/band_matrix.hpp"
#include "chac/dendrogram.hpp"

namespace chac::testing {

/// The 3 x 3 running example [[1,.5,0],[.5,1,.2],[0,.2,1]] with h = 2.
inline BandMatrix m3() {
  return from_dense({{1.0, 0.5, 0.0}, {0.5, 1.0, 0.2}, {0.0, 0.2, 1.0}}, 2);
}

inline BandMatrix identity(std::size_t p, std::size_t h = 1) {
  std::vector<double> bands(p * h, 0.0);
  for (std::size_t i = 0; i < p; ++i) bands[i * h] = 1.0;
  return BandMatrix(p, h, std::move(bands));
}

/// |a - b| <= tol * max(|a|, |b|).
inline bool rel_close(long double a, long double b, long double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

/// Sum of s(a, b) over 1-based lo <= a, b <= hi with |a - b| < l.
inline long double brute_block_band_sum(const BandMatrix& m, std::size_t lo, std::size_t hi,
                                        std::size_t l) {
  long double acc = 0;
  for (std::size_t a = lo; a <= hi; ++a) {
    for (std::size_t b = lo; b <= hi; ++b) {
      const std::size_t gap = a > b ? a - b : b - a;
      if (gap < l) acc += m(a - 1, b - 1);
    }
  }
  return acc;
}

inline long double brute_forward(const BandMatrix& m, std::size_t r, std::size_t l) {
  return brute_block_band_sum(m, 1, r, l);
}

inline long double brute_backward(const BandMatrix& m, std::size_t r, std::size_t l) {
  return brute_block_band_sum(m, r, m.size(), l);
}

/// S(C) for 0-based [begin, end) by direct double summation.
inline long double brute_cluster_sum(const BandMatrix& m, std::size_t begin, std::size_t end) {
  long double acc = 0;
  for (std::size_t a = begin; a < end; ++a) {
    for (std::size_t b = begin; b < end; ++b) acc += m(a, b);
  }
  return acc;
}

/// Symmetric band matrix with in-band entries uniform on [lo, hi].
inline BandMatrix random_band(std::size_t p, std::size_t h, std::mt19937_64& rng, double lo = 0.0,
                              double hi = 1.0) {
  std::uniform_real_distribution<double> unif(lo, hi);
  std::vector<double> bands(p * h, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t d = 0; d < h && i + d < p; ++d) bands[i * h + d] = unif(rng);
  }
  return BandMatrix(p, h, std::move(bands));
}

/// The same matrix with object order reversed.
inline BandMatrix reversed(const BandMatrix& m) {
  const std::size_t p = m.size();
  const std::size_t h = m.bandwidth();
  std::vector<double> bands(p * h, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t d = 0; d < h && i + d < p; ++d) {
      // s'(i, i+d) = s(p-1-i-d, p-1-i)
      bands[i * h + d] = m.band(p - 1 - i - d, d);
    }
  }
  return BandMatrix(p, h, std::move(bands));
}

/// A dendrogram of reversed objects, relabelled back to the original order.
inline Dendrogram mirrored(const Dendrogram& d) {
  const auto p = static_cast<NodeRef>(d.size());
  std::vector<MergeRecord> out;
  for (const auto& m : d.merges()) {
    auto flip = [&](NodeRef r) { return r < 0 ? -(p + 1 + r) : r; };
    out.push_back({flip(m.right), flip(m.left), m.height});
  }
  return Dendrogram(d.size(), out);
}

/// Unit diagonal, `within` inside each of `blocks` equal-width blocks,
/// zero elsewhere; full bandwidth.
inline BandMatrix block_matrix(std::size_t p, std::size_t blocks, double within) {
  const std::size_t width = p / blocks;
  std::vector<double> bands(p * p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    bands[i * p] = 1.0;
    for (std::size_t j = i + 1; j < p; ++j) {
      if (i / width == j / width) bands[i * p + (j - i)] = within;
    }
  }
  return BandMatrix(p, p, std::move(bands));
}

/// Planted contiguous blocks of width in [min_width, max_width]: strong
/// noisy similarity inside blocks and weak background similarity between
/// objects at most `reach` apart. Full bandwidth storage.
inline BandMatrix planted_blocks(std::size_t p, std::size_t min_width, std::size_t max_width,
                                 std::size_t reach, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> width(min_width, max_width);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::size_t> block(p);
  for (std::size_t i = 0, b = 0; i < p; ++b) {
    const std::size_t w = width(rng);
    for (std::size_t k = 0; k < w && i < p; ++k, ++i) block[i] = b;
  }
  std::vector<double> bands(p * p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    bands[i * p] = 1.0;
    for (std::size_t j = i + 1; j < p && j - i <= reach; ++j) {
      const double u = unif(rng);
      bands[i * p + (j - i)] = block[i] == block[j] ? 0.5 + 0.4 * u : 0.1 * u;
    }
  }
  return BandMatrix(p, p, std::move(bands));
}

}  // namespace chac::testing

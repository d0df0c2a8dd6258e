#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "chac/band_matrix.hpp"
#include "chac/dendrogram.hpp"
#include "chac/error.hpp"

// Reference implementations of adjacency-constrained Ward clustering. Nothing
// here touches pencil tables or the fusion heap: cluster sums are direct
// double loops and every step rescans all neighbouring pairs.

namespace chac::oracle {

/// Full p x p symmetric similarity, row-major.
class DenseSimilarity {
 public:
  explicit DenseSimilarity(const BandMatrix& m) : p_(m.size()), values_(p_ * p_, 0.0) {
    for (std::size_t i = 0; i < p_; ++i) {
      for (std::size_t j = 0; j < p_; ++j) values_[i * p_ + j] = m(i, j);
    }
  }

  explicit DenseSimilarity(const std::vector<std::vector<double>>& rows) : p_(rows.size()) {
    values_.reserve(p_ * p_);
    for (const auto& r : rows) {
      if (r.size() != p_) throw input_error("dense matrix is not square");
      for (double v : r) {
        if (!std::isfinite(v)) throw numeric_error("non-finite similarity");
        values_.push_back(v);
      }
    }
    for (std::size_t i = 0; i < p_; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (values_[i * p_ + j] != values_[j * p_ + i]) throw input_error("matrix is asymmetric");
      }
    }
  }

  std::size_t size() const noexcept { return p_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * p_ + j]; }

 private:
  std::size_t p_;
  std::vector<double> values_;
};

namespace detail {

struct Block {
  std::size_t begin;
  std::size_t end;
  NodeRef node;
  long double self_sum;  // S(C)
};

inline long double cross_sum(const DenseSimilarity& s, const Block& a, const Block& b) {
  long double acc = 0;
  for (std::size_t i = a.begin; i < a.end; ++i) {
    for (std::size_t j = b.begin; j < b.end; ++j) acc += s(i, j);
  }
  return acc;
}

}  // namespace detail

/// Quadratic-time constrained Ward clustering. Ties go to the leftmost pair.
inline Dendrogram cluster_naive(const DenseSimilarity& s) {
  using detail::Block;
  const std::size_t p = s.size();
  if (p == 0) throw std::invalid_argument("need at least one object");

  std::vector<Block> blocks;
  for (std::size_t i = 0; i < p; ++i) blocks.push_back({i, i + 1, leaf_ref(i), s(i, i)});
  // cross[u] = sum of s over blocks[u] x blocks[u+1]
  std::vector<long double> cross;
  for (std::size_t u = 0; u + 1 < p; ++u) cross.push_back(s(u, u + 1));

  std::vector<MergeRecord> records;
  for (std::size_t t = 0; t + 1 < p; ++t) {
    std::size_t best = 0;
    double best_delta = 0.0;
    for (std::size_t u = 0; u + 1 < blocks.size(); ++u) {
      const Block& l = blocks[u];
      const Block& r = blocks[u + 1];
      const auto nl = static_cast<long double>(l.end - l.begin);
      const auto nr = static_cast<long double>(r.end - r.begin);
      const long double joint = l.self_sum + r.self_sum + 2 * cross[u];
      const auto delta = static_cast<double>(l.self_sum / nl + r.self_sum / nr - joint / (nl + nr));
      if (u == 0 || delta < best_delta) {
        best = u;
        best_delta = delta;
      }
    }

    Block& l = blocks[best];
    const Block r = blocks[best + 1];
    records.push_back({l.node, r.node, best_delta});
    l.self_sum = l.self_sum + r.self_sum + 2 * cross[best];
    l.end = r.end;
    l.node = merge_ref(t);
    blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(best) + 1);
    cross.erase(cross.begin() + static_cast<std::ptrdiff_t>(best));
    if (best > 0) cross[best - 1] = detail::cross_sum(s, blocks[best - 1], blocks[best]);
    if (best + 1 < blocks.size()) cross[best] = detail::cross_sum(s, blocks[best], blocks[best + 1]);
  }
  return Dendrogram(p, records);
}

/// Constrained Ward clustering of points in R^d (one row per point), with
/// linkages computed as the increase in within-cluster sum of squares.
inline Dendrogram euclidean_ward_check(const std::vector<std::vector<double>>& points) {
  const std::size_t p = points.size();
  if (p == 0) throw std::invalid_argument("need at least one point");
  const std::size_t dim = points.front().size();
  if (dim == 0) throw std::invalid_argument("points need at least one coordinate");
  for (const auto& x : points) {
    if (x.size() != dim) throw input_error("points have inconsistent dimensions");
  }

  auto inertia = [&](std::size_t begin, std::size_t end) {
    std::vector<long double> mean(dim, 0);
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t k = 0; k < dim; ++k) mean[k] += points[i][k];
    }
    for (auto& v : mean) v /= static_cast<long double>(end - begin);
    long double sse = 0;
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t k = 0; k < dim; ++k) {
        const long double diff = points[i][k] - mean[k];
        sse += diff * diff;
      }
    }
    return sse;
  };

  struct Span {
    std::size_t begin, end;
    NodeRef node;
  };
  std::vector<Span> spans;
  for (std::size_t i = 0; i < p; ++i) spans.push_back({i, i + 1, leaf_ref(i)});

  std::vector<MergeRecord> records;
  for (std::size_t t = 0; t + 1 < p; ++t) {
    std::size_t best = 0;
    double best_delta = 0.0;
    for (std::size_t u = 0; u + 1 < spans.size(); ++u) {
      const auto& l = spans[u];
      const auto& r = spans[u + 1];
      const auto delta = static_cast<double>(inertia(l.begin, r.end) - inertia(l.begin, l.end) -
                                             inertia(r.begin, r.end));
      if (u == 0 || delta < best_delta) {
        best = u;
        best_delta = delta;
      }
    }
    records.push_back({spans[best].node, spans[best + 1].node, best_delta});
    spans[best].end = spans[best + 1].end;
    spans[best].node = merge_ref(t);
    spans.erase(spans.begin() + static_cast<std::ptrdiff_t>(best) + 1);
  }
  return Dendrogram(p, records);
}

/// Gram matrix X X^T of a point cloud, as a full-bandwidth band matrix.
inline BandMatrix gram_matrix(const std::vector<std::vector<double>>& points) {
  const std::size_t p = points.size();
  std::vector<double> bands(p * p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      long double dot = 0;
      for (std::size_t k = 0; k < points[i].size(); ++k) {
        dot += static_cast<long double>(points[i][k]) * points[j][k];
      }
      bands[i * p + (j - i)] = static_cast<double>(dot);
    }
  }
  return BandMatrix(p, p, std::move(bands));
}

}  // namespace chac::oracle

#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

#include "chac/band_matrix.hpp"


namespace chac {

/// Accumulator type for similarity sums. Cluster sums are differences of
/// large pencil totals, so the extra mantissa bits matter on long inputs.
using accum_t = long double;

/// Contiguous run of objects [begin, end), 0-based.
struct Interval {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Forward and backward pencil sums of a band matrix.
///
/// With 1-based r and l in [1, h]:
///   forward(r, l)  = sum of s(a, b) over 1 <= a, b <= r, |a - b| < l
///   backward(r, l) = sum of s(a, b) over r <= a, b <= p, |a - b| < l
/// For a cluster C = {i, ..., j-1} of size k and hk = min(h, k):
///   S(C) = forward(j - 1, hk) + backward(i, hk) - forward(p, hk)
/// Ward linkage of adjacent clusters L and R from S(L), S(R) and S(L u R).
inline double ward_from_sums(accum_t left_sum, std::size_t left_size, accum_t right_sum,
                             std::size_t right_size, accum_t union_sum) noexcept {
  const accum_t left = left_sum / static_cast<accum_t>(left_size);
  const accum_t right = right_sum / static_cast<accum_t>(right_size);
  const accum_t both = union_sum / static_cast<accum_t>(left_size + right_size);
  return static_cast<double>(left + right - both);
}

class PencilTable {
 public:
  explicit PencilTable(const BandMatrix& m)
      : p_(m.size()),
        h_(m.bandwidth()),
        forward_(new accum_t[p_ * h_]),
        backward_(new accum_t[p_ * h_]),
        full_(new accum_t[h_]) {

    // forward(r, l) = forward(r-1, l) + s_rr + 2 * sum_{d=1}^{l-1} s_{r-d, r}
    for (std::size_t r = 0; r < p_; ++r) {
      const accum_t diag = m.band(r, 0);
      accum_t run = 0;
      for (std::size_t l = 1; l <= h_; ++l) {
        if (l >= 2 && l - 1 <= r) run += m.band(r - (l - 1), l - 1);
        const accum_t prev = r == 0 ? 0 : forward_[(r - 1) * h_ + (l - 1)];
        forward_[r * h_ + (l - 1)] = prev + diag + 2 * run;
      }
    }

    // backward(r, l) = backward(r+1, l) + s_rr + 2 * sum_{d=1}^{l-1} s_{r, r+d}
    for (std::size_t r = p_; r-- > 0;) {
      const auto row = m.row(r);  // zero-padded past the edge
      accum_t run = 0;
      for (std::size_t l = 1; l <= h_; ++l) {
        if (l >= 2) run += row[l - 1];
        const accum_t prev = r + 1 == p_ ? 0 : backward_[(r + 1) * h_ + (l - 1)];
        backward_[r * h_ + (l - 1)] = prev + row[0] + 2 * run;
      }
    }

    for (std::size_t l = 1; l <= h_; ++l) full_[l - 1] = forward_[(p_ - 1) * h_ + (l - 1)];
  }

  std::size_t size() const noexcept { return p_; }
  std::size_t bandwidth() const noexcept { return h_; }

  /// Stored table entries: 2*p*h pencils plus h full pencils.
  std::size_t entry_count() const noexcept {
    return 2 * p_ * h_ + h_;
  }

  /// 1-based r in [1, p], l in [1, h].
  accum_t forward(std::size_t r, std::size_t l) const { return forward_[index(r, l)]; }
  accum_t backward(std::size_t r, std::size_t l) const { return backward_[index(r, l)]; }
  accum_t full(std::size_t l) const {
    if (l < 1 || l > h_) throw std::out_of_range("pencil index out of range");
    return full_[l - 1];
  }

  /// S(C) for C = [begin, end), 0-based half-open.
  accum_t cluster_sum(std::size_t begin, std::size_t end) const {
    if (begin >= end || end > p_) throw std::out_of_range("cluster bounds out of range");
    return cluster_sum_unchecked(begin, end);
  }

  accum_t cluster_sum(Interval c) const { return cluster_sum(c.begin, c.end); }

  /// Ward linkage between two adjacent clusters, left immediately followed by
  /// right:  S(L)/|L| + S(R)/|R| - S(L u R)/|L u R|.
  double ward_linkage(Interval left, Interval right) const {
    if (left.begin >= left.end || right.begin >= right.end || right.end > p_) {
      throw std::invalid_argument("clusters must be non-empty and within range");
    }
    if (left.end != right.begin) {
      throw std::invalid_argument("clusters must be adjacent, left ending where right begins");
    }
    return ward_linkage_unchecked(left.begin, left.end, right.end);
  }

  /// Linkage of [a, b) with [b, c); no bounds checks.
  double ward_linkage_unchecked(std::size_t a, std::size_t b, std::size_t c) const noexcept {
    return ward_from_sums(cluster_sum_unchecked(a, b), b - a, cluster_sum_unchecked(b, c), c - b,
                          cluster_sum_unchecked(a, c));
  }

  /// Same as cluster_sum without bounds checks.
  accum_t cluster_sum_unchecked(std::size_t begin, std::size_t end) const noexcept {
    const std::size_t hk = std::min(h_, end - begin);
    // forward(end, hk) + backward(begin + 1, hk) - forward(p, hk), 1-based
    return forward_[(end - 1) * h_ + (hk - 1)] + backward_[begin * h_ + (hk - 1)] - full_[hk - 1];
  }

 private:
  std::size_t index(std::size_t r, std::size_t l) const {
    if (r < 1 || r > p_ || l < 1 || l > h_) throw std::out_of_range("pencil index out of range");
    return (r - 1) * h_ + (l - 1);
  }

  std::size_t p_;
  std::size_t h_;
  // Uninitialised on allocation; every entry is written by the constructor.
  // Uninitialised on allocation; every entry is written by the constructor.
  std::unique_ptr<accum_t[]> forward_;
  std::unique_ptr<accum_t[]> backward_;
  std::unique_ptr<accum_t[]> full_;
};

}  // namespace chac

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "chac/band_matrix.hpp"
#include "chac/dendrogram.hpp"
#include "chac/fusion_heap.hpp"
#include "chac/pencil.hpp"

namespace chac {

/// A proposed merge of the neighbouring clusters [left, m) and [m, end).
/// Clusters only grow, so the candidate is still current exactly when two
/// active clusters again start at left and end at end.
struct CandidateFusion {
  double linkage = 0.0;
  std::uint32_t left = 0;
  std::uint32_t end = 0;
};

/// Lower linkage first, then the leftmost pair.
struct FusionOrder {
  bool operator()(const CandidateFusion& a, const CandidateFusion& b) const noexcept {
    if (a.linkage != b.linkage) return a.linkage < b.linkage;
    return a.left < b.left;
  }
};

using FusionHeap = MinHeap<CandidateFusion, FusionOrder>;

struct EngineStats {
  std::size_t pencil_entries = 0;
  std::size_t heap_peak = 0;
  std::size_t heap_pushes = 0;
  std::size_t heap_pops = 0;
  std::size_t stale_pops = 0;
};

/// Adjacency-constrained Ward clustering over a band matrix.
///
/// Linkages come from the pencil table in O(1); the active clusters form a
/// chain and candidate fusions between neighbours live in a lazy min-heap.
/// Each merge pops one valid candidate and pushes at most two, so the heap
/// never holds more than 3(p - 1) entries.
class ConstrainedWard {
 public:
  explicit ConstrainedWard(const BandMatrix& m)
      : pencils_(m),
        p_(m.size()),
        end_(p_),
        prev_(p_),
        node_(p_),
        sum_(p_),
        union_sum_(p_),
        alive_(p_, true) {
    if (p_ > std::numeric_limits<std::uint32_t>::max()) {
      throw std::invalid_argument("too many objects");
    }
    for (std::size_t i = 0; i < p_; ++i) {
      end_[i] = i + 1;
      prev_[i] = i == 0 ? kNone : i - 1;
      node_[i] = leaf_ref(i);
      sum_[i] = pencils_.cluster_sum_unchecked(i, i + 1);
    }
    heap_.reserve(p_ > 0 ? 3 * (p_ - 1) : 0);
    records_.reserve(p_ > 0 ? p_ - 1 : 0);
    for (std::size_t i = 0; i + 1 < p_; ++i) push_candidate(i, i + 1);
  }

  bool done() const noexcept { return records_.size() + 1 >= p_; }

  /// Performs the next merge and returns its record.
  const MergeRecord& step() {
    if (done()) throw std::logic_error("clustering already complete");
    const auto best = heap_.pop_valid([this](const CandidateFusion& c) { return is_current(c); });
    if (!best) throw std::logic_error("fusion heap exhausted before clustering finished");

    const std::size_t a = best->left;
    const std::size_t b = end_[a];
    records_.push_back({node_[a], node_[b], best->linkage});

    alive_[b] = false;
    end_[a] = end_[b];
    node_[a] = merge_ref(records_.size() - 1);
    sum_[a] = union_sum_[a];
    if (end_[a] < p_) prev_[end_[a]] = a;

    const bool has_left = prev_[a] != kNone;
    const bool has_right = end_[a] < p_;
    const accum_t left_union = has_left ? pencils_.cluster_sum_unchecked(prev_[a], end_[a]) : 0;
    const accum_t right_union = has_right ? pencils_.cluster_sum_unchecked(a, end_[end_[a]]) : 0;
    if (has_left) push_candidate(prev_[a], a, left_union);
    if (has_right) push_candidate(a, end_[a], right_union);
    return records_.back();
  }

  /// Active clusters in left-to-right order.
  std::vector<Interval> active_clusters() const {
    std::vector<Interval> out;
    for (std::size_t s = 0; s < p_; s = end_[s]) out.push_back({s, end_[s]});
    return out;
  }

  EngineStats stats() const noexcept {
    return {pencils_.entry_count(), heap_.peak_size(), heap_.pushes(), heap_.pops(),
            heap_.stale_pops()};
  }

  const PencilTable& pencils() const noexcept { return pencils_; }

  /// Runs the remaining merges.
  Dendrogram finish() {
    while (!done()) step();
    return Dendrogram(p_, records_);
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  void push_candidate(std::size_t left, std::size_t right) {
    push_candidate(left, right, pencils_.cluster_sum_unchecked(left, end_[right]));
  }

  void push_candidate(std::size_t left, std::size_t right, accum_t both) {
    const std::size_t end = end_[right];
    union_sum_[left] = both;
    heap_.push({ward_from_sums(sum_[left], right - left, sum_[right], end - right, both),
                static_cast<std::uint32_t>(left), static_cast<std::uint32_t>(end)});
  }

  bool is_current(const CandidateFusion& c) const noexcept {
    if (!alive_[c.left]) return false;
    const std::size_t mid = end_[c.left];
    return mid < c.end && end_[mid] == c.end;
  }

  PencilTable pencils_;
  std::size_t p_;
  std::vector<std::size_t> end_;   // by cluster start: one past its last object
  std::vector<std::size_t> prev_;  // by cluster start: start of the left neighbour
  std::vector<NodeRef> node_;
  std::vector<accum_t> sum_;        // by cluster start: S(C)
  std::vector<accum_t> union_sum_;  // by cluster start: S of C with its right neighbour
  std::vector<bool> alive_;
  FusionHeap heap_;
  std::vector<MergeRecord> records_;
};

struct ClusterResult {
  Dendrogram dendrogram;
  EngineStats stats;
};

inline ClusterResult cluster_with_stats(const BandMatrix& m) {
  ConstrainedWard engine(m);
  Dendrogram d = engine.finish();
  return {std::move(d), engine.stats()};
}

inline Dendrogram cluster(const BandMatrix& m) { return ConstrainedWard(m).finish(); }

/// Clusters m + lambda * I. The merge order matches cluster(m) and every
/// height is shifted by lambda.
inline Dendrogram cluster_shifted(const BandMatrix& m, double lambda) {
  return cluster(shift_diagonal(m, lambda));
}

}  // namespace chac

#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "chac/error.hpp"
#include "chac/pencil.hpp"

namespace chac {

/// Child reference in a merge record: -i for singleton object i (1-based),
/// +t for the cluster created by merge t (1-based).
using NodeRef = std::int64_t;

inline NodeRef leaf_ref(std::size_t object) { return -static_cast<NodeRef>(object + 1); }
inline NodeRef merge_ref(std::size_t merge_index) { return static_cast<NodeRef>(merge_index + 1); }

struct MergeRecord {
  NodeRef left = 0;
  NodeRef right = 0;
  double height = 0.0;

  friend bool operator==(const MergeRecord&, const MergeRecord&) = default;
};

struct Merge {
  NodeRef left = 0;
  NodeRef right = 0;
  double height = 0.0;
  Interval left_extent;
  Interval right_extent;

  Interval extent() const noexcept { return {left_extent.begin, right_extent.end}; }
  std::size_t size() const noexcept { return right_extent.end - left_extent.begin; }
};

/// Output of adjacency-constrained clustering: p - 1 merges of adjacent
/// contiguous clusters, in the order they happened. Heights are the raw
/// linkage values and need not be monotone.
class Dendrogram {
 public:
  Dendrogram() = default;

  /// Validates the records: every child is referenced exactly once, merge
  /// references point backwards, and children are adjacent with the left
  /// child first. A complete dendrogram has exactly p - 1 merges.
  Dendrogram(std::size_t p, const std::vector<MergeRecord>& records) : p_(p) {
    if (p == 0) throw input_error("dendrogram needs at least one object");
    if (records.size() != p - 1) {
      throw input_error("expected " + std::to_string(p - 1) + " merges, got " +
                        std::to_string(records.size()));
    }
    std::vector<bool> leaf_used(p, false);
    std::vector<bool> merge_used(records.size(), false);
    merges_.reserve(records.size());

    auto resolve = [&](NodeRef ref, std::size_t t) -> Interval {
      if (ref < 0) {
        const auto obj = static_cast<std::size_t>(-ref) - 1;
        if (obj >= p) throw input_error("leaf reference out of range at merge " + std::to_string(t + 1));
        if (leaf_used[obj]) throw input_error("leaf reused at merge " + std::to_string(t + 1));
        leaf_used[obj] = true;
        return {obj, obj + 1};
      }
      if (ref == 0) throw input_error("zero child reference at merge " + std::to_string(t + 1));
      const auto idx = static_cast<std::size_t>(ref) - 1;
      if (idx >= t) throw input_error("forward merge reference at merge " + std::to_string(t + 1));
      if (merge_used[idx]) throw input_error("merge reused at merge " + std::to_string(t + 1));
      merge_used[idx] = true;
      return merges_[idx].extent();
    };

    for (std::size_t t = 0; t < records.size(); ++t) {
      const auto& r = records[t];
      Merge m{r.left, r.right, r.height, resolve(r.left, t), resolve(r.right, t)};
      if (m.left_extent.end != m.right_extent.begin) {
        throw input_error("merge " + std::to_string(t + 1) + " joins non-adjacent clusters");
      }
      merges_.push_back(m);
    }
  }

  std::size_t size() const noexcept { return p_; }
  const std::vector<Merge>& merges() const noexcept { return merges_; }

  std::vector<MergeRecord> records() const {
    std::vector<MergeRecord> out;
    out.reserve(merges_.size());
    for (const auto& m : merges_) out.push_back({m.left, m.right, m.height});
    return out;
  }

  std::vector<double> heights() const {
    std::vector<double> out;
    out.reserve(merges_.size());
    for (const auto& m : merges_) out.push_back(m.height);
    return out;
  }

  /// For each boundary b (between objects b and b+1, 0-based, b < p-1), the
  /// 1-based step at which it disappears.
  std::vector<std::size_t> boundary_steps() const {
    std::vector<std::size_t> out(p_ > 0 ? p_ - 1 : 0, 0);
    for (std::size_t t = 0; t < merges_.size(); ++t) {
      out[merges_[t].right_extent.begin - 1] = t + 1;
    }
    return out;
  }

 private:
  std::size_t p_ = 0;
  std::vector<Merge> merges_;
};

/// Cluster labels for p objects.
struct Partition {
  std::vector<std::size_t> labels;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t cluster_count() const {
    return std::set<std::size_t>(labels.begin(), labels.end()).size();
  }
  friend bool operator==(const Partition&, const Partition&) = default;
};

/// The k contiguous clusters left after undoing the last k - 1 merges,
/// labelled 1..k from left to right.
inline Partition cut(const Dendrogram& d, std::size_t k) {
  const std::size_t p = d.size();
  if (k < 1 || k > p) {
    throw std::invalid_argument("k must lie in [1, " + std::to_string(p) + "]");
  }
  std::vector<bool> joined(p > 0 ? p - 1 : 0, false);
  for (std::size_t t = 0; t + k < p; ++t) joined[d.merges()[t].right_extent.begin - 1] = true;

  Partition out;
  out.labels.resize(p);
  std::size_t label = 1;
  for (std::size_t i = 0; i < p; ++i) {
    if (i > 0 && !joined[i - 1]) ++label;
    out.labels[i] = label;
  }
  return out;
}

}  // namespace chac

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace chac {

/// Binary min-heap with lazy deletion. Entries are never removed from the
/// middle; callers invalidate them externally and pop_valid() discards stale
/// roots. Counters record the work done for complexity checks.
template <typename T, typename Less = std::less<T>>
class MinHeap {
 public:
  MinHeap() = default;
  explicit MinHeap(Less less) : less_(std::move(less)) {}

  void reserve(std::size_t n) { items_.reserve(n); }

  void push(T value) {
    items_.push_back(std::move(value));
    std::push_heap(items_.begin(), items_.end(), greater());
    ++pushes_;
    peak_ = std::max(peak_, items_.size());
  }

  const T& top() const {
    if (items_.empty()) throw std::out_of_range("top() on empty heap");
    return items_.front();
  }

  T pop() {
    if (items_.empty()) throw std::out_of_range("pop() on empty heap");
    std::pop_heap(items_.begin(), items_.end(), greater());
    T out = std::move(items_.back());
    items_.pop_back();
    ++pops_;
    return out;
  }

  /// Pops roots until one satisfies `is_valid`; stale roots are dropped.
  /// Returns nullopt if the heap runs out.
  template <typename Pred>
  std::optional<T> pop_valid(Pred&& is_valid) {
    while (!items_.empty()) {
      T candidate = pop();
      if (is_valid(candidate)) return candidate;
      ++stale_;
    }
    return std::nullopt;
  }

  bool empty() const noexcept { return items_.empty(); }
  std::size_t size() const noexcept { return items_.size(); }
  std::size_t peak_size() const noexcept { return peak_; }
  std::size_t pushes() const noexcept { return pushes_; }
  std::size_t pops() const noexcept { return pops_; }
  std::size_t stale_pops() const noexcept { return stale_; }

  /// Heap-order check, used by tests.
  bool is_heap() const { return std::is_heap(items_.begin(), items_.end(), greater()); }

 private:
  auto greater() const {
    return [this](const T& a, const T& b) { return less_(b, a); };
  }

  Less less_{};
  std::vector<T> items_;
  std::size_t peak_ = 0;
  std::size_t pushes_ = 0;
  std::size_t pops_ = 0;
  std::size_t stale_ = 0;
};

}  // namespace chac

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chac/error.hpp"

namespace chac {

/// Collects non-fatal diagnostics emitted while ingesting data.
struct Warnings {
  std::vector<std::string> messages;
  void add(std::string msg) { messages.push_back(std::move(msg)); }
};

/// Symmetric p x p similarity matrix with s(i, j) == 0 whenever |i - j| >= h.
///
/// Storage is diagonal-major: row i holds s(i, i), s(i, i+1), ...,
/// s(i, i+h-1), so the matrix occupies exactly p*h values. Slots that fall
/// past the right edge (i + d >= p) are kept at zero. Indices are 0-based.
class BandMatrix {
 public:
  BandMatrix() = default;

  /// All-zero matrix.
  BandMatrix(std::size_t p, std::size_t h) : p_(p), h_(h), bands_(p * h, 0.0) {
    check_shape(p, h);
  }

  /// Takes ownership of p*h diagonal-major values.
  BandMatrix(std::size_t p, std::size_t h, std::vector<double> bands)
      : p_(p), h_(h), bands_(std::move(bands)) {
    check_shape(p, h);
    if (bands_.size() != p * h) {
      throw std::invalid_argument("band storage must hold p*h values");
    }
    for (std::size_t i = 0; i < p_; ++i) {
      for (std::size_t d = 0; d < h_; ++d) {
        const double v = bands_[i * h_ + d];
        if (!std::isfinite(v)) {
          throw numeric_error("non-finite similarity at (" + std::to_string(i + 1) + ", " +
                              std::to_string(i + d + 1) + ")");
        }
        if (i + d >= p_ && v != 0.0) {
          throw std::invalid_argument("band padding past the matrix edge must be zero");
        }
      }
    }
  }

  std::size_t size() const noexcept { return p_; }
  std::size_t bandwidth() const noexcept { return h_; }

  /// s(i, i + d) for d < h; zero past the right edge.
  double band(std::size_t i, std::size_t d) const noexcept { return bands_[i * h_ + d]; }

  /// The h stored values of row i, starting at the diagonal.
  std::span<const double> row(std::size_t i) const noexcept {
    return {bands_.data() + i * h_, h_};
  }

  /// s(i, j) for any 0 <= i, j < p.
  double operator()(std::size_t i, std::size_t j) const noexcept {
    if (i > j) std::swap(i, j);
    const std::size_t d = j - i;
    return d < h_ ? bands_[i * h_ + d] : 0.0;
  }

  const std::vector<double>& storage() const noexcept { return bands_; }

  friend bool operator==(const BandMatrix&, const BandMatrix&) = default;

 private:
  static void check_shape(std::size_t p, std::size_t h) {
    if (p == 0) throw std::invalid_argument("matrix must have at least one object");
    if (h < 1 || h > p) throw std::invalid_argument("bandwidth must lie in [1, p]");
  }

  std::size_t p_ = 0;
  std::size_t h_ = 0;
  std::vector<double> bands_;
};

struct DenseOptions {
  /// Replace s(i, j) and s(j, i) by their mean instead of rejecting asymmetry.
  bool symmetrize = false;
  /// Relative tolerance for the symmetry check (and absolute bound for the
  /// strict out-of-band check).
  double tol = 1e-12;
  /// Reject non-negligible entries outside the band instead of discarding them.
  bool strict = false;
};

/// Copies the band of a dense square matrix.
inline BandMatrix from_dense(const std::vector<std::vector<double>>& values, std::size_t h,
                             const DenseOptions& opts = {}) {
  const std::size_t p = values.size();
  for (const auto& r : values) {
    if (r.size() != p) throw input_error("dense matrix is not square");
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      if (std::isnan(values[i][j]) || std::isinf(values[i][j])) {
        throw numeric_error("non-finite entry at (" + std::to_string(i + 1) + ", " +
                            std::to_string(j + 1) + ")");
      }
    }
  }
  if (p == 0) throw input_error("dense matrix is empty");
  if (h < 1 || h > p) throw std::invalid_argument("bandwidth must lie in [1, p]");

  if (!opts.symmetrize) {
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = i + 1; j < p; ++j) {
        const double a = values[i][j];
        const double b = values[j][i];
        if (std::abs(a - b) > opts.tol * std::max(std::abs(a), 1.0)) {
          throw input_error("matrix is asymmetric at (" + std::to_string(i + 1) + ", " +
                            std::to_string(j + 1) + ")");
        }
      }
    }
  }

  std::vector<double> bands(p * h, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      const double v = opts.symmetrize ? 0.5 * (values[i][j] + values[j][i]) : values[i][j];
      const std::size_t d = j - i;
      if (d < h) {
        bands[i * h + d] = v;
      } else if (opts.strict && std::abs(v) > opts.tol) {
        throw input_error("non-zero entry outside the band at (" + std::to_string(i + 1) + ", " +
                          std::to_string(j + 1) + ")");
      }
    }
  }
  return BandMatrix(p, h, std::move(bands));
}

/// Materializes the full symmetric matrix.
inline std::vector<std::vector<double>> to_dense(const BandMatrix& m) {
  const std::size_t p = m.size();
  std::vector<std::vector<double>> out(p, std::vector<double>(p, 0.0));
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t d = 0; d < m.bandwidth() && i + d < p; ++d) {
      out[i][i + d] = m.band(i, d);
      out[i + d][i] = m.band(i, d);
    }
  }
  return out;
}

/// One sparse entry, 1-based as in the text formats.
struct Triplet {
  std::size_t i = 0;
  std::size_t j = 0;
  double value = 0.0;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

struct CooOptions {
  /// Silently discard entries with |i - j| >= h instead of rejecting them.
  bool drop_outside_band = false;
};

/// Builds a band matrix from 1-based sparse triplets. Either triangle may be
/// given; an entry present in both triangles must carry the same value.
/// Missing diagonal entries default to zero and are reported in `warnings`.
inline BandMatrix from_coo(std::span<const Triplet> triplets, std::size_t p, std::size_t h,
                           const CooOptions& opts = {}, Warnings* warnings = nullptr) {
  if (p == 0) throw std::invalid_argument("matrix must have at least one object");
  if (h < 1 || h > p) throw std::invalid_argument("bandwidth must lie in [1, p]");

  std::vector<double> bands(p * h, 0.0);
  // 0 = unset, 1 = set from upper triangle, 2 = set from lower, 3 = both
  std::vector<unsigned char> seen(p * h, 0);

  for (const auto& t : triplets) {
    if (t.i < 1 || t.i > p || t.j < 1 || t.j > p) {
      throw input_error("index out of range: (" + std::to_string(t.i) + ", " +
                        std::to_string(t.j) + ") with p = " + std::to_string(p));
    }
    if (!std::isfinite(t.value)) {
      throw numeric_error("non-finite value at (" + std::to_string(t.i) + ", " +
                          std::to_string(t.j) + ")");
    }
    const std::size_t a = std::min(t.i, t.j) - 1;
    const std::size_t b = std::max(t.i, t.j) - 1;
    const std::size_t d = b - a;
    if (d >= h) {
      if (opts.drop_outside_band) continue;
      throw input_error("entry (" + std::to_string(t.i) + ", " + std::to_string(t.j) +
                        ") lies outside the band h = " + std::to_string(h));
    }
    const unsigned char side = d == 0 ? 3 : (t.i <= t.j ? 1 : 2);
    unsigned char& mark = seen[a * h + d];
    if (mark & side) {
      throw input_error("duplicate entry (" + std::to_string(t.i) + ", " + std::to_string(t.j) +
                        ")");
    }
    if (mark != 0 && bands[a * h + d] != t.value) {
      throw input_error("conflicting mirrored entries at (" + std::to_string(a + 1) + ", " +
                        std::to_string(b + 1) + ")");
    }
    mark |= side;
    bands[a * h + d] = t.value;
  }

  if (warnings != nullptr) {
    std::size_t missing = 0;
    for (std::size_t i = 0; i < p; ++i) missing += seen[i * h] == 0;
    if (missing > 0) {
      warnings->add(std::to_string(missing) + " diagonal entries absent, set to 0");
    }
  }
  return BandMatrix(p, h, std::move(bands));
}

/// Returns m + lambda * I.
inline BandMatrix shift_diagonal(const BandMatrix& m, double lambda) {
  std::vector<double> bands = m.storage();
  const std::size_t h = m.bandwidth();
  for (std::size_t i = 0; i < m.size(); ++i) bands[i * h] += lambda;
  return BandMatrix(m.size(), h, std::move(bands));
}

/// Restricts m to a narrower bandwidth, discarding entries with |i - j| >= h.
inline BandMatrix truncate_band(const BandMatrix& m, std::size_t h) {
  if (h < 1 || h > m.bandwidth()) {
    throw std::invalid_argument("truncated bandwidth must lie in [1, current bandwidth]");
  }
  std::vector<double> bands(m.size() * h);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t d = 0; d < h; ++d) bands[i * h + d] = m.band(i, d);
  }
  return BandMatrix(m.size(), h, std::move(bands));
}

/// Upper-triangle non-zero entries as 1-based triplets, row-major order.
inline std::vector<Triplet> to_coo(const BandMatrix& m) {
  std::vector<Triplet> out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t d = 0; d < m.bandwidth() && i + d < m.size(); ++d) {
      if (m.band(i, d) != 0.0 || d == 0) out.push_back({i + 1, i + d + 1, m.band(i, d)});
    }
  }
  return out;
}

}  // namespace chac

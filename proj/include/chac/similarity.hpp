#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "chac/band_matrix.hpp"
#include "chac/error.hpp"

namespace chac {

/// n samples x p loci of allele dosages in {0, 1, 2}; kMissing marks an
/// unobserved genotype. Sample-major storage.
class GenotypeMatrix {
 public:
  static constexpr std::int8_t kMissing = -1;

  GenotypeMatrix(std::size_t n, std::size_t p, std::vector<std::int8_t> dosages)
      : n_(n), p_(p), dosages_(std::move(dosages)) {
    if (n < 2) throw input_error("genotype matrix needs at least 2 samples");
    if (p < 1) throw input_error("genotype matrix needs at least 1 locus");
    if (dosages_.size() != n * p) throw input_error("genotype storage must hold n*p values");
    for (const auto g : dosages_) {
      if (g != kMissing && (g < 0 || g > 2)) {
        throw input_error("genotype dosages must be 0, 1, 2 or missing");
      }
    }
  }

  std::size_t samples() const noexcept { return n_; }
  std::size_t loci() const noexcept { return p_; }
  std::int8_t at(std::size_t sample, std::size_t locus) const noexcept {
    return dosages_[sample * p_ + locus];
  }

 private:
  std::size_t n_;
  std::size_t p_;
  std::vector<std::int8_t> dosages_;
};

/// Sparse non-negative contact counts between p bins, upper triangle, 1-based.
class ContactMatrix {
 public:
  ContactMatrix(std::size_t p, std::vector<Triplet> counts) : p_(p), counts_(std::move(counts)) {
    if (p < 1) throw input_error("contact matrix needs at least 1 bin");
    for (auto& c : counts_) {
      if (c.i < 1 || c.j < 1 || c.i > p || c.j > p) {
        throw input_error("contact bin index out of range: (" + std::to_string(c.i) + ", " +
                          std::to_string(c.j) + ")");
      }
      if (!(c.value >= 0.0) || std::isinf(c.value)) {
        throw input_error("contact counts must be finite and non-negative");
      }
      if (c.i > c.j) std::swap(c.i, c.j);
    }
  }

  std::size_t bins() const noexcept { return p_; }
  const std::vector<Triplet>& counts() const noexcept { return counts_; }

 private:
  std::size_t p_;
  std::vector<Triplet> counts_;
};

/// Linkage-disequilibrium similarity: squared Pearson correlation between the
/// dosage vectors of two loci over the samples observed at both. The diagonal
/// is 1; a pair involving a constant locus has similarity 0.
inline BandMatrix build_ld_r2(const GenotypeMatrix& g, std::size_t h) {
  const std::size_t p = g.loci();
  const std::size_t n = g.samples();
  if (h < 1 || h > p) throw std::invalid_argument("bandwidth must lie in [1, p]");

  std::vector<double> bands(p * h, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    bands[i * h] = 1.0;
    for (std::size_t d = 1; d < h && i + d < p; ++d) {
      const std::size_t j = i + d;
      // Integer moments keep the numerator and denominators exact.
      std::int64_t m = 0, sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
      for (std::size_t s = 0; s < n; ++s) {
        const std::int64_t x = g.at(s, i);
        const std::int64_t y = g.at(s, j);
        if (x == GenotypeMatrix::kMissing || y == GenotypeMatrix::kMissing) continue;
        ++m;
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
      }
      if (m < 2) {
        throw input_error("loci " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                          " share fewer than 2 observed samples");
      }
      const std::int64_t cov = m * sxy - sx * sy;
      const std::int64_t vx = m * sxx - sx * sx;
      const std::int64_t vy = m * syy - sy * sy;
      double r2 = 0.0;
      if (vx > 0 && vy > 0) {
        const long double c = static_cast<long double>(cov);
        r2 = static_cast<double>(c * c /
                                 (static_cast<long double>(vx) * static_cast<long double>(vy)));
        r2 = std::clamp(r2, 0.0, 1.0);
      }
      bands[i * h + d] = r2;
    }
  }
  return BandMatrix(p, h, std::move(bands));
}

/// Contact similarity log(1 + count); pairs farther apart than the band are
/// dropped and absent pairs (including the diagonal) are 0.
inline BandMatrix build_hic_log(const ContactMatrix& c, std::size_t h) {
  const std::size_t p = c.bins();
  if (h < 1 || h > p) throw std::invalid_argument("bandwidth must lie in [1, p]");
  std::vector<double> bands(p * h, 0.0);
  std::vector<bool> seen(p * h, false);
  for (const auto& t : c.counts()) {
    const std::size_t d = t.j - t.i;
    if (d >= h) continue;
    const std::size_t slot = (t.i - 1) * h + d;
    if (seen[slot]) {
      throw input_error("duplicate contact entry (" + std::to_string(t.i) + ", " +
                        std::to_string(t.j) + ")");
    }
    seen[slot] = true;
    bands[slot] = std::log1p(t.value);
  }
  return BandMatrix(p, h, std::move(bands));
}

}  // namespace chac

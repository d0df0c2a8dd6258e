#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "chac/band_matrix.hpp"

namespace chac {

/// Random positive definite band matrix: off-diagonal band entries i.i.d.
/// uniform on [0, 1], each diagonal entry one more than the sum of its
/// row's off-diagonal entries (strict diagonal dominance).
inline BandMatrix random_band_matrix(std::size_t p, std::size_t h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> bands(p * h, 0.0);
  std::vector<double> row_sum(p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t d = 1; d < h && i + d < p; ++d) {
      const double v = unif(rng);
      bands[i * h + d] = v;
      row_sum[i] += v;
      row_sum[i + d] += v;
    }
  }
  for (std::size_t i = 0; i < p; ++i) bands[i * h] = 1.0 + row_sum[i];
  return BandMatrix(p, h, std::move(bands));
}

}  // namespace chac

#include <gtest/gtest.h>

#include <random>

#include "chac/oracle.hpp"
#include "chac/pencil.hpp"
#include "support/oracles.hpp"

using namespace chac;
using chac::testing::brute_backward;
using chac::testing::brute_cluster_sum;
using chac::testing::brute_forward;
using chac::testing::m3;
using chac::testing::rel_close;

TEST(Pencil, RunningExampleEntries) {
  const PencilTable t(m3());
  EXPECT_NEAR(t.forward(1, 1), 1.0, 1e-15);
  EXPECT_NEAR(t.forward(2, 2), 3.0, 1e-15);
  EXPECT_NEAR(t.forward(3, 2), 4.4, 1e-15);
  EXPECT_NEAR(t.backward(2, 2), 2.4, 1e-15);
  EXPECT_NEAR(t.backward(1, 2), 4.4, 1e-15);
  EXPECT_EQ(t.entry_count(), 2u * 3u * 2u + 2u);
}

TEST(Pencil, IdentityDiagonalPrefix) {
  const PencilTable t(chac::testing::identity(4));
  for (std::size_t r = 1; r <= 4; ++r) EXPECT_EQ(t.forward(r, 1), static_cast<long double>(r));
}

TEST(Pencil, ClusterSums) {
  const PencilTable t(m3());
  EXPECT_NEAR(t.cluster_sum(0, 2), 3.0, 1e-15);
  EXPECT_NEAR(t.cluster_sum(1, 3), 2.4, 1e-15);
  EXPECT_NEAR(t.cluster_sum(0, 3), 4.4, 1e-15);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(t.cluster_sum(i, i + 1), 1.0, 1e-15);
  EXPECT_THROW(t.cluster_sum(1, 1), std::out_of_range);
  EXPECT_THROW(t.cluster_sum(0, 4), std::out_of_range);
}

TEST(Pencil, WardLinkage) {
  const PencilTable t(m3());
  EXPECT_NEAR(t.ward_linkage({0, 1}, {1, 2}), 0.5, 1e-15);
  EXPECT_NEAR(t.ward_linkage({0, 2}, {2, 3}), 1.5 + 1.0 - 4.4 / 3.0, 1e-15);
  EXPECT_THROW(t.ward_linkage({0, 1}, {2, 3}), std::invalid_argument);
  EXPECT_THROW(t.ward_linkage({0, 2}, {1, 3}), std::invalid_argument);
}

TEST(Pencil, SingletonLinkageWithUnitDiagonal) {
  std::mt19937_64 rng(5);
  auto m = chac::testing::random_band(12, 4, rng);
  std::vector<double> bands = m.storage();
  for (std::size_t i = 0; i < 12; ++i) bands[i * 4] = 1.0;
  m = BandMatrix(12, 4, bands);
  const PencilTable t(m);
  for (std::size_t i = 0; i + 1 < 12; ++i) {
    const double direct = m(i, i) + m(i + 1, i + 1) - (m(i, i) + m(i + 1, i + 1) + 2 * m(i, i + 1)) / 2;
    EXPECT_NEAR(t.ward_linkage({i, i + 1}, {i + 1, i + 2}), direct, 1e-15);
    EXPECT_NEAR(t.ward_linkage({i, i + 1}, {i + 1, i + 2}), 1.0 - m(i, i + 1), 1e-15);
  }
}

TEST(PencilProperty, EntriesMatchBruteForce) {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t p = 1 + rng() % 60;
    const std::size_t h = 1 + rng() % p;
    const auto m = chac::testing::random_band(p, h, rng, -1.0, 1.0);
    const PencilTable t(m);
    EXPECT_EQ(t.entry_count(), 2 * p * h + h);
    for (std::size_t r = 1; r <= p; ++r) {
      for (std::size_t l = 1; l <= h; ++l) {
        EXPECT_NEAR(t.forward(r, l), brute_forward(m, r, l), 1e-12);
        EXPECT_NEAR(t.backward(r, l), brute_backward(m, r, l), 1e-12);
      }
    }
    for (std::size_t l = 1; l <= h; ++l) EXPECT_EQ(t.full(l), t.forward(p, l));
    for (std::size_t l = 1; l <= h; ++l) EXPECT_NEAR(t.forward(p, l), t.backward(1, l), 1e-12);
  }
}

TEST(PencilProperty, MonotoneInBandwidthForNonNegative) {
  std::mt19937_64 rng(19);
  const auto m = chac::testing::random_band(40, 9, rng);
  const PencilTable t(m);
  for (std::size_t r = 1; r <= 40; ++r) {
    for (std::size_t l = 2; l <= 9; ++l) EXPECT_LE(t.forward(r, l - 1), t.forward(r, l));
  }
}

TEST(PencilProperty, ClusterSumIdentityExhaustive) {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t p = 1 + rng() % 40;
    const std::size_t h = 1 + rng() % p;
    const auto m = chac::testing::random_band(p, h, rng, 0.1, 1.0);
    const PencilTable t(m);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = i + 1; j <= p; ++j) {
        EXPECT_TRUE(rel_close(t.cluster_sum(i, j), brute_cluster_sum(m, i, j), 1e-12))
            << "p=" << p << " h=" << h << " C=[" << i << "," << j << ")";
      }
    }
  }
}

TEST(PencilProperty, GramLinkageIsHalfSquaredDistance) {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> gauss;
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t p = 2 + rng() % 29;
    const std::size_t dim = 1 + rng() % 5;
    std::vector<std::vector<double>> x(p, std::vector<double>(dim));
    for (auto& row : x) {
      for (auto& v : row) v = gauss(rng);
    }
    const PencilTable t(oracle::gram_matrix(x));
    for (std::size_t i = 0; i + 1 < p; ++i) {
      double sq = 0;
      for (std::size_t k = 0; k < dim; ++k) sq += (x[i][k] - x[i + 1][k]) * (x[i][k] - x[i + 1][k]);
      EXPECT_TRUE(rel_close(t.ward_linkage({i, i + 1}, {i + 1, i + 2}), 0.5 * sq, 1e-9));
    }
  }
}

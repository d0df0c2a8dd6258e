#include <gtest/gtest.h>

#include <random>

#include "chac/engine.hpp"
#include "chac/oracle.hpp"
#include "support/oracles.hpp"

using namespace chac;
using chac::testing::identity;
using chac::testing::m3;
using chac::testing::rel_close;

namespace {

void expect_same_tree(const Dendrogram& a, const Dendrogram& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t t = 0; t < a.merges().size(); ++t) {
    const auto& x = a.merges()[t];
    const auto& y = b.merges()[t];
    ASSERT_EQ(x.left, y.left) << "merge " << t + 1;
    ASSERT_EQ(x.right, y.right) << "merge " << t + 1;
    EXPECT_TRUE(rel_close(x.height, y.height, tol)) << x.height << " vs " << y.height;
  }
}

}  // namespace

TEST(Cluster, RunningExample) {
  const auto d = cluster(m3());
  ASSERT_EQ(d.merges().size(), 2u);
  EXPECT_EQ(d.merges()[0].left, -1);
  EXPECT_EQ(d.merges()[0].right, -2);
  EXPECT_NEAR(d.merges()[0].height, 0.5, 1e-15);
  EXPECT_EQ(d.merges()[1].left, 1);
  EXPECT_EQ(d.merges()[1].right, -3);
  EXPECT_NEAR(d.merges()[1].height, 1.5 + 1.0 - 4.4 / 3.0, 1e-15);
  EXPECT_EQ(d.merges()[1].extent(), (Interval{0, 3}));
}

TEST(Cluster, IdentityTiesResolveLeftmost) {
  const auto d = cluster(identity(4));
  const std::vector<MergeRecord> expected{{-1, -2, 1.0}, {1, -3, 1.0}, {2, -4, 1.0}};
  EXPECT_EQ(d.records(), expected);
  EXPECT_EQ(d.records(), oracle::cluster_naive(oracle::DenseSimilarity(identity(4))).records());
}

TEST(Cluster, SingleObject) {
  const auto d = cluster(BandMatrix(1, 1, {2.0}));
  EXPECT_EQ(d.size(), 1u);
  EXPECT_TRUE(d.merges().empty());
}

TEST(ClusterShifted, RunningExample) {
  const auto d = cluster_shifted(m3(), 1.0);
  EXPECT_EQ(d.merges()[0].left, -1);
  EXPECT_EQ(d.merges()[1].left, 1);
  EXPECT_NEAR(d.merges()[0].height, 1.5, 1e-15);
  EXPECT_NEAR(d.merges()[1].height, 2.5 + 1.0 - 4.4 / 3.0, 1e-14);
}

TEST(ClusterShifted, ZeroAndIdentity) {
  EXPECT_EQ(cluster_shifted(m3(), 0.0).records(), cluster(m3()).records());
  for (const auto& m : cluster_shifted(identity(3), 2.0).merges()) EXPECT_EQ(m.height, 3.0);
}

TEST(Cut, RunningExample) {
  const auto d = cluster(m3());
  EXPECT_EQ(cut(d, 2).labels, (std::vector<std::size_t>{1, 1, 2}));
  EXPECT_EQ(cut(d, 1).labels, (std::vector<std::size_t>{1, 1, 1}));
  EXPECT_EQ(cut(d, 3).labels, (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_THROW(cut(d, 0), std::invalid_argument);
  EXPECT_THROW(cut(d, 4), std::invalid_argument);
}

TEST(CutProperty, ContiguousNondecreasingLabels) {
  std::mt19937_64 rng(31);
  const auto d = cluster(chac::testing::random_band(60, 7, rng));
  for (std::size_t k = 1; k <= 60; ++k) {
    const auto part = cut(d, k);
    EXPECT_EQ(part.labels.front(), 1u);
    EXPECT_EQ(part.labels.back(), k);
    for (std::size_t i = 1; i < 60; ++i) {
      EXPECT_TRUE(part.labels[i] == part.labels[i - 1] || part.labels[i] == part.labels[i - 1] + 1);
    }
  }
}

TEST(EngineProperty, ChainStaysValidAndHeapBounded) {
  std::mt19937_64 rng(37);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t p = 2 + rng() % 150;
    const std::size_t h = 1 + rng() % p;
    ConstrainedWard engine(chac::testing::random_band(p, h, rng, -1.0, 1.0));
    std::size_t steps = 0;
    while (!engine.done()) {
      engine.step();
      ++steps;
      const auto chain = engine.active_clusters();
      ASSERT_EQ(chain.size(), p - steps);
      ASSERT_EQ(chain.front().begin, 0u);
      ASSERT_EQ(chain.back().end, p);
      for (std::size_t c = 0; c < chain.size(); ++c) {
        ASSERT_LT(chain[c].begin, chain[c].end);
        if (c > 0) {
          ASSERT_EQ(chain[c - 1].end, chain[c].begin);
        }
      }
    }
    const auto s = engine.stats();
    EXPECT_LE(s.heap_peak, 3 * p);
    EXPECT_LE(s.heap_pops, 3 * p);
    EXPECT_LE(s.heap_pushes, 3 * p);
  }
}

TEST(EngineProperty, MatchesNaiveOracle) {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t p = 1 + rng() % 80;
    const std::size_t h = 1 + rng() % p;
    const auto m = chac::testing::random_band(p, h, rng);
    expect_same_tree(cluster(m), oracle::cluster_naive(oracle::DenseSimilarity(m)), 1e-9);
  }
}

TEST(EngineProperty, ShiftKeepsMergeOrder) {
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t p = 2 + rng() % 100;
    const std::size_t h = 1 + rng() % p;
    const auto m = chac::testing::random_band(p, h, rng);
    const auto base = cluster(m);
    for (double lambda : {-1.0, 0.5, 10.0}) {
      const auto shifted = cluster_shifted(m, lambda);
      ASSERT_EQ(shifted.size(), base.size());
      for (std::size_t t = 0; t < base.merges().size(); ++t) {
        ASSERT_EQ(shifted.merges()[t].left, base.merges()[t].left);
        ASSERT_EQ(shifted.merges()[t].right, base.merges()[t].right);
        EXPECT_NEAR(shifted.merges()[t].height - base.merges()[t].height, lambda, 1e-9);
      }
    }
  }
}

TEST(EngineProperty, IgnoresEverythingOutsideTheBand) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> unif;
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t p = 5 + rng() % 50;
    const std::size_t h = 1 + rng() % (p - 1);
    auto a = to_dense(chac::testing::random_band(p, p, rng));
    auto b = a;
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = i + h; j < p; ++j) b[i][j] = b[j][i] = unif(rng);
    }
    EXPECT_EQ(cluster(from_dense(a, h)).records(), cluster(from_dense(b, h)).records());
  }
}

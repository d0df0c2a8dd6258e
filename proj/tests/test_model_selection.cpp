#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "chac/engine.hpp"
#include "chac/model_selection.hpp"
#include "support/oracles.hpp"

using namespace chac;

namespace {

/// Left-to-right caterpillar with the given heights.
Dendrogram caterpillar(const std::vector<double>& heights) {
  std::vector<MergeRecord> r;
  for (std::size_t t = 0; t < heights.size(); ++t) {
    r.push_back({t == 0 ? NodeRef{-1} : static_cast<NodeRef>(t), -static_cast<NodeRef>(t + 2),
                 heights[t]});
  }
  return Dendrogram(heights.size() + 1, r);
}

Dendrogram scaled(const Dendrogram& d, double c) {
  auto r = d.records();
  for (auto& m : r) m.height *= c;
  return Dendrogram(d.size(), r);
}

}  // namespace

TEST(LossCurve, SumsLeadingHeights) {
  const auto loss = loss_curve(caterpillar({0.5, 1.0, 3.0}));
  EXPECT_EQ(loss, (std::vector<double>{4.5, 1.5, 0.5, 0.0}));
}

TEST(BrokenStick, TwoPieceExpectations) {
  const auto e = broken_stick_expectations(2);
  EXPECT_DOUBLE_EQ(e[0], 0.75);
  EXPECT_DOUBLE_EQ(e[1], 0.25);
}

TEST(BrokenStick, ExpectationsSumToOne) {
  for (std::size_t n : {1, 2, 3, 7, 49, 100, 5000}) {
    const auto e = broken_stick_expectations(n);
    const long double total = std::accumulate(e.begin(), e.end(), 0.0L);
    EXPECT_NEAR(static_cast<double>(total), 1.0, 1e-12) << n;
    for (std::size_t i = 1; i < n; ++i) EXPECT_GE(e[i - 1], e[i]);
  }
}

TEST(BrokenStick, EqualHeightsSelectOne) {
  EXPECT_EQ(select_broken_stick(caterpillar(std::vector<double>(9, 1.0))).k, 1u);
}

TEST(BrokenStick, FiveBlocks) {
  const auto d = cluster(chac::testing::block_matrix(50, 5, 0.9));
  EXPECT_EQ(select_broken_stick(d).k, 5u);
}

TEST(BrokenStick, DegenerateAndNegativeHeights) {
  EXPECT_EQ(select_broken_stick(caterpillar({0.0, 0.0, 0.0})).k, 1u);
  const auto s = select_broken_stick(caterpillar({-1.0, 0.0, 5.0}));
  EXPECT_EQ(s.clamped_heights, 1u);
  EXPECT_EQ(s.k, 2u);
  EXPECT_THROW(select_broken_stick(Dendrogram(1, {})), std::invalid_argument);
  const auto two = select_broken_stick(caterpillar({0.7}));
  EXPECT_GE(two.k, 1u);
  EXPECT_LE(two.k, 2u);
}

TEST(SlopeHeuristic, PenaltyShape) {
  for (std::size_t p : {1, 2, 5, 1000000}) EXPECT_EQ(log_binomial(p - 1, 0), 0.0);
  EXPECT_NEAR(log_binomial(4, 2), std::log(6.0), 1e-14);
  EXPECT_NEAR(log_binomial(59, 4), std::log(455126.0), 1e-12);
  EXPECT_TRUE(std::isfinite(log_binomial(999999, 500000)));
}

TEST(SlopeHeuristic, SyntheticLoss) {
  const std::size_t p = 60;
  std::vector<double> loss(p);
  for (std::size_t k = 1; k <= p; ++k) {
    loss[k - 1] = 100.0 * std::max(0.0, 5.0 - static_cast<double>(k)) + 0.01 * log_binomial(p - 1, k - 1);
  }
  const auto s = select_slope_heuristic(loss, p / 2);
  EXPECT_EQ(s.k, 5u);
  EXPECT_NEAR(s.slope, 0.01, 1e-9);
}

TEST(SlopeHeuristic, FiveBlocks) {
  const auto d = cluster(chac::testing::block_matrix(50, 5, 0.9));
  EXPECT_EQ(select_slope_heuristic(d, 25).k, 5u);
}

TEST(SlopeHeuristic, Preconditions) {
  const auto d = caterpillar({1.0, 2.0, 3.0});
  EXPECT_THROW(select_slope_heuristic(d, 1), std::invalid_argument);
  EXPECT_THROW(select_slope_heuristic(d, 5), std::invalid_argument);
  SlopeOptions bad;
  bad.fit_fraction = 0.0;
  EXPECT_THROW(select_slope_heuristic(d, 3, bad), std::invalid_argument);
}

TEST(SlopeHeuristic, TheilSen) {
  EXPECT_DOUBLE_EQ(theil_sen_slope({0, 1, 2, 3, 4}, {1, 3, 5, 7, 100}), 2.0);
  EXPECT_EQ(theil_sen_slope({1, 1}, {0, 5}), 0.0);
}

TEST(SelectionProperty, InRangeAndScaleEquivariant) {
  std::mt19937_64 rng(59);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t p = 4 + rng() % 120;
    const std::size_t h = 1 + rng() % p;
    const auto d = cluster(chac::testing::random_band(p, h, rng));
    const std::size_t kmax = std::max<std::size_t>(2, p / 2);
    const auto bs = select_broken_stick(d).k;
    const auto sh = select_slope_heuristic(d, kmax).k;
    EXPECT_GE(bs, 1u);
    EXPECT_LE(bs, p);
    EXPECT_GE(sh, 1u);
    EXPECT_LE(sh, kmax);
    for (double c : {0.25, 8.0, 1024.0}) {
      EXPECT_EQ(select_slope_heuristic(scaled(d, c), kmax).k, sh) << "c=" << c;
      EXPECT_EQ(select_broken_stick(scaled(d, c)).k, bs) << "c=" << c;
    }
  }
}

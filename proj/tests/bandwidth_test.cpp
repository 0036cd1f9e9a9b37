#include "jpegvpr/bandwidth.hpp"

#include <random>

#include <gtest/gtest.h>

#include "jpegvpr/error.hpp"
#include "published_sizes.hpp"

namespace jpegvpr {
namespace {

// O(n^2) dominance check: dominated iff another point has strictly fewer
// bytes and strictly higher accuracy.
std::vector<bool> pareto_oracle(const std::vector<ParetoPoint>& points) {
  std::vector<bool> optimal(points.size(), true);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (points[j].bytes < points[i].bytes && points[j].accuracy > points[i].accuracy) optimal[i] = false;
    }
  }
  return optimal;
}

DegradationCurve curve_of(const std::vector<std::pair<int, double>>& points) {
  DegradationCurve c;
  for (auto [p, a] : points) c.points.push_back({CompressionLevel(p), a});
  return c;
}

CompressionSweepResult sweep_of(const std::vector<std::pair<int, std::uintmax_t>>& totals) {
  CompressionSweepResult s;
  for (auto [p, b] : totals) {
    s.levels.emplace_back(p);
    s.images[p].push_back({"query", 0, "query/x.jpg", b});
  }
  return s;
}

TEST(TransferTimeTest, Examples) {
  EXPECT_DOUBLE_EQ(transfer_time(1'000'000, {1'000'000, 0.0}), 1.0);
  EXPECT_DOUBLE_EQ(transfer_time(0, {1'000'000, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(transfer_time(1'000'000, {1'000'000, 0.1}), 1.1);
}

TEST(TransferTimeTest, LinearInBytesInverseInRate) {
  const ChannelModel base{125'000, 0.05};
  const double t1 = transfer_time(10'000, base);
  for (double k : {2.0, 7.0, 31.5}) {
    EXPECT_NEAR(transfer_time(10'000 * k, base), k * t1, 1e-12);
    EXPECT_NEAR(transfer_time(10'000, {base.rate_bytes_per_second * k, 0.05}), t1 / k, 1e-12);
  }
}

TEST(TransferTimeTest, InvalidChannel) {
  EXPECT_THROW(transfer_time(1, {0, 0}), ConfigError);
  EXPECT_THROW(transfer_time(1, {10, -0.1}), ConfigError);
  EXPECT_THROW(transfer_time(1, {10, 1.5}), ConfigError);
}

TEST(BudgetTest, CampusLoopFiveMegabytesSelectsEightyPercent) {
  const auto& campus = testing::published_sizes()[2];
  ASSERT_EQ(campus.dataset, "Campus Loop");
  const auto sweep = testing::sweep_from_published(campus);
  const auto level = min_compression_for_budget(sweep, 5'000'000);
  ASSERT_TRUE(level.has_value());
  EXPECT_EQ(level->percent(), 80);
}

TEST(BudgetTest, EdgeBudgets) {
  const auto sweep = testing::sweep_from_published(testing::published_sizes()[2]);
  EXPECT_EQ(min_compression_for_budget(sweep, 100'000'000)->percent(), 0);
  EXPECT_FALSE(min_compression_for_budget(sweep, 0).has_value());
  EXPECT_FALSE(min_compression_for_budget(sweep, 999'999).has_value());
  EXPECT_EQ(min_compression_for_budget(sweep, 1'000'000)->percent(), 97);
}

TEST(BudgetTest, LargerBudgetNeverSelectsMoreCompression) {
  for (const auto& row : testing::published_sizes()) {
    const auto sweep = testing::sweep_from_published(row);
    int previous = 100;
    for (std::uintmax_t budget = 0; budget < 1'200'000'000; budget += 3'700'000) {
      const auto level = min_compression_for_budget(sweep, budget);
      const int percent = level ? level->percent() : 100;
      ASSERT_LE(percent, previous) << row.dataset << " budget " << budget;
      previous = percent;
    }
  }
}

TEST(PlanTest, FieldsFollowFormula) {
  const auto sweep = sweep_of({{0, 4000}, {97, 400}});
  const ChannelModel ch{1000, 0.25};
  const auto curve = curve_of({{0, 0.9}, {97, 0.4}});
  const auto plan = plan_transmission(sweep, CompressionLevel(97), ch, &curve);
  EXPECT_EQ(plan.total_bytes, 400u);
  EXPECT_DOUBLE_EQ(plan.transfer_seconds, 400 * 1.25 / 1000);
  EXPECT_DOUBLE_EQ(plan.frames_per_second, 1000 / (400 * 1.25));
  ASSERT_TRUE(plan.accuracy.has_value());
  EXPECT_EQ(*plan.accuracy, 0.4);
  EXPECT_FALSE(plan_transmission(sweep, CompressionLevel(0), ch).accuracy.has_value());
}

TEST(ParetoTest, MonotoneCaseAllOptimal) {
  const auto points = accuracy_bytes_pareto(curve_of({{0, 0.9}, {50, 0.8}, {97, 0.3}}),
                                            sweep_of({{0, 1000}, {50, 300}, {97, 100}}));
  for (const auto& p : points) EXPECT_TRUE(p.pareto_optimal);
}

TEST(ParetoTest, DominatedPointFlagged) {
  const auto points = accuracy_bytes_pareto(curve_of({{0, 0.9}, {50, 0.5}, {97, 0.6}}),
                                            sweep_of({{0, 1000}, {50, 300}, {97, 100}}));
  EXPECT_TRUE(points[0].pareto_optimal);
  EXPECT_FALSE(points[1].pareto_optimal);
  EXPECT_TRUE(points[2].pareto_optimal);
}

TEST(ParetoTest, LevelMismatchFails) {
  EXPECT_THROW(accuracy_bytes_pareto(curve_of({{0, 0.9}}), sweep_of({{0, 10}, {97, 5}})), DataError);
}

TEST(ParetoTest, AgreesWithDominanceOracle) {
  std::mt19937 rng(99);
  for (int t = 0; t < 500; ++t) {
    std::vector<std::pair<int, double>> curve;
    std::vector<std::pair<int, std::uintmax_t>> sizes;
    std::vector<int> percents;
    for (int p = 0; p < 100; ++p) {
      if (rng() % 10 == 0) percents.push_back(p);
    }
    if (percents.empty()) percents.push_back(0);
    for (int p : percents) {
      curve.push_back({p, static_cast<int>(rng() % 11) / 10.0});  // ties on purpose
      sizes.push_back({p, 1 + rng() % 20});
    }
    const auto points = accuracy_bytes_pareto(curve_of(curve), sweep_of(sizes));
    const auto oracle = pareto_oracle(points);
    for (std::size_t i = 0; i < points.size(); ++i) ASSERT_EQ(points[i].pareto_optimal, oracle[i]);
  }
}

}  // namespace
}  // namespace jpegvpr

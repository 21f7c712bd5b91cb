#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "lstord/estimator.hpp"

using namespace lstord;

namespace {

constexpr double pi = std::numbers::pi;
const double r2 = std::sqrt(2.0) / 2.0;

DataSet gaussian(std::size_t n, std::size_t p, double shift, std::mt19937_64& eng) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> v(n * p);
  for (auto& e : v) e = z(eng) + shift;
  return DataSet(n, p, std::move(v));
}

std::vector<double> at_angle(double phi) {
  if (phi == 0.0) return {1.0, 0.0};
  if (phi == pi / 2) return {0.0, 1.0};
  return {std::cos(phi), std::sin(phi)};
}

std::uint64_t brute_count(const std::vector<std::pair<double, double>>& z, const std::vector<double>& s) {
  std::uint64_t c = 0;
  for (const auto& [a, b] : z) c += 0.0 <= s[0] * a + s[1] * b;
  return c;
}

std::vector<std::pair<double, double>> differences(const DataSet& x, const DataSet& y) {
  std::vector<std::pair<double, double>> z;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < y.rows(); ++j) z.emplace_back(y(j, 0) - x(i, 0), y(j, 1) - x(i, 1));
  return z;
}

// Optimum of the count over a uniform grid of angles plus every breakpoint
// where s.Z changes sign. Counts s.X <= s.Y as s.Z >= 0 would drift from the
// estimator's own arithmetic, so the candidate direction is re-evaluated on
// the original data.
struct GridOptimum {
  std::uint64_t best_max = 0;
  std::uint64_t best_min = UINT64_MAX;
};

GridOptimum grid_oracle(const DataSet& x, const DataSet& y, std::size_t grid = 10000) {
  const auto z = differences(x, y);
  std::vector<double> angles;
  for (std::size_t k = 0; k <= grid; ++k) angles.push_back(pi / 2 * static_cast<double>(k) / static_cast<double>(grid));
  for (const auto& [a, b] : z) {
    if (a >= 0 && b < 0) angles.push_back(std::atan2(a, -b));
    if (a < 0 && b >= 0) angles.push_back(std::atan2(-a, b));
  }
  GridOptimum g;
  for (double phi : angles) {
    const auto s = at_angle(std::clamp(phi, 0.0, pi / 2));
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < y.rows(); ++j) c += s[0] * x(i, 0) + s[1] * x(i, 1) <= s[0] * y(j, 0) + s[1] * y(j, 1);
    g.best_max = std::max(g.best_max, c);
    g.best_min = std::min(g.best_min, c);
  }
  return g;
}

std::uint64_t paired_grid_max(const PairedSample& pairs, std::size_t grid = 10000) {
  const DataSet& x = pairs.x();
  const DataSet& y = pairs.y();
  std::vector<double> angles;
  for (std::size_t k = 0; k <= grid; ++k) angles.push_back(pi / 2 * static_cast<double>(k) / static_cast<double>(grid));
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double a = y(i, 0) - x(i, 0), b = y(i, 1) - x(i, 1);
    if (a >= 0 && b < 0) angles.push_back(std::atan2(a, -b));
    if (a < 0 && b >= 0) angles.push_back(std::atan2(-a, b));
  }
  std::uint64_t best = 0;
  for (double phi : angles) {
    const auto s = at_angle(std::clamp(phi, 0.0, pi / 2));
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < x.rows(); ++i) c += s[0] * x(i, 0) + s[1] * x(i, 1) <= s[0] * y(i, 0) + s[1] * y(i, 1);
    best = std::max(best, c);
  }
  return best;
}

}  // namespace

TEST(EstimateP2, FirstQuadrantDifferencesGiveWholeArc) {
  const auto x = DataSet::from_rows({{0, 0}, {-1, 0}});
  const auto y = DataSet::from_rows({{1, 1}, {0, 2}, {0, 0}});
  const auto e = estimate_p2(x, y);
  EXPECT_EQ(e.psi_value, 1.0);
  ASSERT_TRUE(e.maximizing_arc);
  EXPECT_EQ(e.maximizing_arc->lo, 0.0);
  EXPECT_EQ(e.maximizing_arc->hi, pi / 2);
  EXPECT_NEAR(e.direction[0], r2, 1e-15);
  EXPECT_NEAR(e.direction[1], r2, 1e-15);
  EXPECT_EQ(e.method, EstimateMethod::exact_p2);
}

TEST(EstimateP2, SingleMixedPairBreakpoint) {
  const auto x = DataSet::from_rows({{0, 0}});
  const auto y = DataSet::from_rows({{r2, -r2}});
  const auto e = estimate_p2(x, y);
  EXPECT_EQ(e.psi_value, 1.0);
  ASSERT_TRUE(e.maximizing_arc);
  EXPECT_EQ(e.maximizing_arc->lo, 0.0);
  EXPECT_NEAR(e.maximizing_arc->hi, pi / 4, 1e-15);
  // indicator is 1 exactly on angles <= pi/4
  EXPECT_EQ(brute_count({{r2, -r2}}, at_angle(pi / 4 - 1e-9)), 1u);
  EXPECT_EQ(brute_count({{r2, -r2}}, at_angle(pi / 4 + 1e-9)), 0u);
}

TEST(EstimateP2, VerticalDifferenceOnlyCountsAtZeroAngle) {
  const auto x = DataSet::from_rows({{0, 0}});
  const auto y = DataSet::from_rows({{0, -1}});
  const auto e = estimate_p2(x, y);
  EXPECT_EQ(e.psi_value, 1.0);
  EXPECT_EQ(e.direction[0], 1.0);
  EXPECT_EQ(e.direction[1], 0.0);
}

TEST(EstimateP2, ThreePointExampleMatchesGrid) {
  const auto x = DataSet::from_rows({{1, 1}, {0, 1}, {1, 0}});
  const auto y = DataSet::from_rows({{0.75, 0.75}, {1, 2}, {2, 1}});
  const auto e = estimate_p2(x, y);
  EXPECT_EQ(e.count, grid_oracle(x, y).best_max);
  EXPECT_DOUBLE_EQ(e.psi_value, 8.0 / 9.0);
  EXPECT_EQ(psi_two_sample(x, y, e.direction), e.psi_value);
}

TEST(EstimateP2, MatchesGridOracleOnRandomData) {
  std::mt19937_64 eng(2024);
  for (int t = 0; t < 20; ++t) {
    const auto x = gaussian(30, 2, 0.0, eng);
    const auto y = gaussian(30, 2, 0.3, eng);
    const auto e = estimate_p2(x, y);
    EXPECT_EQ(e.count, grid_oracle(x, y).best_max) << "trial " << t;
    EXPECT_EQ(psi_two_sample(x, y, e.direction), e.psi_value);
    EXPECT_LE(e.maximizing_arc->lo, e.maximizing_arc->hi);
  }
}

TEST(EstimateP2, RejectsOtherDimensions) {
  const auto x = DataSet::from_rows({{0, 0, 0}});
  EXPECT_THROW(estimate_p2(x, x), input_error);
}

TEST(EstimateP2, CoordinateSwapMirrorsDirection) {
  std::mt19937_64 eng(5);
  for (int t = 0; t < 20; ++t) {
    const auto x = gaussian(15, 2, 0.0, eng);
    const auto y = gaussian(15, 2, 0.5, eng);
    auto swap = [](const DataSet& d) {
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < d.rows(); ++i) rows.push_back({d(i, 1), d(i, 0)});
      return DataSet::from_rows(rows);
    };
    const auto a = estimate_p2(x, y);
    const auto b = estimate_p2(swap(x), swap(y));
    EXPECT_EQ(a.count, b.count);
    EXPECT_NEAR(a.direction[0], b.direction[1], 1e-12);
    EXPECT_NEAR(a.direction[1], b.direction[0], 1e-12);
  }
}

TEST(EstimateGeneral, DelegatesAtP2UnlessForced) {
  std::mt19937_64 eng(6);
  const auto x = gaussian(20, 2, 0.0, eng);
  const auto y = gaussian(20, 2, 0.5, eng);
  EXPECT_EQ(estimate_general(x, y).method, EstimateMethod::exact_p2);
  EstimatorConfig cfg;
  cfg.force_simplex = true;
  EXPECT_EQ(estimate_general(x, y, cfg).method, EstimateMethod::simplex);
}

TEST(EstimateGeneral, ForcedSimplexMostlyMatchesExact) {
  std::mt19937_64 eng(2024);
  EstimatorConfig cfg;
  cfg.force_simplex = true;
  int matches = 0;
  for (int t = 0; t < 30; ++t) {
    const auto x = gaussian(30, 2, 0.0, eng);
    const auto y = gaussian(30, 2, 0.3, eng);
    cfg.seed = static_cast<std::uint64_t>(t);
    const auto exact = estimate_p2(x, y);
    const auto simplex = estimate_general(x, y, cfg);
    EXPECT_LE(simplex.count, exact.count);
    EXPECT_LE(exact.count - simplex.count, 2u);
    matches += simplex.count == exact.count;
  }
  EXPECT_GE(matches, 27);
}

TEST(EstimateGeneral, ConstantObjective) {
  const auto x = DataSet::from_rows({{1, 2, 3}});
  const auto e = estimate_general(x, x);
  EXPECT_EQ(e.psi_value, 1.0);
}

TEST(EstimateGeneral, NeverBelowAxes) {
  std::mt19937_64 eng(8);
  for (int t = 0; t < 10; ++t) {
    const auto x = gaussian(20, 4, 0.0, eng);
    const auto y = gaussian(20, 4, 0.2, eng);
    EstimatorConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(t);
    cfg.n_starts = 6;
    const auto e = estimate_general(x, y, cfg);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_GE(e.psi_value, psi_two_sample(x, y, Direction::axis(4, k)));
    EXPECT_EQ(psi_two_sample(x, y, e.direction), e.psi_value);
  }
}

TEST(EstimateGeneral, Deterministic) {
  std::mt19937_64 eng(9);
  const auto x = gaussian(25, 3, 0.0, eng);
  const auto y = gaussian(25, 3, 0.4, eng);
  EstimatorConfig cfg;
  cfg.seed = 77;
  const auto a = estimate_general(x, y, cfg);
  const auto b = estimate_general(x, y, cfg);
  EXPECT_EQ(a.direction, b.direction);
  EXPECT_EQ(a.count, b.count);
}

TEST(EstimateGeneral, PsiInvariantUnderCoordinatePermutation) {
  std::mt19937_64 eng(10);
  int equal = 0;
  for (int t = 0; t < 10; ++t) {
    const auto x = gaussian(15, 3, 0.0, eng);
    const auto y = gaussian(15, 3, 0.5, eng);
    auto perm = [](const DataSet& d) {
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < d.rows(); ++i) rows.push_back({d(i, 2), d(i, 0), d(i, 1)});
      return DataSet::from_rows(rows);
    };
    EstimatorConfig cfg;
    cfg.seed = 5;
    const auto a = estimate_general(x, y, cfg);
    const auto b = estimate_general(perm(x), perm(y), cfg);
    equal += a.count == b.count;
    EXPECT_EQ(b.direction[0], a.direction[2]);
    EXPECT_EQ(b.direction[1], a.direction[0]);
    EXPECT_EQ(b.direction[2], a.direction[1]);
  }
  EXPECT_EQ(equal, 10);
}

TEST(EstimateGeneral, OneDimensional) {
  const auto x = DataSet::from_rows({{0}, {2}});
  const auto y = DataSet::from_rows({{1}, {3}});
  const auto e = estimate_general(x, y);
  EXPECT_EQ(e.direction[0], 1.0);
  EXPECT_DOUBLE_EQ(e.psi_value, 0.75);
}

TEST(EstimateMin, DominanceExamples) {
  const auto lo = DataSet::from_rows({{0, 0}});
  const auto hi = DataSet::from_rows({{1, 1}});
  EXPECT_EQ(estimate_min(lo, hi).psi_value, 1.0);
  EXPECT_EQ(estimate_min(hi, lo).psi_value, 0.0);
  const auto lo3 = DataSet::from_rows({{0, 0, 0}});
  const auto hi3 = DataSet::from_rows({{1, 1, 1}});
  EXPECT_EQ(estimate_min(lo3, hi3).psi_value, 1.0);
  EXPECT_EQ(estimate_min(hi3, lo3).psi_value, 0.0);
}

TEST(EstimateMin, MatchesGridOracle) {
  std::mt19937_64 eng(11);
  for (int t = 0; t < 20; ++t) {
    const auto x = gaussian(25, 2, 0.0, eng);
    const auto y = gaussian(25, 2, 0.2, eng);
    const auto e = estimate_min(x, y);
    EXPECT_EQ(e.count, grid_oracle(x, y).best_min) << "trial " << t;
    EXPECT_EQ(psi_two_sample(x, y, e.direction), e.psi_value);
  }
}

TEST(EstimatePaired, TiedPairs) {
  const auto x = DataSet::from_rows({{1, 2}, {3, 1}});
  const auto e = estimate_paired(PairedSample(x, x));
  EXPECT_EQ(e.psi_value, 1.0);
}

TEST(EstimatePaired, ConstantObjectiveExample) {
  const auto x = DataSet::from_rows({{0, 0}, {1, 1}, {2, 2}});
  const auto y = DataSet::from_rows({{2, 2}, {1, 1}, {0, 0}});
  const auto e = estimate_paired(PairedSample(x, y));
  EXPECT_DOUBLE_EQ(e.psi_value, 2.0 / 3.0);
  EXPECT_GT(e.direction[0], 0.0);
  EXPECT_GT(e.direction[1], 0.0);
}

TEST(EstimatePaired, MatchesGridOracle) {
  std::mt19937_64 eng(12);
  for (int t = 0; t < 100; ++t) {
    const auto x = gaussian(40, 2, 0.0, eng);
    const auto y = gaussian(40, 2, 0.2, eng);
    const PairedSample pairs(x, y);
    const auto e = estimate_paired(pairs);
    EXPECT_EQ(e.count, paired_grid_max(pairs)) << "trial " << t;
    EXPECT_EQ(psi_paired(pairs, e.direction), e.psi_value);
  }
}

TEST(EstimatePaired, GeneralDimension) {
  std::mt19937_64 eng(13);
  const auto x = gaussian(30, 3, 0.0, eng);
  const auto y = gaussian(30, 3, 0.5, eng);
  const PairedSample pairs(x, y);
  const auto e = estimate_paired(pairs);
  EXPECT_EQ(e.method, EstimateMethod::simplex);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_GE(e.psi_value, psi_paired(pairs, Direction::axis(3, k)));
}

TEST(RoyPlugin, SingularCovarianceSkipped) {
  std::mt19937_64 eng(14);
  const auto x = gaussian(3, 5, 0.0, eng);
  const auto y = gaussian(3, 5, 1.0, eng);
  EXPECT_FALSE(roy_plugin_direction(x, y).has_value());
}

TEST(EstimatorConfig, Validation) {
  EstimatorConfig c;
  c.n_starts = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_EQ(EstimatorConfig{}.iterations_for(3), 1500u);
}

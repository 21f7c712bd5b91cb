#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lstord/empirical.hpp"

using namespace lstord;

namespace {

const double r2 = std::sqrt(2.0) / 2.0;

DataSet ex21_x() { return DataSet::from_rows({{1, 1}, {0, 1}, {1, 0}}); }
DataSet ex21_y() { return DataSet::from_rows({{0.75, 0.75}, {1, 2}, {2, 1}}); }

DataSet sample_data(std::size_t n, std::size_t p, double shift, std::mt19937_64& eng, bool rounded = false) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> v(n * p);
  for (auto& e : v) {
    e = z(eng) + shift;
    if (rounded) e = std::round(e);
  }
  return DataSet(n, p, std::move(v));
}

double proj(const DataSet& d, std::size_t i, const Direction& s) {
  double acc = 0.0;
  for (std::size_t k = 0; k < d.cols(); ++k) acc += d(i, k) * s[k];
  return acc;
}

// Independent double loop.
std::uint64_t brute_count(const DataSet& x, const DataSet& y, const Direction& s) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < y.rows(); ++j) c += proj(x, i, s) <= proj(y, j, s);
  return c;
}

std::uint64_t brute_ties(const DataSet& x, const DataSet& y, const Direction& s) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < y.rows(); ++j) c += proj(x, i, s) == proj(y, j, s);
  return c;
}

Direction random_direction(std::size_t p, std::mt19937_64& eng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(p);
  for (auto& v : w) v = u(eng);
  return Direction::from_weights(w);
}

}  // namespace

TEST(PsiTwoSample, DominanceAndTies) {
  const auto x = DataSet::from_rows({{0, 0}});
  const auto y = DataSet::from_rows({{1, 1}});
  EXPECT_EQ(psi_two_sample(x, y, Direction({r2, r2})), 1.0);
  EXPECT_EQ(psi_two_sample(x, y, Direction({1.0, 0.0})), 1.0);
  const auto t = DataSet::from_rows({{1, 1}});
  EXPECT_EQ(psi_two_sample(t, t, Direction({0.6, 0.8})), 1.0);
}

TEST(PsiTwoSample, ThreePointExampleDiagonal) {
  const Direction s({r2, r2});
  EXPECT_DOUBLE_EQ(psi_two_sample(ex21_x(), ex21_y(), s), 8.0 / 9.0);
  EXPECT_EQ(psi_two_sample_count(ex21_x(), ex21_y(), s), 8u);
  EXPECT_EQ(brute_count(ex21_x(), ex21_y(), s), 8u);
}

TEST(PsiTwoSample, DimensionMismatch) {
  const auto x = DataSet::from_rows({{0, 0}});
  const auto y = DataSet::from_rows({{1, 1, 1}});
  EXPECT_THROW(psi_two_sample(x, y, Direction({1.0, 0.0})), input_error);
  EXPECT_THROW(psi_two_sample(x, x, Direction({1.0, 0.0, 0.0})), input_error);
}

TEST(PsiTwoSample, MatchesDoubleLoop) {
  std::mt19937_64 eng(1);
  for (int t = 0; t < 100; ++t) {
    const bool rounded = t % 2 == 0;
    const auto x = sample_data(17, 3, 0.0, eng, rounded);
    const auto y = sample_data(23, 3, 0.3, eng, rounded);
    const Direction s = rounded ? Direction::axis(3, t % 3) : random_direction(3, eng);
    EXPECT_EQ(psi_two_sample_count(x, y, s), brute_count(x, y, s));
  }
}

TEST(PsiProperties, ScaleInvarianceIsBitExact) {
  std::mt19937_64 eng(2);
  for (int t = 0; t < 50; ++t) {
    const auto x = sample_data(20, 3, 0.0, eng);
    const auto y = sample_data(20, 3, 0.5, eng);
    const Direction s = random_direction(3, eng);
    std::vector<double> w(s.coords().begin(), s.coords().end());
    for (auto& v : w) v *= 7.25;
    EXPECT_EQ(psi_two_sample(x, y, s), psi_two_sample(x, y, Direction::from_weights(w)));
    TwoSampleObjective obj(x, y);
    EXPECT_EQ(obj.count(s.coords()), obj.count(w));
  }
}

TEST(PsiProperties, SwapIdentityExact) {
  std::mt19937_64 eng(3);
  for (int t = 0; t < 100; ++t) {
    const auto x = sample_data(15, 2, 0.0, eng, true);
    const auto y = sample_data(12, 2, 0.2, eng, true);
    const Direction s = Direction::axis(2, t % 2);
    const auto nm = static_cast<std::uint64_t>(x.rows() * y.rows());
    EXPECT_EQ(psi_two_sample_count(x, y, s) + psi_two_sample_count(y, x, s), nm + brute_ties(x, y, s));
  }
}

TEST(PsiProperties, ShiftMonotonicity) {
  std::mt19937_64 eng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const auto x = sample_data(15, 3, 0.0, eng, t % 2 == 0);
    const auto y = sample_data(15, 3, 0.0, eng, t % 2 == 0);
    std::vector<double> c(3), shifted(y.values().begin(), y.values().end());
    for (auto& v : c) v = u(eng) < 0.3 ? 0.0 : u(eng);
    for (std::size_t i = 0; i < y.rows(); ++i)
      for (std::size_t k = 0; k < 3; ++k) shifted[i * 3 + k] += c[k];
    const DataSet ys(y.rows(), 3, shifted);
    for (int d = 0; d < 5; ++d) {
      const Direction s = random_direction(3, eng);
      EXPECT_GE(psi_two_sample(x, ys, s), psi_two_sample(x, y, s));
    }
  }
}

TEST(PsiProperties, MarginalConsistencyAtAxes) {
  std::mt19937_64 eng(5);
  for (int t = 0; t < 50; ++t) {
    const auto x = sample_data(13, 4, 0.0, eng, t % 2 == 0);
    const auto y = sample_data(11, 4, 0.4, eng, t % 2 == 0);
    for (std::size_t k = 0; k < 4; ++k) {
      std::uint64_t mw = 0;
      for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < y.rows(); ++j) mw += x(i, k) <= y(j, k);
      EXPECT_EQ(psi_two_sample(x, y, Direction::axis(4, k)), static_cast<double>(mw) / (13.0 * 11.0));
    }
  }
}

TEST(PsiPaired, Examples) {
  const auto x = DataSet::from_rows({{1, 2}, {3, 4}, {0, 0}});
  EXPECT_EQ(psi_paired(PairedSample(x, x), Direction({0.6, 0.8})), 1.0);

  const auto y = DataSet::from_rows({{0, 1}, {2, 3}, {-1, -1}});
  EXPECT_EQ(psi_paired(PairedSample(x, y), Direction({0.6, 0.8})), 0.0);
  EXPECT_EQ(psi_paired(PairedSample(x, y), Direction({0.0, 1.0})), 0.0);

  // Z = (2,2), (0,0), (-2,-2)
  const auto zx = DataSet::from_rows({{0, 0}, {1, 1}, {2, 2}});
  const auto zy = DataSet::from_rows({{2, 2}, {1, 1}, {0, 0}});
  std::mt19937_64 eng(6);
  for (int t = 0; t < 20; ++t)
    EXPECT_DOUBLE_EQ(psi_paired(PairedSample(zx, zy), random_direction(2, eng)), 2.0 / 3.0);
}

TEST(PsiPaired, ShapeMismatchRejected) {
  EXPECT_THROW(PairedSample(DataSet::from_rows({{1, 2}}), DataSet::from_rows({{1, 2}, {3, 4}})), input_error);
}

TEST(RankStatistic, Examples) {
  const Direction s({r2, r2});
  EXPECT_EQ(rank_statistic(DataSet::from_rows({{0, 0}}), DataSet::from_rows({{1, 1}}), s, 0), 1u);
  EXPECT_EQ(rank_statistic(DataSet::from_rows({{2, 2}}), DataSet::from_rows({{1, 1}}), s, 0), 2u);
  EXPECT_EQ(rank_statistic(ex21_x(), ex21_y(), s, 0), 4u);
  EXPECT_THROW(rank_statistic(ex21_x(), ex21_y(), s, 3), std::out_of_range);
}

TEST(RankStatistic, RankSumIdentityOnContinuousData) {
  std::mt19937_64 eng(7);
  for (int t = 0; t < 30; ++t) {
    const auto x = sample_data(9, 3, 0.0, eng);
    const auto y = sample_data(14, 3, 0.3, eng);
    const Direction s = random_direction(3, eng);
    std::uint64_t sum = 0;
    for (std::size_t k = 0; k < x.rows(); ++k) sum += rank_statistic(x, y, s, k);
    const std::uint64_t n = x.rows(), m = y.rows();
    EXPECT_EQ(sum, n * (n + 1) / 2 + n * m - psi_two_sample_count(x, y, s));
  }
}

TEST(PsiPopulationMc, PointMass) {
  auto point = [](engine_type&) { return std::vector<double>{1.0, 1.0}; };
  EXPECT_EQ(psi_population_mc(point, point, Direction({r2, r2}), 1000, 1), 1.0);
}

TEST(PsiPopulationMc, NormalShiftClosedForm) {
  auto gx = [](engine_type& e) {
    std::normal_distribution<double> z(0.0, 1.0);
    return std::vector<double>{z(e), z(e)};
  };
  auto gy = [](engine_type& e) {
    std::normal_distribution<double> z(0.0, 1.0);
    return std::vector<double>{1.0 + z(e), 1.0 + z(e)};
  };
  const Direction s({r2, r2});
  // Phi(s.delta / sqrt(2 s'Sigma s)) = Phi(1)
  const double phi1 = 0.5 * std::erfc(-1.0 / std::sqrt(2.0));
  EXPECT_NEAR(psi_population_mc(gx, gy, s, 1000000, 8), phi1, 0.002);
  EXPECT_NEAR(psi_population_mc(gy, gx, s, 1000000, 9), 1.0 - phi1, 0.002);
  EXPECT_EQ(psi_population_mc(gx, gy, s, 1000, 10), psi_population_mc(gx, gy, s, 1000, 10));
}

TEST(DataSetValidation, RejectsNonFinite) {
  EXPECT_THROW(DataSet(1, 2, {1.0, std::nan("")}), input_error);
  EXPECT_THROW(DataSet(0, 2, {}), input_error);
  EXPECT_THROW(DataSet::from_rows({{1, 2}, {3}}), input_error);
}

#pragma once

// Resampling tests of H0: X =st Y against H1: X <st Y, spherical-cap
// confidence sets for the best separating direction, and the Monte Carlo
// estimator of the null covariance function of the projected U-process.
//
// Every null replicate reruns the whole pipeline, including re-estimation
// of the direction, on relabeled (permutation) or resampled (pooled
// bootstrap) data. Replicate b draws from an engine seeded by
// derive_seed(seed, b), so results do not depend on evaluation order.
// p-values are (1 + #{T* >= T}) / (B + 1), or the left-tail analogue for
// the reverse-order test.
//
// When X <=st Y is not known a priori, a rejection by sup_test indicates a
// precedence (Pitman) ordering P(s.X <= s.Y) > 1/2 in some direction rather
// than strict stochastic order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lstord/data.hpp"
#include "lstord/empirical.hpp"
#include "lstord/error.hpp"
#include "lstord/estimator.hpp"
#include "lstord/geometry.hpp"
#include "lstord/rng.hpp"

namespace lstord {

enum class TestMethod { sup, integral_signed, integral_positive, paired_sup, reverse, fixed_direction, roy_direction };
enum class NullScheme { permutation, pooled_bootstrap, sign_flip };
enum class ResampleScheme { full_bootstrap, m_out_of_n };

inline const char* to_string(TestMethod m) {
  switch (m) {
    case TestMethod::sup: return "sup";
    case TestMethod::integral_signed: return "integral_signed";
    case TestMethod::integral_positive: return "integral_positive";
    case TestMethod::paired_sup: return "paired_sup";
    case TestMethod::reverse: return "reverse";
    case TestMethod::fixed_direction: return "fixed_direction";
    case TestMethod::roy_direction: return "roy_direction";
  }
  return "unknown";
}

inline const char* to_string(NullScheme s) {
  switch (s) {
    case NullScheme::permutation: return "permutation";
    case NullScheme::pooled_bootstrap: return "pooled_bootstrap";
    case NullScheme::sign_flip: return "sign_flip";
  }
  return "unknown";
}

inline const char* to_string(ResampleScheme s) {
  return s == ResampleScheme::full_bootstrap ? "full_bootstrap" : "m_out_of_n";
}

inline constexpr std::size_t min_test_replicates = 99;

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  Direction direction;
  double psi_at_direction = 0.0;
  TestMethod method = TestMethod::sup;
  NullScheme scheme = NullScheme::permutation;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;  // first group (or number of pairs)
  std::size_t m = 0;  // second group (equals n for paired data)
  bool degenerate = false;  // e.g. every pair tied

  // Total sample size used in the sqrt(N) scaling.
  std::size_t total() const noexcept { return method == TestMethod::paired_sup ? n : n + m; }
  double lambda() const noexcept { return static_cast<double>(n) / static_cast<double>(n + m); }
};

// Spherical cap {s : center . s >= threshold}.
struct ConfidenceSet {
  Direction center;
  double threshold = -1.0;
  double level = 0.95;
  ResampleScheme scheme = ResampleScheme::full_bootstrap;
  std::optional<std::size_t> subsample_size;
  std::size_t replicates = 0;

  bool contains(const Direction& s) const { return center.dot(s) >= threshold; }
  double radius_degrees() const { return cap_radius_degrees(threshold); }
};

namespace detail {

inline engine_type replicate_engine(std::uint64_t seed, std::uint64_t tag, std::size_t b) {
  return engine_type(derive_seed(derive_seed(seed, tag), b));
}

inline EstimatorConfig replicate_config(const EstimatorConfig& cfg, std::size_t b) {
  EstimatorConfig c = cfg;
  c.seed = derive_seed(derive_seed(cfg.seed, stream::null_fit), b);
  return c;
}

inline void check_replicates(std::size_t replicates) {
  if (replicates < min_test_replicates)
    throw std::invalid_argument("test: at least 99 replicates are required for resolution at alpha = 0.05");
}

inline double scaled(double psi, std::size_t total) {
  return std::sqrt(static_cast<double>(total)) * (psi - 0.5);
}

inline double upper_p(std::size_t exceed, std::size_t replicates) {
  return static_cast<double>(1 + exceed) / static_cast<double>(replicates + 1);
}

// Pooled data relabeled into groups of size n and m.
inline std::pair<DataSet, DataSet> null_split(const DataSet& pooled, std::size_t n, std::size_t m, NullScheme scheme,
                                              engine_type& eng) {
  const std::size_t total = pooled.rows();
  std::vector<std::size_t> idx(n + m);
  if (scheme == NullScheme::permutation) {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::shuffle(idx.begin(), idx.end(), eng);
  } else if (scheme == NullScheme::pooled_bootstrap) {
    std::uniform_int_distribution<std::size_t> pick(0, total - 1);
    for (auto& i : idx) i = pick(eng);
  } else {
    throw std::invalid_argument("null_split: sign flipping applies to paired data only");
  }
  const std::span<const std::size_t> all(idx);
  return {pooled.select(all.first(n)), pooled.select(all.subspan(n, m))};
}

// Draws with replacement (size k) or without replacement (size k <= rows).
inline DataSet resample_rows(const DataSet& d, std::size_t k, bool replace, engine_type& eng) {
  std::vector<std::size_t> idx;
  if (replace) {
    std::uniform_int_distribution<std::size_t> pick(0, d.rows() - 1);
    idx.resize(k);
    for (auto& i : idx) i = pick(eng);
  } else {
    idx.resize(d.rows());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, d.rows() - 1);
      std::swap(idx[i], idx[pick(eng)]);
    }
    idx.resize(k);
  }
  return d.select(idx);
}

// Largest t with at least ceil(level * B) of the values >= t.
inline double upper_level_threshold(std::vector<double> values, double level) {
  std::sort(values.begin(), values.end());
  const std::size_t b = values.size();
  auto keep = static_cast<std::size_t>(std::ceil(level * static_cast<double>(b) - 1e-9));
  keep = std::clamp<std::size_t>(keep, 1, b);
  return std::clamp(values[b - keep], -1.0, 1.0);
}

}  // namespace detail

// Sup test: statistic sqrt(N) (Psi_{n,m}(s_hat) - 1/2).
inline TestResult sup_test(const DataSet& x, const DataSet& y, const EstimatorConfig& cfg, std::size_t replicates,
                           NullScheme scheme = NullScheme::permutation) {
  if (x.cols() != y.cols()) throw input_error("sup_test: x and y differ in dimension");
  detail::check_replicates(replicates);
  const std::size_t n = x.rows(), m = y.rows();
  const DirectionEstimate obs = estimate_general(x, y, cfg);

  TestResult r;
  r.method = TestMethod::sup;
  r.scheme = scheme;
  r.n = n;
  r.m = m;
  r.direction = obs.direction;
  r.psi_at_direction = obs.psi_value;
  r.statistic = detail::scaled(obs.psi_value, n + m);
  r.replicates = replicates;
  r.seed = cfg.seed;

  const DataSet pooled = stack(x, y);
  std::size_t exceed = 0;
  for (std::size_t b = 0; b < replicates; ++b) {
    engine_type eng = detail::replicate_engine(cfg.seed, stream::null_draw, b);
    auto [xs, ys] = detail::null_split(pooled, n, m, scheme, eng);
    const DirectionEstimate e = estimate_general(xs, ys, detail::replicate_config(cfg, b));
    exceed += detail::scaled(e.psi_value, n + m) >= r.statistic;
  }
  r.p_value = detail::upper_p(exceed, replicates);
  return r;
}

// Reverse-order test of H0: X <=st Y against its negation; small values of
// sqrt(N) (Psi_{n,m}(s_min) - 1/2) are evidence against H0. The null is
// generated at the least favorable configuration X =st Y.
inline TestResult reverse_order_test(const DataSet& x, const DataSet& y, const EstimatorConfig& cfg,
                                     std::size_t replicates, NullScheme scheme = NullScheme::permutation) {
  if (x.cols() != y.cols()) throw input_error("reverse_order_test: x and y differ in dimension");
  detail::check_replicates(replicates);
  const std::size_t n = x.rows(), m = y.rows();
  const DirectionEstimate obs = estimate_min(x, y, cfg);

  TestResult r;
  r.method = TestMethod::reverse;
  r.scheme = scheme;
  r.n = n;
  r.m = m;
  r.direction = obs.direction;
  r.psi_at_direction = obs.psi_value;
  r.statistic = detail::scaled(obs.psi_value, n + m);
  r.replicates = replicates;
  r.seed = cfg.seed;

  const DataSet pooled = stack(x, y);
  std::size_t below = 0;
  for (std::size_t b = 0; b < replicates; ++b) {
    engine_type eng = detail::replicate_engine(cfg.seed, stream::null_draw, b);
    auto [xs, ys] = detail::null_split(pooled, n, m, scheme, eng);
    const DirectionEstimate e = estimate_min(xs, ys, detail::replicate_config(cfg, b));
    below += detail::scaled(e.psi_value, n + m) <= r.statistic;
  }
  r.p_value = detail::upper_p(below, replicates);
  return r;
}

// Integrated statistics over k_dirs directions drawn uniformly on the
// positive orthant part of the sphere (the surface-area constant is
// dropped). The same direction set is reused by every null replicate.
// Returns {I, I+}.
inline std::pair<TestResult, TestResult> integral_tests(const DataSet& x, const DataSet& y, std::size_t k_dirs,
                                                        std::uint64_t seed, std::size_t replicates,
                                                        NullScheme scheme = NullScheme::permutation) {
  if (x.cols() != y.cols()) throw input_error("integral_tests: x and y differ in dimension");
  if (k_dirs < 1) throw std::invalid_argument("integral_tests: k_dirs must be >= 1");
  detail::check_replicates(replicates);
  const std::size_t n = x.rows(), m = y.rows(), total = n + m;
  const auto dirs = sample_uniform_directions(x.cols(), k_dirs, derive_seed(seed, stream::quad));

  // Returns {I, I+, index of the best quadrature direction, its psi}.
  struct Stats {
    double signed_mean, positive_mean;
    std::size_t best;
    double best_psi;
  };
  auto stats = [&](const DataSet& a, const DataSet& b) {
    TwoSampleObjective obj(a, b);
    Stats s{0.0, 0.0, 0, -1.0};
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      const double psi = obj.value(dirs[k].coords());
      const double t = detail::scaled(psi, total);
      s.signed_mean += t;
      s.positive_mean += std::max(0.0, t);
      if (psi > s.best_psi) {
        s.best_psi = psi;
        s.best = k;
      }
    }
    s.signed_mean /= static_cast<double>(dirs.size());
    s.positive_mean /= static_cast<double>(dirs.size());
    return s;
  };

  const Stats obs = stats(x, y);
  const DataSet pooled = stack(x, y);
  std::size_t exceed_signed = 0, exceed_positive = 0;
  for (std::size_t b = 0; b < replicates; ++b) {
    engine_type eng = detail::replicate_engine(seed, stream::null_draw, b);
    auto [xs, ys] = detail::null_split(pooled, n, m, scheme, eng);
    const Stats s = stats(xs, ys);
    exceed_signed += s.signed_mean >= obs.signed_mean;
    exceed_positive += s.positive_mean >= obs.positive_mean;
  }

  TestResult r;
  r.scheme = scheme;
  r.n = n;
  r.m = m;
  r.direction = dirs[obs.best];
  r.psi_at_direction = obs.best_psi;
  r.replicates = replicates;
  r.seed = seed;

  TestResult signed_r = r, positive_r = r;
  signed_r.method = TestMethod::integral_signed;
  signed_r.statistic = obs.signed_mean;
  signed_r.p_value = detail::upper_p(exceed_signed, replicates);
  positive_r.method = TestMethod::integral_positive;
  positive_r.statistic = obs.positive_mean;
  positive_r.p_value = detail::upper_p(exceed_positive, replicates);
  return {signed_r, positive_r};
}

// Wilcoxon-Mann-Whitney test along a fixed, known direction (the "true
// maximal direction" comparison test when s is the population maximizer).
inline TestResult fixed_direction_test(const DataSet& x, const DataSet& y, const Direction& s,
                                       std::size_t replicates, std::uint64_t seed,
                                       NullScheme scheme = NullScheme::permutation) {
  if (x.cols() != y.cols()) throw input_error("fixed_direction_test: x and y differ in dimension");
  check_dim(x.cols(), s, "fixed_direction_test");
  detail::check_replicates(replicates);
  const std::size_t n = x.rows(), m = y.rows();
  TestResult r;
  r.method = TestMethod::fixed_direction;
  r.scheme = scheme;
  r.n = n;
  r.m = m;
  r.direction = s;
  r.psi_at_direction = psi_two_sample(x, y, s);
  r.statistic = detail::scaled(r.psi_at_direction, n + m);
  r.replicates = replicates;
  r.seed = seed;

  const DataSet pooled = stack(x, y);
  std::size_t exceed = 0;
  for (std::size_t b = 0; b < replicates; ++b) {
    engine_type eng = detail::replicate_engine(seed, stream::null_draw, b);
    auto [xs, ys] = detail::null_split(pooled, n, m, scheme, eng);
    exceed += detail::scaled(psi_two_sample(xs, ys, s), n + m) >= r.statistic;
  }
  r.p_value = detail::upper_p(exceed, replicates);
  return r;
}

// Test along the nonnegative projection of the plug-in Roy direction
// S^{-1}(ybar - xbar), recomputed inside every replicate. A sample whose
// projection vanishes scores the minimum statistic -sqrt(N)/2. Refuses when
// the pooled covariance is singular (p >= n + m - 2).
inline TestResult roy_direction_test(const DataSet& x, const DataSet& y, std::size_t replicates, std::uint64_t seed,
                                     NullScheme scheme = NullScheme::permutation) {
  if (x.cols() != y.cols()) throw input_error("roy_direction_test: x and y differ in dimension");
  detail::check_replicates(replicates);
  const std::size_t n = x.rows(), m = y.rows(), p = x.cols();
  if (n + m < p + 3) throw refusal_error("roy_direction_test: pooled covariance is singular (p >= n + m - 2)");

  const double floor_stat = detail::scaled(0.0, n + m);
  auto statistic = [&](const DataSet& a, const DataSet& b, std::optional<Direction>* dir) {
    auto d = roy_plugin_direction(a, b);
    if (dir) *dir = d;
    return d ? detail::scaled(psi_two_sample(a, b, *d), n + m) : floor_stat;
  };

  std::optional<Direction> obs_dir;
  TestResult r;
  r.method = TestMethod::roy_direction;
  r.scheme = scheme;
  r.n = n;
  r.m = m;
  r.statistic = statistic(x, y, &obs_dir);
  r.direction = obs_dir ? *obs_dir : Direction::from_weights(std::vector<double>(p, 1.0));
  r.psi_at_direction = obs_dir ? psi_two_sample(x, y, *obs_dir) : 0.0;
  r.degenerate = !obs_dir;
  r.replicates = replicates;
  r.seed = seed;

  const DataSet pooled = stack(x, y);
  std::size_t exceed = 0;
  for (std::size_t b = 0; b < replicates; ++b) {
    engine_type eng = detail::replicate_engine(seed, stream::null_draw, b);
    auto [xs, ys] = detail::null_split(pooled, n, m, scheme, eng);
    exceed += statistic(xs, ys, nullptr) >= r.statistic;
  }
  r.p_value = detail::upper_p(exceed, replicates);
  return r;
}

// Paired sup test; the null flips the sign of each difference Z_i = Y_i - X_i
// independently with probability 1/2 (swap X_i <-> Y_i).
inline TestResult paired_sup_test(const PairedSample& pairs, const EstimatorConfig& cfg, std::size_t replicates) {
  detail::check_replicates(replicates);
  const std::size_t n = pairs.size(), p = pairs.dim();
  const DirectionEstimate obs = estimate_paired(pairs, cfg);

  TestResult r;
  r.method = TestMethod::paired_sup;
  r.scheme = NullScheme::sign_flip;
  r.n = n;
  r.m = n;
  r.direction = obs.direction;
  r.psi_at_direction = obs.psi_value;
  r.statistic = detail::scaled(obs.psi_value, n);
  r.replicates = replicates;
  r.seed = cfg.seed;
  r.degenerate = pairs.x() == pairs.y();

  std::vector<double> xs(n * p), ys(n * p);
  std::size_t exceed = 0;
  for (std::size_t b = 0; b < replicates; ++b) {
    engine_type eng = detail::replicate_engine(cfg.seed, stream::null_draw, b);
    std::bernoulli_distribution flip(0.5);
    for (std::size_t i = 0; i < n; ++i) {
      const bool swap = flip(eng);
      const auto xr = pairs.x().row(i);
      const auto yr = pairs.y().row(i);
      std::copy(swap ? yr.begin() : xr.begin(), swap ? yr.end() : xr.end(), xs.begin() + i * p);
      std::copy(swap ? xr.begin() : yr.begin(), swap ? xr.end() : yr.end(), ys.begin() + i * p);
    }
    const PairedSample flipped(DataSet(n, p, xs), DataSet(n, p, ys));
    const DirectionEstimate e = estimate_paired(flipped, detail::replicate_config(cfg, b));
    exceed += detail::scaled(e.psi_value, n) >= r.statistic;
  }
  r.p_value = detail::upper_p(exceed, replicates);
  return r;
}

// floor(N^(2/3)), corrected in integers since pow(8, 2/3) lands below 4.
// Exact for N < 2^32.
inline std::size_t default_subsample_size(std::size_t total) {
  const std::uint64_t sq = std::uint64_t{total} * total;
  auto cube = [](std::uint64_t k) { return k * k * k; };
  auto k = static_cast<std::uint64_t>(std::floor(std::cbrt(static_cast<double>(total) * static_cast<double>(total))));
  while (k > 0 && cube(k) > sq) --k;
  while (cube(k + 1) <= sq) ++k;
  return static_cast<std::size_t>(k);
}

// Bootstrap confidence cap for the best separating direction. The threshold
// is the empirical (1 - level) quantile of s_hat . s_hat*, so the cap holds
// at least a `level` fraction of the replicate estimates.
inline ConfidenceSet confidence_set(const DataSet& x, const DataSet& y, const EstimatorConfig& cfg, double level,
                                    std::size_t replicates, ResampleScheme scheme = ResampleScheme::full_bootstrap,
                                    std::optional<std::size_t> subsample_size = std::nullopt) {
  if (x.cols() != y.cols()) throw input_error("confidence_set: x and y differ in dimension");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence_set: level must lie in (0, 1)");
  if (replicates < 1) throw std::invalid_argument("confidence_set: replicates must be >= 1");
  const std::size_t n = x.rows(), m = y.rows(), total = n + m;

  std::size_t mx = n, my = m;
  if (scheme == ResampleScheme::m_out_of_n) {
    const std::size_t sub = subsample_size.value_or(default_subsample_size(total));
    if (sub >= total || sub < 2) throw std::invalid_argument("confidence_set: subsample size must lie in [2, N)");
    subsample_size = sub;
    mx = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(double(sub) * double(n) / double(total))), 1,
                                 sub - 1);
    my = sub - mx;
    mx = std::min(mx, n);
    my = std::min(my, m);
  } else {
    subsample_size.reset();
  }

  const DirectionEstimate center = estimate_general(x, y, cfg);
  std::vector<double> inner(replicates);
  for (std::size_t b = 0; b < replicates; ++b) {
    engine_type eng = detail::replicate_engine(cfg.seed, stream::boot_draw, b);
    double value = 1.0;  // degenerate replicates count as s* = s_hat
    for (int attempt = 0; attempt < 10; ++attempt) {
      const bool replace = scheme == ResampleScheme::full_bootstrap;
      DataSet xs = detail::resample_rows(x, mx, replace, eng);
      DataSet ys = detail::resample_rows(y, my, replace, eng);
      if (stack(xs, ys).all_rows_identical()) continue;
      EstimatorConfig c = cfg;
      c.seed = derive_seed(derive_seed(cfg.seed, stream::boot_fit), b);
      value = center.direction.dot(estimate_general(xs, ys, c).direction);
      break;
    }
    inner[b] = value;
  }

  ConfidenceSet cs;
  cs.center = center.direction;
  cs.threshold = detail::upper_level_threshold(std::move(inner), level);
  cs.level = level;
  cs.scheme = scheme;
  cs.subsample_size = subsample_size;
  cs.replicates = replicates;
  return cs;
}

// Paired-sample analogue: pairs are resampled as units. The M-out-of-N
// scheme is the recommended one here because the paired estimator converges
// at the cube-root rate.
inline ConfidenceSet confidence_set(const PairedSample& pairs, const EstimatorConfig& cfg, double level,
                                    std::size_t replicates, ResampleScheme scheme = ResampleScheme::m_out_of_n,
                                    std::optional<std::size_t> subsample_size = std::nullopt) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence_set: level must lie in (0, 1)");
  if (replicates < 1) throw std::invalid_argument("confidence_set: replicates must be >= 1");
  const std::size_t n = pairs.size();
  std::size_t k = n;
  if (scheme == ResampleScheme::m_out_of_n) {
    k = subsample_size.value_or(default_subsample_size(n));
    if (k >= n || k < 2) throw std::invalid_argument("confidence_set: subsample size must lie in [2, N)");
    subsample_size = k;
  } else {
    subsample_size.reset();
  }

  const DirectionEstimate center = estimate_paired(pairs, cfg);
  std::vector<double> inner(replicates);
  std::vector<std::size_t> idx(k);
  for (std::size_t b = 0; b < replicates; ++b) {
    engine_type eng = detail::replicate_engine(cfg.seed, stream::boot_draw, b);
    double value = 1.0;
    for (int attempt = 0; attempt < 10; ++attempt) {
      if (scheme == ResampleScheme::full_bootstrap) {
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (auto& i : idx) i = pick(eng);
      } else {
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), std::size_t{0});
        for (std::size_t i = 0; i < k; ++i) {
          std::uniform_int_distribution<std::size_t> pick(i, n - 1);
          std::swap(all[i], all[pick(eng)]);
        }
        std::copy_n(all.begin(), k, idx.begin());
      }
      const PairedSample sub(pairs.x().select(idx), pairs.y().select(idx));
      if (stack(sub.x(), sub.y()).all_rows_identical()) continue;
      EstimatorConfig c = cfg;
      c.seed = derive_seed(derive_seed(cfg.seed, stream::boot_fit), b);
      value = center.direction.dot(estimate_paired(sub, c).direction);
      break;
    }
    inner[b] = value;
  }

  ConfidenceSet cs;
  cs.center = center.direction;
  cs.threshold = detail::upper_level_threshold(std::move(inner), level);
  cs.level = level;
  cs.scheme = scheme;
  cs.subsample_size = subsample_size;
  cs.replicates = replicates;
  return cs;
}

// Monte Carlo estimate of the null covariance function
//   C(u,v) = (1/l)     P(u.X1 <= u.X2, v.X1 <= v.X3)
//          + (1/(1-l)) P(u.X1 <= u.X2, v.X3 <= v.X2) - 1/(4 l (1-l))
// with X1, X2, X3 drawn i.i.d. (with replacement) from the pooled sample.
inline double null_covariance_estimate(const Direction& u, const Direction& v, const DataSet& pooled, double lambda,
                                       std::size_t reps, std::uint64_t seed) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("null_covariance_estimate: lambda must lie in (0,1)");
  if (pooled.rows() < 3) throw input_error("null_covariance_estimate: need at least 3 pooled observations");
  if (reps < 1) throw std::invalid_argument("null_covariance_estimate: reps must be >= 1");
  check_dim(pooled.cols(), u, "null_covariance_estimate");
  check_dim(pooled.cols(), v, "null_covariance_estimate");

  std::vector<double> pu(pooled.rows()), pv(pooled.rows());
  for (std::size_t i = 0; i < pooled.rows(); ++i) {
    pu[i] = detail::dot(pooled.row(i), u.coords());
    pv[i] = detail::dot(pooled.row(i), v.coords());
  }
  engine_type eng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pooled.rows() - 1);
  std::uint64_t first = 0, second = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    const std::size_t a = pick(eng), b = pick(eng), c = pick(eng);
    const bool ab = pu[a] <= pu[b];
    first += ab && pv[a] <= pv[c];
    second += ab && pv[c] <= pv[b];
  }
  const double p1 = static_cast<double>(first) / static_cast<double>(reps);
  const double p2 = static_cast<double>(second) / static_cast<double>(reps);
  return p1 / lambda + p2 / (1.0 - lambda) - 1.0 / (4.0 * lambda * (1.0 - lambda));
}

}  // namespace lstord

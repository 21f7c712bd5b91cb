#pragma once

// Data generators for the intraclass normal, lognormal and normal-mixture
// designs, and the experiment runners for estimation accuracy, type I
// error / power, and confidence-set coverage.
//
// Run r of a study uses the master seed derive_seed(cfg.seed, run tag, r);
// groups, resampling replicates and multistarts derive their own streams
// from it, so any subset of runs can be reproduced in isolation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lstord/data.hpp"
#include "lstord/error.hpp"
#include "lstord/estimator.hpp"
#include "lstord/geometry.hpp"
#include "lstord/inference.hpp"
#include "lstord/oracle.hpp"
#include "lstord/rng.hpp"

namespace lstord {

enum class Family { mvn, lognormal, mixture };
enum class Group { x, y };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::mvn: return "mvn";
    case Family::lognormal: return "lognormal";
    case Family::mixture: return "mixture";
  }
  return "unknown";
}

struct SimulationConfig {
  std::size_t p = 3;
  std::size_t n = 25;
  std::size_t m = 25;
  std::vector<double> delta;  // empty means the zero vector
  double rho = 0.0;
  Family family = Family::mvn;
  double mix_pi = 0.5;  // weight of the N(0, Sigma) component
  std::size_t runs = 1000;
  std::size_t replicates = 200;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  EstimatorConfig estimator{};
  std::size_t k_dirs = 100;  // quadrature directions of the integral tests
  NullScheme null_scheme = NullScheme::permutation;

  std::vector<double> shift() const { return delta.empty() ? std::vector<double>(p, 0.0) : delta; }

  void validate() const {
    if (p < 1) throw std::invalid_argument("SimulationConfig: p must be >= 1");
    if (n < 1 || m < 1) throw std::invalid_argument("SimulationConfig: n and m must be >= 1");
    if (!delta.empty() && delta.size() != p) throw std::invalid_argument("SimulationConfig: delta must have length p");
    for (double d : delta)
      if (!std::isfinite(d)) throw std::invalid_argument("SimulationConfig: delta must be finite");
    const double lower = p > 1 ? -1.0 / static_cast<double>(p - 1) : -1.0;
    if (!(rho > lower && rho < 1.0))
      throw std::invalid_argument("SimulationConfig: rho outside the positive-definite range (-1/(p-1), 1)");
    if (family == Family::mixture && !(mix_pi > 0.0 && mix_pi <= 1.0))
      throw std::invalid_argument("SimulationConfig: mix_pi must lie in (0, 1]");
    if (runs < 1) throw std::invalid_argument("SimulationConfig: runs must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("SimulationConfig: alpha must lie in (0, 1)");
    estimator.validate();
  }

  std::string summary() const {
    std::ostringstream os;
    os << "family=" << to_string(family) << " p=" << p << " n=" << n << " m=" << m << " rho=" << rho << " delta=";
    const auto d = shift();
    for (std::size_t k = 0; k < d.size(); ++k) os << (k ? ";" : "") << d[k];
    if (family == Family::mixture) os << " pi=" << mix_pi;
    os << " runs=" << runs;
    return os.str();
  }
};

struct ExperimentRow {
  std::string config;
  std::string metric;
  double value = 0.0;
  double monte_carlo_se = 0.0;
  bool applicable = true;
  std::string note;
};

namespace detail {

// Symmetric square root of (1 - rho) I + rho J is a I + c J with
// a = sqrt(1 - rho) and c = (sqrt(1 - rho + rho p) - a) / p.
struct IntraclassRoot {
  double a, c;
};

inline IntraclassRoot intraclass_root(std::size_t p, double rho) {
  const double a = std::sqrt(1.0 - rho);
  const double c = (std::sqrt(1.0 - rho + rho * static_cast<double>(p)) - a) / static_cast<double>(p);
  return {a, c};
}

// Rows x_i = mean + (a I + c J) z_i, z_i standard normal. When `component`
// is given, row i uses mean `shift` only if component[i] is true.
inline DataSet intraclass_normal(std::size_t rows, std::size_t p, double rho, const std::vector<double>& shift,
                                 const std::vector<bool>* component, engine_type& eng) {
  const auto root = intraclass_root(p, rho);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(rows * p), z(p);
  for (std::size_t i = 0; i < rows; ++i) {
    double sum = 0.0;
    for (auto& zk : z) sum += (zk = normal(eng));
    const bool shifted = component ? (*component)[i] : true;
    for (std::size_t k = 0; k < p; ++k) v[i * p + k] = root.a * z[k] + root.c * sum + (shifted ? shift[k] : 0.0);
  }
  return DataSet(rows, p, std::move(v));
}

inline std::uint64_t group_tag(Group g) { return g == Group::x ? stream::group_x : stream::group_y; }

}  // namespace detail

// x rows ~ N(0, Sigma), y rows ~ N(delta, Sigma), Sigma intraclass.
inline DataSet gen_mvn(const SimulationConfig& cfg, Group group) {
  cfg.validate();
  engine_type eng(derive_seed(cfg.seed, detail::group_tag(group)));
  const std::size_t rows = group == Group::x ? cfg.n : cfg.m;
  return detail::intraclass_normal(rows, cfg.p, cfg.rho, group == Group::x ? std::vector<double>(cfg.p, 0.0)
                                                                            : cfg.shift(),
                                   nullptr, eng);
}

// Componentwise exp of gen_mvn.
inline DataSet gen_lognormal(const SimulationConfig& cfg, Group group) {
  const DataSet z = gen_mvn(cfg, group);
  std::vector<double> v(z.values().begin(), z.values().end());
  for (double& e : v) e = std::exp(e);
  return DataSet(z.rows(), z.cols(), std::move(v));
}

// Both groups follow pi N(0, Sigma) + (1 - pi) N(delta, Sigma). The normal
// draws share gen_mvn's stream, so pi = 1 reproduces gen_mvn at mean 0.
inline DataSet gen_mixture(const SimulationConfig& cfg, Group group) {
  cfg.validate();
  const std::size_t rows = group == Group::x ? cfg.n : cfg.m;
  engine_type pick(derive_seed(derive_seed(cfg.seed, detail::group_tag(group)), stream::mixture));
  std::bernoulli_distribution second(1.0 - cfg.mix_pi);
  std::vector<bool> component(rows);
  for (std::size_t i = 0; i < rows; ++i) component[i] = second(pick);
  engine_type eng(derive_seed(cfg.seed, detail::group_tag(group)));
  return detail::intraclass_normal(rows, cfg.p, cfg.rho, cfg.shift(), &component, eng);
}

inline DataSet generate(const SimulationConfig& cfg, Group group) {
  switch (cfg.family) {
    case Family::mvn: return gen_mvn(cfg, group);
    case Family::lognormal: return gen_lognormal(cfg, group);
    case Family::mixture: return gen_mixture(cfg, group);
  }
  throw std::invalid_argument("generate: unknown family");
}

// Config for run r: fresh data seed and estimator seed.
inline SimulationConfig run_config(const SimulationConfig& cfg, std::size_t r) {
  SimulationConfig c = cfg;
  c.seed = derive_seed(derive_seed(cfg.seed, stream::run), r);
  c.estimator.seed = derive_seed(c.seed, stream::starts);
  return c;
}

// Standard error of a rejection rate r / runs; the (r + 1/2) / (runs + 1)
// shrinkage keeps it positive at rates 0 and 1.
inline double rate_se(std::size_t hits, std::size_t runs) {
  const double q = (static_cast<double>(hits) + 0.5) / (static_cast<double>(runs) + 1.0);
  return std::sqrt(q * (1.0 - q) / static_cast<double>(runs));
}

// Standard error of a sample mean, floored at the 1/(2 runs) resolution.
inline double mean_se(const std::vector<double>& values) {
  const double k = static_cast<double>(values.size());
  if (values.size() < 2) return 0.5;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= k;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::max(std::sqrt(ss / (k - 1.0) / k), 0.5 / k);
}

// Roy direction of the mvn design. Refuses when it leaves the positive
// orthant, since the accuracy metrics are then measured against a target the
// estimator cannot reach.
inline Direction true_direction(const SimulationConfig& cfg) {
  const std::vector<double> mu(cfg.p, 0.0);
  const auto roy = roy_direction(mu, cfg.shift(), intraclass_covariance(cfg.p, cfg.rho));
  if (!roy.direction) throw refusal_error("true_direction: Roy direction leaves the positive orthant");
  return *roy.direction;
}

struct EstimationStudy {
  std::vector<ExperimentRow> rows;
  Direction truth;
  std::vector<Direction> estimates;     // one per run
  std::vector<PolarAngles> angles;      // polar angles of each estimate
  std::vector<double> polar_residuals;  // 1 - s_hat . s_max
  std::vector<double> distances;        // ||s_hat - s_max||
};

inline EstimationStudy run_estimation_study(const SimulationConfig& cfg) {
  cfg.validate();
  if (cfg.family != Family::mvn) throw std::invalid_argument("run_estimation_study: requires family mvn");
  EstimationStudy st;
  st.truth = true_direction(cfg);
  const std::size_t p = cfg.p;
  std::vector<double> sq(cfg.runs), mean(p, 0.0);
  for (std::size_t r = 0; r < cfg.runs; ++r) {
    const SimulationConfig c = run_config(cfg, r);
    const DirectionEstimate e = estimate_general(gen_mvn(c, Group::x), gen_mvn(c, Group::y), c.estimator);
    const double d = e.direction.distance(st.truth);
    sq[r] = d * d;
    for (std::size_t k = 0; k < p; ++k) mean[k] += e.direction[k];
    st.distances.push_back(d);
    st.polar_residuals.push_back(1.0 - e.direction.dot(st.truth));
    st.angles.push_back(direction_to_polar(e.direction));
    st.estimates.push_back(e.direction);
  }
  for (double& v : mean) v /= static_cast<double>(cfg.runs);

  double mse = 0.0, bias2 = 0.0, spread = 0.0, resid = 0.0;
  for (double v : sq) mse += v;
  mse /= static_cast<double>(cfg.runs);
  for (std::size_t k = 0; k < p; ++k) bias2 += (mean[k] - st.truth[k]) * (mean[k] - st.truth[k]);
  for (const auto& e : st.estimates)
    for (std::size_t k = 0; k < p; ++k) spread += (e[k] - mean[k]) * (e[k] - mean[k]);
  for (double v : st.polar_residuals) resid += v;
  resid /= static_cast<double>(cfg.runs);
  const double k = static_cast<double>(cfg.runs);
  const double bias_se =
      std::max(cfg.runs > 1 ? std::sqrt(spread / (k - 1.0) / k) : 0.5, 0.5 / k);

  const std::string s = cfg.summary();
  st.rows.push_back({s, "mse", mse, mean_se(sq), true, {}});
  st.rows.push_back({s, "bias", std::sqrt(bias2), bias_se, true, {}});
  st.rows.push_back({s, "polar_residual", resid, mean_se(st.polar_residuals), true, {}});
  return st;
}

enum class StudyTest { sup, integral, integral_plus, tmd, rmd };

inline const char* to_string(StudyTest t) {
  switch (t) {
    case StudyTest::sup: return "sup";
    case StudyTest::integral: return "integral";
    case StudyTest::integral_plus: return "integral_plus";
    case StudyTest::tmd: return "tmd";
    case StudyTest::rmd: return "rmd";
  }
  return "unknown";
}

struct TestStudy {
  std::vector<ExperimentRow> rows;
  // Per-run p-values, in the order of `tests`; NaN where not applicable.
  std::vector<std::vector<double>> p_values;
};

// Rejection frequencies at cfg.alpha. The metric is "type1_<test>" when
// delta is zero and "power_<test>" otherwise. TMD uses the true maximal
// direction (equal weights when delta = 0); RMD is reported inapplicable
// when the pooled covariance is singular.
inline TestStudy run_test_study(const SimulationConfig& cfg, const std::vector<StudyTest>& tests) {
  cfg.validate();
  if (cfg.replicates < min_test_replicates) throw std::invalid_argument("run_test_study: replicates must be >= 99");
  const auto shift = cfg.shift();
  const bool null_design =
      cfg.family == Family::mixture || std::all_of(shift.begin(), shift.end(), [](double d) { return d == 0.0; });

  std::optional<Direction> tmd_dir;
  std::string tmd_note;
  for (auto t : tests)
    if (t == StudyTest::tmd) {
      if (null_design) {
        tmd_dir = Direction::from_weights(std::vector<double>(cfg.p, 1.0));
      } else if (cfg.family == Family::mvn) {
        const std::vector<double> mu(cfg.p, 0.0);
        tmd_dir = roy_direction(mu, shift, intraclass_covariance(cfg.p, cfg.rho)).orthant_maximizer;
      } else {
        // exp does not preserve linear projections, so no closed form.
        tmd_note = "true maximal direction unknown for this family";
      }
    }
  const bool rmd_ok = cfg.n + cfg.m >= cfg.p + 3;

  TestStudy st;
  st.p_values.assign(tests.size(), std::vector<double>(cfg.runs, std::nan("")));
  for (std::size_t r = 0; r < cfg.runs; ++r) {
    const SimulationConfig c = run_config(cfg, r);
    const DataSet x = generate(c, Group::x), y = generate(c, Group::y);
    std::optional<std::pair<TestResult, TestResult>> integral;
    for (std::size_t t = 0; t < tests.size(); ++t) {
      double pv = std::nan("");
      switch (tests[t]) {
        case StudyTest::sup:
          pv = sup_test(x, y, c.estimator, cfg.replicates, cfg.null_scheme).p_value;
          break;
        case StudyTest::integral:
        case StudyTest::integral_plus:
          if (!integral) integral = integral_tests(x, y, cfg.k_dirs, c.seed, cfg.replicates, cfg.null_scheme);
          pv = tests[t] == StudyTest::integral ? integral->first.p_value : integral->second.p_value;
          break;
        case StudyTest::tmd:
          if (tmd_dir) pv = fixed_direction_test(x, y, *tmd_dir, cfg.replicates, c.seed, cfg.null_scheme).p_value;
          break;
        case StudyTest::rmd:
          if (rmd_ok) pv = roy_direction_test(x, y, cfg.replicates, c.seed, cfg.null_scheme).p_value;
          break;
      }
      st.p_values[t][r] = pv;
    }
  }

  const std::string s = cfg.summary();
  for (std::size_t t = 0; t < tests.size(); ++t) {
    ExperimentRow row;
    row.config = s;
    row.metric = std::string(null_design ? "type1_" : "power_") + to_string(tests[t]);
    const auto& pv = st.p_values[t];
    if (std::isnan(pv.front())) {
      row.applicable = false;
      row.value = std::nan("");
      row.monte_carlo_se = std::nan("");
      row.note = tests[t] == StudyTest::rmd ? "pooled covariance singular (p >= n + m - 2)" : tmd_note;
    } else {
      std::size_t hits = 0;
      for (double v : pv) hits += v <= cfg.alpha;
      row.value = static_cast<double>(hits) / static_cast<double>(cfg.runs);
      row.monte_carlo_se = rate_se(hits, cfg.runs);
    }
    st.rows.push_back(std::move(row));
  }
  return st;
}

struct CoverageStudy {
  std::vector<ExperimentRow> rows;
  std::vector<double> thresholds;  // per run
  std::vector<bool> covered;       // per run
};

// Fraction of runs whose confidence cap contains the true s_max.
inline CoverageStudy run_coverage_study(const SimulationConfig& cfg, double level,
                                        ResampleScheme scheme = ResampleScheme::full_bootstrap,
                                        std::optional<std::size_t> subsample_size = std::nullopt) {
  cfg.validate();
  if (cfg.family != Family::mvn) throw std::invalid_argument("run_coverage_study: requires family mvn");
  const Direction truth = true_direction(cfg);
  CoverageStudy st;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < cfg.runs; ++r) {
    const SimulationConfig c = run_config(cfg, r);
    const ConfidenceSet cs = confidence_set(gen_mvn(c, Group::x), gen_mvn(c, Group::y), c.estimator, level,
                                            cfg.replicates, scheme, subsample_size);
    const bool in = cs.contains(truth);
    hits += in;
    st.thresholds.push_back(cs.threshold);
    st.covered.push_back(in);
  }
  const std::string s = cfg.summary();
  double mean_threshold = 0.0;
  for (double t : st.thresholds) mean_threshold += t;
  mean_threshold /= static_cast<double>(cfg.runs);
  const double rate = static_cast<double>(hits) / static_cast<double>(cfg.runs);
  st.rows.push_back({s, "coverage", rate, rate_se(hits, cfg.runs), true, {}});
  st.rows.push_back({s, "mean_threshold", mean_threshold, mean_se(st.thresholds), true, {}});
  return st;
}

}  // namespace lstord

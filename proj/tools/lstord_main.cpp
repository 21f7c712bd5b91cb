// lstord: directional inference for the linear stochastic order.
//
//   lstord estimate  --x X.csv --y Y.csv
//   lstord test      --data D.csv --group arm --method sup --replicates 999
//   lstord ci        --x X.csv --y Y.csv --level 0.95 --scheme boot
//   lstord simulate  --study test --p 3 --delta 0.5,0.5,0.5 --runs 1000
//   lstord verify    example21
//
// Exit status: 0 success, 1 usage, 2 input error, 3 numerical refusal.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lstord/lstord.hpp"
#include "report.hpp"

namespace lstord::cli {
namespace {

enum Exit { ok = 0, usage = 1, bad_input = 2, refused = 3 };

struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Option values of one subcommand, kept as canonical text so the manifest
// can store and restore them verbatim.
using Values = std::map<std::string, std::string>;

const std::vector<std::string> input_keys = {"x", "y", "data"};

std::size_t as_count(const Values& v, const std::string& key) {
  const std::string& s = v.at(key);
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw usage_error("--" + key + ": expected a nonnegative integer, got \"" + s + "\"");
  return out;
}

double as_real(const Values& v, const std::string& key) {
  const std::string& s = v.at(key);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(out))
    throw usage_error("--" + key + ": expected a number, got \"" + s + "\"");
  return out;
}

bool as_flag(const Values& v, const std::string& key) { return v.at(key) == "true"; }

std::vector<double> as_reals(const Values& v, const std::string& key) {
  std::vector<double> out;
  const std::string& s = v.at(key);
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double d = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), d);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size() || !std::isfinite(d))
      throw usage_error("--" + key + ": bad number \"" + item + "\"");
    out.push_back(d);
  }
  return out;
}

std::vector<std::string> as_list(const Values& v, const std::string& key) {
  std::vector<std::string> out;
  std::stringstream ss(v.at(key));
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

Json to_json(std::span<const double> v) { return Json(std::vector<double>(v.begin(), v.end())); }

struct Invocation {
  std::string subcommand;
  Values values;
  std::uint64_t seed = 0;
  std::string format = "text";
};

RunManifest make_manifest(const Invocation& inv) {
  RunManifest m;
  m.subcommand = inv.subcommand;
  m.seed = inv.seed;
  m.version = version;
  for (const auto& [k, v] : inv.values) {
    const bool is_input = std::find(input_keys.begin(), input_keys.end(), k) != input_keys.end();
    if (is_input) {
      if (!v.empty()) m.inputs[k] = v;
    } else {
      m.config[k] = v;
    }
  }
  m.config["format"] = inv.format;
  return m;
}

void echo_config(Report& r, const Invocation& inv) {
  const RunManifest m = make_manifest(inv);
  r.set("tool", "lstord");
  r.set("version", version);
  r.set("subcommand", inv.subcommand);
  r.set("config_hash", hex64(fnv1a(m.serialize())));
  r.set("seed", inv.seed);
  for (const auto& [k, v] : m.inputs) r.set("input." + k, v);
  for (const auto& [k, v] : m.config) r.set("config." + k, v);
}

EstimatorConfig estimator_config(const Values& v, std::uint64_t seed) {
  EstimatorConfig c;
  c.n_starts = as_count(v, "starts");
  c.force_simplex = as_flag(v, "force-simplex");
  c.seed = seed;
  c.validate();
  return c;
}

struct Samples {
  std::optional<DataSet> x, y;
  std::optional<PairedSample> pairs;
  std::string x_label = "x", y_label = "y";
};

Samples load_samples(const Values& v) {
  Samples s;
  const bool header = as_flag(v, "header");
  const bool have_files = !v.at("x").empty() || !v.at("y").empty();
  const bool have_data = !v.at("data").empty();
  if (have_files == have_data) throw usage_error("give either --x FILE --y FILE or --data FILE");
  if (have_files && (v.at("x").empty() || v.at("y").empty())) throw usage_error("--x and --y must be given together");
  if (as_flag(v, "paired")) {
    if (have_files) s.pairs = parse_paired_files(v.at("x"), v.at("y"), header);
    else if (!v.at("group").empty()) throw usage_error("--paired with --data takes a 2p-column file, not --group");
    else s.pairs = parse_paired_single(read_csv(v.at("data"), header));
    return s;
  }
  if (have_files) {
    auto [x, y] = parse_two_files(v.at("x"), v.at("y"), header);
    s.x = std::move(x);
    s.y = std::move(y);
  } else {
    if (v.at("group").empty()) throw usage_error("--data requires --group COL (or --paired)");
    std::optional<std::string> xl;
    if (!v.at("x-label").empty()) xl = v.at("x-label");
    auto g = parse_grouped(read_csv(v.at("data"), header), v.at("group"), xl);
    s.x = std::move(g.x);
    s.y = std::move(g.y);
    s.x_label = g.x_label;
    s.y_label = g.y_label;
  }
  return s;
}

void report_sizes(Report& r, const Samples& s) {
  if (s.pairs) {
    r.set("n_pairs", s.pairs->size());
    r.set("p", s.pairs->dim());
  } else {
    r.set("x_label", s.x_label);
    r.set("y_label", s.y_label);
    r.set("n", s.x->rows());
    r.set("m", s.y->rows());
    r.set("p", s.x->cols());
  }
}

void report_direction(Report& r, const std::string& prefix, const Direction& d) {
  r.set(prefix, to_json(d.coords()));
  r.set(prefix + "_polar_angles", to_json(direction_to_polar(d).values()));
}

void cmd_estimate(const Invocation& inv, Report& r) {
  const Samples s = load_samples(inv.values);
  const EstimatorConfig cfg = estimator_config(inv.values, inv.seed);
  report_sizes(r, s);
  const DirectionEstimate e = s.pairs ? estimate_paired(*s.pairs, cfg) : estimate_general(*s.x, *s.y, cfg);
  r.set("method", to_string(e.method));
  report_direction(r, "direction", e.direction);
  r.set("psi", e.psi_value);
  r.set("count", e.count);
  r.set("pairs", e.pairs);
  if (e.maximizing_arc) {
    r.set("arc_lo", e.maximizing_arc->lo);
    r.set("arc_hi", e.maximizing_arc->hi);
  }
}

NullScheme null_scheme(const std::string& s) {
  if (s == "perm") return NullScheme::permutation;
  if (s == "boot") return NullScheme::pooled_bootstrap;
  throw usage_error("--scheme " + s + " is not a null scheme for tests (use perm or boot)");
}

ResampleScheme resample_scheme(const std::string& s) {
  if (s == "boot") return ResampleScheme::full_bootstrap;
  if (s == "m-out-of-n") return ResampleScheme::m_out_of_n;
  throw usage_error("--scheme " + s + " is not a confidence-set scheme (use boot or m-out-of-n)");
}

void report_test(Report& r, const TestResult& t, double alpha) {
  r.set("test", to_string(t.method));
  r.set("null_scheme", to_string(t.scheme));
  r.set("statistic", t.statistic);
  r.set("p_value", t.p_value);
  r.set("alpha", alpha);
  r.set("replicates", t.replicates);
  report_direction(r, "direction", t.direction);
  r.set("psi_at_direction", t.psi_at_direction);
  r.set("total_n", t.total());
  if (t.method != TestMethod::paired_sup) r.set("lambda", t.lambda());
  r.set("degenerate", t.degenerate);
}

void cmd_test(const Invocation& inv, Report& r) {
  const Values& v = inv.values;
  const Samples s = load_samples(v);
  const EstimatorConfig cfg = estimator_config(v, inv.seed);
  const std::size_t b = as_count(v, "replicates");
  const double alpha = as_real(v, "alpha");
  const std::string method = v.at("method");
  report_sizes(r, s);
  if (s.pairs) {
    if (method != "sup") throw usage_error("--paired supports --method sup only");
    report_test(r, paired_sup_test(*s.pairs, cfg, b), alpha);
    return;
  }
  const NullScheme scheme = null_scheme(v.at("scheme"));
  if (method == "sup") {
    report_test(r, sup_test(*s.x, *s.y, cfg, b, scheme), alpha);
  } else if (method == "reverse") {
    report_test(r, reverse_order_test(*s.x, *s.y, cfg, b, scheme), alpha);
  } else {
    const auto [signed_r, positive_r] = integral_tests(*s.x, *s.y, as_count(v, "k-dirs"), inv.seed, b, scheme);
    report_test(r, method == "integral" ? signed_r : positive_r, alpha);
  }
}

void cmd_ci(const Invocation& inv, Report& r) {
  const Values& v = inv.values;
  const Samples s = load_samples(v);
  const EstimatorConfig cfg = estimator_config(v, inv.seed);
  const ResampleScheme scheme = resample_scheme(v.at("scheme"));
  std::optional<std::size_t> sub;
  if (as_count(v, "subsample") > 0) sub = as_count(v, "subsample");
  report_sizes(r, s);
  const double level = as_real(v, "level");
  const std::size_t b = as_count(v, "replicates");
  const ConfidenceSet cs =
      s.pairs ? confidence_set(*s.pairs, cfg, level, b, scheme, sub) : confidence_set(*s.x, *s.y, cfg, level, b, scheme, sub);
  report_direction(r, "center", cs.center);
  r.set("threshold", cs.threshold);
  r.set("radius_degrees", cs.radius_degrees());
  r.set("level", cs.level);
  r.set("resample_scheme", to_string(cs.scheme));
  if (cs.subsample_size) r.set("subsample_size", *cs.subsample_size);
  r.set("replicates", cs.replicates);
}

Family family_of(const std::string& s) {
  if (s == "mvn") return Family::mvn;
  if (s == "lognormal") return Family::lognormal;
  if (s == "mixture") return Family::mixture;
  throw usage_error("--family must be mvn, lognormal or mixture");
}

StudyTest study_test_of(const std::string& s) {
  if (s == "sup") return StudyTest::sup;
  if (s == "integral") return StudyTest::integral;
  if (s == "integral+") return StudyTest::integral_plus;
  if (s == "tmd") return StudyTest::tmd;
  if (s == "rmd") return StudyTest::rmd;
  throw usage_error("--tests: unknown test \"" + s + "\"");
}

void rows_table(Report& r, const std::string& hash, const std::vector<ExperimentRow>& rows) {
  std::vector<std::vector<Json>> cells;
  for (const auto& row : rows)
    cells.push_back({hash, row.config, row.metric, row.value, row.monte_carlo_se, row.applicable, row.note});
  r.add_table("rows", {"config_hash", "config", "metric", "value", "monte_carlo_se", "applicable", "note"},
              std::move(cells));
}

void cmd_simulate(const Invocation& inv, Report& r) {
  const Values& v = inv.values;
  SimulationConfig cfg;
  cfg.p = as_count(v, "p");
  cfg.n = as_count(v, "n");
  cfg.m = v.at("m").empty() ? cfg.n : as_count(v, "m");
  cfg.delta = as_reals(v, "delta");
  cfg.rho = as_real(v, "rho");
  cfg.family = family_of(v.at("family"));
  cfg.mix_pi = as_real(v, "pi");
  cfg.runs = as_count(v, "runs");
  cfg.replicates = as_count(v, "replicates");
  cfg.alpha = as_real(v, "alpha");
  cfg.seed = inv.seed;
  cfg.estimator = estimator_config(v, inv.seed);
  cfg.k_dirs = as_count(v, "k-dirs");
  cfg.null_scheme = NullScheme::permutation;
  const std::string study = v.at("study");
  const std::string hash = hex64(fnv1a(make_manifest(inv).serialize()));

  if (study == "estimation") {
    const EstimationStudy st = run_estimation_study(cfg);
    report_direction(r, "true_direction", st.truth);
    rows_table(r, hash, st.rows);
    if (!v.at("draws").empty()) {
      std::ofstream out(v.at("draws"));
      if (!out) throw input_error("cannot write " + v.at("draws"));
      out << "run";
      for (std::size_t k = 0; k + 1 < cfg.p; ++k) out << ",angle" << k + 1;
      for (std::size_t k = 0; k < cfg.p; ++k) out << ",s" << k + 1;
      out << ",polar_residual,distance\n";
      for (std::size_t i = 0; i < st.estimates.size(); ++i) {
        out << i;
        for (double a : st.angles[i].values()) out << "," << format_double(a);
        for (double c : st.estimates[i].coords()) out << "," << format_double(c);
        out << "," << format_double(st.polar_residuals[i]) << "," << format_double(st.distances[i]) << "\n";
      }
      r.set("draws_file", v.at("draws"));
    }
  } else if (study == "test") {
    std::vector<StudyTest> tests;
    for (const auto& t : as_list(v, "tests")) tests.push_back(study_test_of(t));
    if (tests.empty()) throw usage_error("--tests is empty");
    cfg.null_scheme = null_scheme(v.at("scheme") == "boot" ? "boot" : "perm");
    rows_table(r, hash, run_test_study(cfg, tests).rows);
  } else if (study == "coverage") {
    std::optional<std::size_t> sub;
    if (as_count(v, "subsample") > 0) sub = as_count(v, "subsample");
    const ResampleScheme scheme = resample_scheme(v.at("scheme") == "perm" ? "boot" : v.at("scheme"));
    const CoverageStudy st = run_coverage_study(cfg, as_real(v, "level"), scheme, sub);
    report_direction(r, "true_direction", true_direction(cfg));
    rows_table(r, hash, st.rows);
  } else {
    throw usage_error("--study must be estimation, test or coverage");
  }
}

Json points_json(const std::vector<Point>& pts) {
  Json a = Json::array();
  for (const auto& x : pts) {
    std::string s = "(";
    for (std::size_t k = 0; k < x.size(); ++k) s += (k ? " " : "") + format_double(x[k]);
    a.push_back(s + ")");
  }
  return a;
}

void cmd_verify(const Invocation& inv, Report& r) {
  const Values& v = inv.values;
  const std::string target = v.at("target");
  r.set("target", target);
  if (target == "upper-sets") {
    const std::size_t p = as_count(v, "p");
    const auto sets = enumerate_upper_sets(p);
    bool closed = true;
    for (const auto& u : sets) closed = closed && u.is_upward_closed();
    const UpperSetCount c = count_upper_sets(p);
    r.set("p", p);
    r.set("upper_sets_raw", c.raw);
    r.set("upper_sets_nontrivial", c.nontrivial);
    r.set("all_upward_closed", closed);
  } else if (target == "example21") {
    const auto P = DiscreteDistribution::uniform({{1, 1}, {0, 1}, {1, 0}});
    const auto Q = DiscreteDistribution::uniform({{0.75, 0.75}, {1, 2}, {2, 1}});
    const std::size_t grid = as_count(v, "grid");
    const LinearCheck lin = check_linear_st_grid(P, Q, grid);
    const MultivariateCheck mv = check_multivariate_st(P, Q);
    r.set("grid_size", grid);
    r.set("linear_order", lin.status());
    r.set("multivariate_order", mv.ordered ? "ordered" : "violated");
    if (mv.witness) {
      r.set("witness_generators", points_json(mv.witness->generators()));
      r.set("witness_P", mv.p_mass);
      r.set("witness_Q", mv.q_mass);
    }
  } else if (target == "mvb") {
    const EquivalenceReport e = check_mvb_equivalence(as_count(v, "p"), as_count(v, "trials"), inv.seed, as_count(v, "grid"));
    r.set("p", e.p);
    r.set("trials", e.trials);
    r.set("grid_size", e.grid_size);
    r.set("multivariate_ordered", e.multivariate_ordered);
    r.set("grid_ordered", e.grid_ordered);
    r.set("counterexamples", e.counterexamples);
    r.set("implication_failures", e.implication_failures);
    if (e.p == 4 && e.counterexamples == 0) r.set("search", "failed: no counterexample found (search is randomized)");
    if (e.example_p) {
      r.set("example_P_support", points_json(e.example_p->support()));
      r.set("example_P_probs", e.example_p->probs());
      r.set("example_Q_support", points_json(e.example_q->support()));
      r.set("example_Q_probs", e.example_q->probs());
      r.set("example_witness_generators", points_json(e.example_witness->generators()));
    }
  } else if (target == "roy") {
    const std::size_t p = as_count(v, "p");
    std::vector<double> delta = as_reals(v, "delta");
    if (delta.empty()) delta.assign(p, 1.0);
    if (delta.size() != p) throw usage_error("--delta must have p entries");
    const std::vector<double> mu(p, 0.0);
    const RoyDirection roy = roy_direction(mu, delta, intraclass_covariance(p, as_real(v, "rho")));
    r.set("weights", roy.weights);
    r.set("in_positive_orthant", roy.in_positive_orthant());
    r.set("orthant_maximizer", std::vector<double>(roy.orthant_maximizer.coords().begin(), roy.orthant_maximizer.coords().end()));
    r.set("residual", roy.residual);
  } else {
    throw usage_error("verify target must be upper-sets, example21, mvb or roy");
  }
}

struct Spec {
  std::string name;
  std::string help;
  Values defaults;
  std::vector<std::string> flags;  // boolean options
  std::function<void(const Invocation&, Report&)> run;
};

std::vector<Spec> subcommands() {
  const Values data = {{"x", ""}, {"y", ""}, {"data", ""}, {"group", ""}, {"x-label", ""},
                       {"header", "false"}, {"paired", "false"}, {"starts", "20"}, {"force-simplex", "false"}};
  auto with = [&](Values extra) {
    Values v = data;
    v.insert(extra.begin(), extra.end());
    return v;
  };
  const std::vector<std::string> data_flags = {"header", "paired", "force-simplex"};
  return {
      {"estimate", "Estimate the best separating direction", with({}), data_flags, cmd_estimate},
      {"test", "Test equality against stochastic ordering",
       with({{"method", "sup"}, {"replicates", "999"}, {"alpha", "0.05"}, {"scheme", "perm"}, {"k-dirs", "100"}}),
       data_flags, cmd_test},
      {"ci", "Spherical-cap confidence set for the best separating direction",
       with({{"level", "0.95"}, {"replicates", "999"}, {"scheme", "boot"}, {"subsample", "0"}}), data_flags, cmd_ci},
      {"simulate", "Run a simulation study",
       {{"study", "test"}, {"family", "mvn"}, {"p", "3"}, {"n", "25"}, {"m", ""}, {"delta", ""}, {"rho", "0"},
        {"pi", "0.5"}, {"runs", "100"}, {"replicates", "200"}, {"alpha", "0.05"}, {"tests", "sup"},
        {"level", "0.95"}, {"scheme", "perm"}, {"subsample", "0"}, {"k-dirs", "100"}, {"starts", "20"},
        {"force-simplex", "false"}, {"draws", ""}},
       {"force-simplex"}, cmd_simulate},
      {"verify", "Check the discrete-order oracles",
       {{"target", ""}, {"p", "4"}, {"trials", "200"}, {"grid", "1000"}, {"delta", ""}, {"rho", "0"}}, {},
       cmd_verify},
  };
}

const std::map<std::string, std::string> option_help = {
    {"x", "CSV file of the first sample"},
    {"y", "CSV file of the second sample"},
    {"data", "CSV file with a group column (or 2p columns with --paired)"},
    {"group", "group column: header name or 1-based index"},
    {"x-label", "group label of the first sample (default: lexicographically first)"},
    {"header", "input files start with a header row"},
    {"paired", "observations are dependent pairs"},
    {"starts", "simplex starting points"},
    {"force-simplex", "use the simplex search even when p = 2"},
    {"method", "sup, integral, integral+ or reverse"},
    {"replicates", "resampling replicates B"},
    {"alpha", "nominal level (reported, not enforced)"},
    {"scheme", "perm, boot or m-out-of-n"},
    {"k-dirs", "quadrature directions of the integral tests"},
    {"level", "confidence level"},
    {"subsample", "M for the m-out-of-n scheme (0: floor(N^(2/3)))"},
    {"study", "estimation, test or coverage"},
    {"family", "mvn, lognormal or mixture"},
    {"p", "dimension"},
    {"n", "first sample size"},
    {"m", "second sample size (default: n)"},
    {"delta", "comma-separated shift vector"},
    {"rho", "intraclass correlation"},
    {"pi", "mixture weight of N(0, Sigma)"},
    {"runs", "simulation runs"},
    {"tests", "comma-separated: sup, integral, integral+, tmd, rmd"},
    {"draws", "write per-run estimates to this CSV file"},
    {"trials", "random pairs for verify mvb"},
    {"grid", "direction grid size"},
};

const std::map<std::string, std::vector<std::string>> choices = {
    {"method", {"sup", "integral", "integral+", "reverse"}},
    {"scheme", {"perm", "boot", "m-out-of-n"}},
    {"study", {"estimation", "test", "coverage"}},
    {"family", {"mvn", "lognormal", "mixture"}},
};

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<Spec> specs = subcommands();

  // A manifest supplies the subcommand and every option; flags given on the
  // command line override it.
  std::optional<RunManifest> manifest;
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--manifest") manifest = RunManifest::load(args[i + 1]);
  std::uint64_t seed = 0;
  std::string format = "text", out_path, save_path, manifest_path;
  if (manifest) {
    seed = manifest->seed;
    if (manifest->config.count("format")) format = manifest->config.at("format");
    bool named = false;
    for (const auto& a : args)
      for (const auto& s : specs) named = named || a == s.name;
    if (!named) args.insert(args.begin(), manifest->subcommand);
    for (auto& s : specs) {
      if (s.name != manifest->subcommand) continue;
      for (const auto& [k, v] : manifest->config)
        if (s.defaults.count(k)) s.defaults[k] = v;
        else if (k != "format") throw input_error("manifest: option \"" + k + "\" does not apply to " + s.name);
      for (const auto& [k, v] : manifest->inputs)
        if (s.defaults.count(k)) s.defaults[k] = v;
    }
  }

  CLI::App app{"Directional inference for the linear stochastic order", "lstord"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version));
  std::map<std::string, Values> values;
  for (auto& s : specs) {
    values[s.name] = s.defaults;
    auto* sub = app.add_subcommand(s.name, s.help);
    Values& vals = values[s.name];
    for (auto& [key, val] : vals) {
      const std::string help = option_help.count(key) ? option_help.at(key) : key;
      if (std::find(s.flags.begin(), s.flags.end(), key) != s.flags.end()) {
        const std::string k = key;
        sub->add_flag_callback("--" + key, [&vals, k] { vals[k] = "true"; }, help);
      } else if (key == "target") {
        sub->add_option("target", val, "upper-sets, example21, mvb or roy")
            ->check(CLI::IsMember({"upper-sets", "example21", "mvb", "roy"}));
      } else {
        auto* opt = sub->add_option("--" + key, val, help);
        if (choices.count(key)) opt->check(CLI::IsMember(choices.at(key)));
      }
    }
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--out", out_path, "write the report to FILE instead of stdout");
    sub->add_option("--format", format, "text or machine")->check(CLI::IsMember({"text", "machine"}));
    sub->add_option("--save-manifest", save_path, "write the run manifest to FILE");
    sub->add_option("--manifest", manifest_path, "rerun the manifest in FILE");
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  const Spec* chosen = nullptr;
  for (const auto& s : specs)
    if (app.got_subcommand(s.name)) chosen = &s;
  if (manifest && chosen->name != manifest->subcommand)
    throw usage_error("manifest is for \"" + manifest->subcommand + "\", not \"" + chosen->name + "\"");

  Invocation inv;
  inv.subcommand = chosen->name;
  inv.values = values[chosen->name];
  inv.seed = seed;
  inv.format = format;

  if (!save_path.empty()) {
    std::ofstream ms(save_path);
    if (!ms) throw input_error("cannot write " + save_path);
    ms << make_manifest(inv).serialize();
  }

  Report report;
  echo_config(report, inv);
  chosen->run(inv, report);

  std::ostringstream os;
  if (format == "machine") report.write_machine(os);
  else report.write_text(os);
  if (out_path.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(out_path);
    if (!f) throw input_error("cannot write " + out_path);
    f << os.str();
  }
  return ok;
}

}  // namespace
}  // namespace lstord::cli

int main(int argc, char** argv) {
  using namespace lstord::cli;
  try {
    return run(argc, argv);
  } catch (const usage_error& e) {
    std::cerr << "lstord: " << e.what() << "\n";
    return usage;
  } catch (const lstord::input_error& e) {
    std::cerr << "lstord: input error: " << e.what() << "\n";
    return bad_input;
  } catch (const lstord::refusal_error& e) {
    std::cerr << "lstord: refused: " << e.what() << "\n";
    return refused;
  } catch (const std::invalid_argument& e) {
    std::cerr << "lstord: " << e.what() << "\n";
    return usage;
  } catch (const std::exception& e) {
    std::cerr << "lstord: error: " << e.what() << "\n";
    return refused;
  }
}

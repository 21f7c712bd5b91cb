#pragma once

// Estimation of the best separating direction: the maximizer (or, for the
// reverse-order test, the minimizer) of the empirical objective over the
// positive part of the unit sphere.
//
// p = 2 is solved exactly by sweeping the quarter circle. Every difference
// Z = Y - X contributes an indicator that, as a function of the angle, is
// constant (Z in the closed first or open third quadrant) or an arc with
// one breakpoint. The objective is piecewise constant between breakpoints,
// so evaluating the count at every breakpoint and on every open arc between
// consecutive breakpoints finds the global optimum.
//
// General p uses a multistart Nelder-Mead search over the angle box.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "lstord/data.hpp"
#include "lstord/empirical.hpp"
#include "lstord/error.hpp"
#include "lstord/geometry.hpp"
#include "lstord/nelder_mead.hpp"
#include "lstord/rng.hpp"

namespace lstord {

struct EstimatorConfig {
  std::size_t n_starts = 20;
  std::size_t max_iters = 0;  // 0 selects 500 * p
  double simplex_tol = 1e-8;
  double initial_step = 0.25;  // radians, per angle
  std::uint64_t seed = 0;
  bool force_simplex = false;  // use the simplex search even when p = 2
  std::size_t restarts = 0;    // extra simplex rounds per start while the count improves

  std::size_t iterations_for(std::size_t p) const { return max_iters ? max_iters : 500 * p; }

  void validate() const {
    if (n_starts < 1) throw std::invalid_argument("EstimatorConfig: n_starts must be >= 1");
    if (!(simplex_tol > 0.0)) throw std::invalid_argument("EstimatorConfig: simplex_tol must be > 0");
    if (!(initial_step > 0.0)) throw std::invalid_argument("EstimatorConfig: initial_step must be > 0");
  }
};

enum class EstimateMethod { exact_p2, simplex };

inline const char* to_string(EstimateMethod m) { return m == EstimateMethod::exact_p2 ? "exact_p2" : "simplex"; }

// Closed arc of angles [lo, hi] on the quarter circle.
struct Arc {
  double lo = 0.0;
  double hi = 0.0;
  double width() const noexcept { return hi - lo; }
  double midpoint() const noexcept { return lo + 0.5 * (hi - lo); }
};

struct DirectionEstimate {
  Direction direction;
  double psi_value = 0.0;
  std::uint64_t count = 0;  // successes behind psi_value
  std::uint64_t pairs = 0;  // denominator behind psi_value
  EstimateMethod method = EstimateMethod::simplex;
  std::optional<Arc> maximizing_arc;  // optimizing arc, p = 2 sweep only
};

inline Direction direction_at_angle(double phi) {
  return Direction({detail::cos_box(phi), detail::sin_box(phi)});
}

namespace detail {

// Breakpoint data for the p = 2 sweep.
struct ArcSweep {
  std::uint64_t always = 0;  // indicators equal to 1 on the whole quarter circle
  std::uint64_t total = 0;
  std::vector<double> upto;  // indicator is 1 on [0, theta]
  std::vector<double> from;  // indicator is 1 on [theta, pi/2]

  void add(double z1, double z2) {
    ++total;
    if (z1 >= 0.0 && z2 >= 0.0) {
      ++always;  // includes Z = 0
      return;
    }
    if (z1 < 0.0 && z2 < 0.0) return;
    const double r = std::hypot(z1, z2);
    const double c = std::clamp(z1 / r, -1.0, 1.0);
    if (z1 >= 0.0)
      upto.push_back(std::clamp(half_pi - std::acos(c), 0.0, half_pi));
    else
      from.push_back(std::clamp(std::acos(c) - half_pi, 0.0, half_pi));
  }
};

struct SweepOutcome {
  std::uint64_t count = 0;
  Arc arc;
};

// Finds the optimal count and the widest optimal arc (smallest left end on
// ties). For maximization the optimal set is a union of closed arcs; for
// minimization it may be open, and the arc reported is its closure.
inline SweepOutcome sweep(ArcSweep& s, bool maximize) {
  std::sort(s.upto.begin(), s.upto.end());
  std::sort(s.from.begin(), s.from.end());
  std::vector<double> pts;
  pts.reserve(s.upto.size() + s.from.size() + 2);
  pts.push_back(0.0);
  pts.insert(pts.end(), s.upto.begin(), s.upto.end());
  pts.insert(pts.end(), s.from.begin(), s.from.end());
  pts.push_back(half_pi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  auto n_upto_ge = [&](double a) { return std::uint64_t(s.upto.end() - std::lower_bound(s.upto.begin(), s.upto.end(), a)); };
  auto n_upto_gt = [&](double a) { return std::uint64_t(s.upto.end() - std::upper_bound(s.upto.begin(), s.upto.end(), a)); };
  auto n_from_le = [&](double a) { return std::uint64_t(std::upper_bound(s.from.begin(), s.from.end(), a) - s.from.begin()); };

  // Candidates alternate: point 0, open arc (0,1), point 1, ..., point k-1.
  const std::size_t k = pts.size();
  std::vector<std::uint64_t> cnt(2 * k - 1);
  for (std::size_t i = 0; i < k; ++i) {
    cnt[2 * i] = s.always + n_upto_ge(pts[i]) + n_from_le(pts[i]);
    if (i + 1 < k) cnt[2 * i + 1] = s.always + n_upto_gt(pts[i]) + n_from_le(pts[i]);
  }
  const std::uint64_t target =
      maximize ? *std::max_element(cnt.begin(), cnt.end()) : *std::min_element(cnt.begin(), cnt.end());

  // Candidate c spans [pts[c/2], pts[c/2]] for points and [pts[c/2], pts[c/2+1]] for arcs.
  auto left_of = [&](std::size_t c) { return pts[c / 2]; };
  auto right_of = [&](std::size_t c) { return (c % 2 == 0) ? pts[c / 2] : pts[c / 2 + 1]; };

  SweepOutcome best{target, {0.0, -1.0}};
  bool have = false;
  for (std::size_t c = 0; c < cnt.size();) {
    if (cnt[c] != target) {
      ++c;
      continue;
    }
    std::size_t e = c;
    while (e + 1 < cnt.size() && cnt[e + 1] == target) ++e;
    const Arc arc{left_of(c), right_of(e)};
    if (!have || arc.width() > best.arc.width()) {
      best.arc = arc;
      have = true;
    }
    c = e + 1;
  }
  return best;
}

inline ArcSweep sweep_two_sample(const DataSet& x, const DataSet& y) {
  ArcSweep s;
  s.upto.reserve(x.rows() * y.rows() / 2);
  s.from.reserve(x.rows() * y.rows() / 2);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < y.rows(); ++j) s.add(y(j, 0) - x(i, 0), y(j, 1) - x(i, 1));
  return s;
}

inline ArcSweep sweep_paired(const PairedSample& pairs) {
  ArcSweep s;
  const auto& x = pairs.x();
  const auto& y = pairs.y();
  for (std::size_t i = 0; i < x.rows(); ++i) s.add(y(i, 0) - x(i, 0), y(i, 1) - x(i, 1));
  return s;
}

// Positive part of w, normalized; nullopt if nothing positive remains.
inline std::optional<Direction> positive_part_direction(std::span<const double> w) {
  std::vector<double> out(w.size());
  bool any = false;
  for (std::size_t k = 0; k < w.size(); ++k) {
    out[k] = (std::isfinite(w[k]) && w[k] > 0.0) ? w[k] : 0.0;
    any = any || out[k] > 0.0;
  }
  if (!any) return std::nullopt;
  return Direction::from_weights(out);
}

// Solves cov * w = shift; nullopt when cov is (numerically) singular.
inline std::optional<std::vector<double>> solve_spd(const Eigen::MatrixXd& cov, std::span<const double> shift) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-12)) return std::nullopt;
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(shift.data(), static_cast<Eigen::Index>(shift.size()));
  Eigen::VectorXd w = llt.solve(b);
  return std::vector<double>(w.data(), w.data() + w.size());
}

}  // namespace detail

// Nonnegative projection of the plug-in Roy direction S^{-1}(ybar - xbar),
// S the pooled covariance. nullopt when S is singular (e.g. p >= n+m-2) or
// the projection vanishes.
inline std::optional<Direction> roy_plugin_direction(const DataSet& x, const DataSet& y) {
  if (x.cols() != y.cols()) throw input_error("roy_plugin_direction: dimension mismatch");
  const std::size_t p = x.cols();
  if (x.rows() + y.rows() < p + 3) return std::nullopt;
  const Eigen::MatrixXd s = (x.scatter() + y.scatter()) / static_cast<double>(x.rows() + y.rows() - 2);
  const auto mx = x.column_means();
  const auto my = y.column_means();
  std::vector<double> diff(p);
  for (std::size_t k = 0; k < p; ++k) diff[k] = my[k] - mx[k];
  auto w = detail::solve_spd(s, diff);
  if (!w) return std::nullopt;
  return detail::positive_part_direction(*w);
}

namespace detail {

inline std::vector<Direction> two_sample_starts(const DataSet& x, const DataSet& y, const EstimatorConfig& cfg) {
  const std::size_t p = x.cols();
  std::vector<Direction> starts;
  for (std::size_t k = 0; k < p; ++k) starts.push_back(Direction::axis(p, k));
  const auto mx = x.column_means();
  const auto my = y.column_means();
  std::vector<double> diff(p);
  for (std::size_t k = 0; k < p; ++k) diff[k] = my[k] - mx[k];
  if (auto d = positive_part_direction(diff)) starts.push_back(*d);
  if (auto d = roy_plugin_direction(x, y)) starts.push_back(*d);
  if (starts.size() < cfg.n_starts) {
    auto extra = sample_uniform_directions(p, cfg.n_starts - starts.size(), derive_seed(cfg.seed, stream::starts));
    starts.insert(starts.end(), extra.begin(), extra.end());
  }
  return starts;
}

inline std::vector<Direction> paired_starts(const PairedSample& pairs, const EstimatorConfig& cfg) {
  const std::size_t p = pairs.dim();
  std::vector<Direction> starts;
  for (std::size_t k = 0; k < p; ++k) starts.push_back(Direction::axis(p, k));
  const DataSet z = pairs.differences();
  const auto mz = z.column_means();
  if (auto d = positive_part_direction(mz)) starts.push_back(*d);
  if (z.rows() >= p + 2) {
    const Eigen::MatrixXd s = z.scatter() / static_cast<double>(z.rows() - 1);
    if (auto w = solve_spd(s, mz))
      if (auto d = positive_part_direction(*w)) starts.push_back(*d);
  }
  if (starts.size() < cfg.n_starts) {
    auto extra = sample_uniform_directions(p, cfg.n_starts - starts.size(), derive_seed(cfg.seed, stream::starts));
    starts.insert(starts.end(), extra.begin(), extra.end());
  }
  return starts;
}

// Multistart simplex search on the angle box. `count` maps unnormalized
// coordinates to the number of successes; the search maximizes or
// minimizes it. Reduction across starts keeps the best count, breaking ties
// by the lexicographically smallest angle vector.
template <class Counter>
DirectionEstimate simplex_search(Counter&& count, std::uint64_t pairs, std::size_t p,
                                 const std::vector<Direction>& starts, const EstimatorConfig& cfg, bool maximize) {
  const std::size_t d = p - 1;
  std::vector<double> coords(p), folded(d);
  auto eval = [&](const std::vector<double>& angles) -> double {
    for (std::size_t k = 0; k < d; ++k) folded[k] = fold_angle(angles[k]);
    polar_to_cartesian(folded, coords);
    const double c = static_cast<double>(count(std::span<const double>(coords)));
    return maximize ? -c : c;
  };

  NelderMeadOptions opt;
  opt.max_iterations = cfg.iterations_for(p);
  opt.xtol = cfg.simplex_tol;

  bool have = false;
  double best_f = 0.0;
  std::vector<double> best_angles;
  for (const Direction& start : starts) {
    const PolarAngles a0 = direction_to_polar(start);
    std::vector<double> x(a0.values().begin(), a0.values().end());
    double f = eval(x);
    // Restart from the converged point while that keeps improving; a fresh
    // simplex often escapes the plateau the previous one collapsed on.
    for (std::size_t round = 0; round <= cfg.restarts; ++round) {
      std::vector<std::vector<double>> simplex(d + 1, x);
      for (std::size_t k = 0; k < d; ++k) {
        const double step = (x[k] + cfg.initial_step <= half_pi) ? cfg.initial_step : -cfg.initial_step;
        simplex[k + 1][k] = clamp_angle(x[k] + step);
      }
      auto res = nelder_mead_minimize(eval, std::move(simplex), opt);
      for (double& a : res.x) a = fold_angle(a);
      const double fr = eval(res.x);
      if (round > 0 && !(fr < f)) break;
      x = std::move(res.x);
      f = fr;
    }
    if (!have || f < best_f || (f == best_f && x < best_angles)) {
      have = true;
      best_f = f;
      best_angles = x;
    }
  }

  DirectionEstimate est;
  est.direction = polar_to_direction(PolarAngles(best_angles));
  est.count = count(est.direction.coords());
  est.pairs = pairs;
  est.psi_value = static_cast<double>(est.count) / static_cast<double>(pairs);
  est.method = EstimateMethod::simplex;
  return est;
}

template <class Counter>
DirectionEstimate finish_sweep(ArcSweep& s, bool maximize, Counter&& count) {
  const SweepOutcome out = sweep(s, maximize);
  DirectionEstimate est;
  est.direction = direction_at_angle(out.arc.midpoint());
  est.count = count(est.direction.coords());
  est.pairs = s.total;
  est.psi_value = static_cast<double>(est.count) / static_cast<double>(s.total);
  est.method = EstimateMethod::exact_p2;
  est.maximizing_arc = out.arc;
  return est;
}

inline DirectionEstimate single_axis(std::uint64_t count, std::uint64_t pairs) {
  DirectionEstimate est;
  est.direction = Direction({1.0});
  est.count = count;
  est.pairs = pairs;
  est.psi_value = static_cast<double>(count) / static_cast<double>(pairs);
  return est;
}

inline void check_pair(const DataSet& x, const DataSet& y) {
  if (x.cols() != y.cols()) throw input_error("estimator: x and y differ in dimension");
}

// Column order that depends only on the column contents: by mean shift,
// then by the raw column values. Running the search on columns in this
// order makes the result equivariant under coordinate permutations.
inline std::vector<std::size_t> canonical_order(const DataSet& x, const DataSet& y) {
  const std::size_t p = x.cols();
  const auto mx = x.column_means();
  const auto my = y.column_means();
  auto column_less = [](const DataSet& d, std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < d.rows(); ++i)
      if (d(i, a) != d(i, b)) return d(i, a) < d(i, b);
    return false;
  };
  std::vector<std::size_t> order(p);
  for (std::size_t k = 0; k < p; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double da = my[a] - mx[a], db = my[b] - mx[b];
    if (da != db) return da > db;
    if (column_less(x, a, b) || column_less(x, b, a)) return column_less(x, a, b);
    return column_less(y, a, b);
  });
  return order;
}

inline DataSet permute_columns(const DataSet& d, const std::vector<std::size_t>& order) {
  std::vector<double> v(d.rows() * d.cols());
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t k = 0; k < d.cols(); ++k) v[i * d.cols() + k] = d(i, order[k]);
  return DataSet(d.rows(), d.cols(), std::move(v));
}

// Maps a direction found on permuted columns back to the original order.
inline void unpermute(DirectionEstimate& est, const std::vector<std::size_t>& order) {
  std::vector<double> w(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) w[order[k]] = est.direction[k];
  est.direction = Direction(std::move(w));
}

inline DirectionEstimate two_sample(const DataSet& x, const DataSet& y, const EstimatorConfig& cfg, bool maximize) {
  check_pair(x, y);
  cfg.validate();
  const std::size_t p = x.cols();
  if (p == 1 || (p == 2 && !cfg.force_simplex)) {
    TwoSampleObjective obj(x, y);
    auto counter = [&obj](std::span<const double> s) { return obj.count(s); };
    if (p == 1) return single_axis(obj.count(std::vector<double>{1.0}), obj.pairs());
    ArcSweep s = sweep_two_sample(x, y);
    return finish_sweep(s, maximize, counter);
  }
  const auto order = canonical_order(x, y);
  const DataSet cx = permute_columns(x, order), cy = permute_columns(y, order);
  TwoSampleObjective obj(cx, cy);
  auto counter = [&obj](std::span<const double> s) { return obj.count(s); };
  DirectionEstimate est = simplex_search(counter, obj.pairs(), p, two_sample_starts(cx, cy, cfg), cfg, maximize);
  unpermute(est, order);
  return est;
}

}  // namespace detail

// Exact maximizer for p = 2; returns the midpoint of the widest maximizing
// closed arc.
inline DirectionEstimate estimate_p2(const DataSet& x, const DataSet& y) {
  detail::check_pair(x, y);
  if (x.cols() != 2) throw input_error("estimate_p2: requires p = 2");
  TwoSampleObjective obj(x, y);
  detail::ArcSweep s = detail::sweep_two_sample(x, y);
  return detail::finish_sweep(s, true, [&obj](std::span<const double> c) { return obj.count(c); });
}

// Maximizer of Psi_{n,m}. Delegates to the exact sweep when p = 2 unless
// cfg.force_simplex is set.
inline DirectionEstimate estimate_general(const DataSet& x, const DataSet& y, const EstimatorConfig& cfg = {}) {
  return detail::two_sample(x, y, cfg, true);
}

// Minimizer of Psi_{n,m} (reverse-order test).
inline DirectionEstimate estimate_min(const DataSet& x, const DataSet& y, const EstimatorConfig& cfg = {}) {
  return detail::two_sample(x, y, cfg, false);
}

// Maximizer of the paired objective Psi_N.
inline DirectionEstimate estimate_paired(const PairedSample& pairs, const EstimatorConfig& cfg = {}) {
  cfg.validate();
  PairedObjective obj(pairs);
  auto counter = [&obj](std::span<const double> s) { return obj.count(s); };
  const std::size_t p = pairs.dim();
  if (p == 1) return detail::single_axis(obj.count(std::vector<double>{1.0}), obj.pairs());
  if (p == 2 && !cfg.force_simplex) {
    detail::ArcSweep s = detail::sweep_paired(pairs);
    return detail::finish_sweep(s, true, counter);
  }
  const auto order = detail::canonical_order(pairs.x(), pairs.y());
  const PairedSample cp(detail::permute_columns(pairs.x(), order), detail::permute_columns(pairs.y(), order));
  PairedObjective cobj(cp);
  auto ccounter = [&cobj](std::span<const double> s) { return cobj.count(s); };
  DirectionEstimate est = detail::simplex_search(ccounter, cobj.pairs(), p, detail::paired_starts(cp, cfg), cfg, true);
  detail::unpermute(est, order);
  return est;
}

}  // namespace lstord

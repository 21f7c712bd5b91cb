#pragma once

// Brute-force ground truth on finite supports: upper sets of the Boolean
// lattice, the multivariate and linear stochastic orders for discrete
// distributions, and Roy's separating direction for normal shift models.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lstord/error.hpp"
#include "lstord/geometry.hpp"
#include "lstord/rng.hpp"

namespace lstord {

inline constexpr double oracle_tolerance = 1e-12;

using Point = std::vector<double>;

class DiscreteDistribution {
 public:
  DiscreteDistribution() = default;

  DiscreteDistribution(std::vector<Point> support, std::vector<double> probs)
      : support_(std::move(support)), probs_(std::move(probs)) {
    if (support_.empty()) throw input_error("DiscreteDistribution: empty support");
    if (support_.size() != probs_.size()) throw input_error("DiscreteDistribution: support and probs differ in size");
    const std::size_t p = support_.front().size();
    if (p < 1) throw input_error("DiscreteDistribution: zero-dimensional support point");
    double total = 0.0;
    for (std::size_t i = 0; i < support_.size(); ++i) {
      if (support_[i].size() != p) throw input_error("DiscreteDistribution: support points differ in dimension");
      for (double v : support_[i])
        if (!std::isfinite(v)) throw input_error("DiscreteDistribution: non-finite support coordinate");
      if (!(probs_[i] >= 0.0)) throw input_error("DiscreteDistribution: negative mass");
      total += probs_[i];
      for (std::size_t j = 0; j < i; ++j)
        if (support_[j] == support_[i]) throw input_error("DiscreteDistribution: repeated support point");
    }
    if (std::abs(total - 1.0) > oracle_tolerance) throw input_error("DiscreteDistribution: masses do not sum to 1");
  }

  static DiscreteDistribution uniform(std::vector<Point> support) {
    const std::size_t k = support.size();
    return DiscreteDistribution(std::move(support), std::vector<double>(k, 1.0 / static_cast<double>(k)));
  }

  std::size_t dim() const noexcept { return support_.empty() ? 0 : support_.front().size(); }
  std::size_t size() const noexcept { return support_.size(); }
  const std::vector<Point>& support() const noexcept { return support_; }
  const std::vector<double>& probs() const noexcept { return probs_; }

  double mass_of(const Point& x) const {
    for (std::size_t i = 0; i < support_.size(); ++i)
      if (support_[i] == x) return probs_[i];
    return 0.0;
  }

 private:
  std::vector<Point> support_;
  std::vector<double> probs_;
};

inline bool leq(std::span<const double> a, std::span<const double> b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] > b[k]) return false;
  return true;
}

// A subset of a finite grid of points, stored as a membership mask.
class UpperSet {
 public:
  UpperSet() = default;
  UpperSet(std::vector<Point> grid, std::vector<bool> members) : grid_(std::move(grid)), members_(std::move(members)) {
    if (grid_.size() != members_.size()) throw std::invalid_argument("UpperSet: mask size does not match grid");
  }

  const std::vector<Point>& grid() const noexcept { return grid_; }
  const std::vector<bool>& members() const noexcept { return members_; }
  bool contains(std::size_t i) const { return members_.at(i); }
  std::size_t size() const { return static_cast<std::size_t>(std::count(members_.begin(), members_.end(), true)); }

  // u in U and u <= v (componentwise) implies v in U, within the grid.
  bool is_upward_closed() const {
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      if (!members_[i]) continue;
      for (std::size_t j = 0; j < grid_.size(); ++j)
        if (!members_[j] && leq(grid_[i], grid_[j])) return false;
    }
    return true;
  }

  // Minimal members.
  std::vector<Point> generators() const {
    std::vector<Point> out;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      if (!members_[i]) continue;
      bool minimal = true;
      for (std::size_t j = 0; j < grid_.size() && minimal; ++j)
        minimal = !(j != i && members_[j] && leq(grid_[j], grid_[i]));
      if (minimal) out.push_back(grid_[i]);
    }
    return out;
  }

  double mass(const DiscreteDistribution& d) const {
    double total = 0.0;
    for (std::size_t i = 0; i < grid_.size(); ++i)
      if (members_[i]) total += d.mass_of(grid_[i]);
    return total;
  }

 private:
  std::vector<Point> grid_;
  std::vector<bool> members_;
};

// The 2^p points of {0,1}^p; point k has coordinate j equal to bit (p-1-j)
// of k, so the order is lexicographic.
inline std::vector<Point> boolean_lattice(std::size_t p) {
  std::vector<Point> pts(std::size_t{1} << p, Point(p, 0.0));
  for (std::size_t k = 0; k < pts.size(); ++k)
    for (std::size_t j = 0; j < p; ++j) pts[k][j] = static_cast<double>((k >> (p - 1 - j)) & 1U);
  return pts;
}

namespace detail {

// Calls visit(antichain_mask, upset_mask) for every antichain of a poset on
// at most 64 elements, given up[i] = mask of elements >= i and comp[i] =
// mask of elements comparable with i. Stops and returns false once `cap`
// antichains have been visited without finishing.
template <class Visit>
bool for_each_antichain(const std::vector<std::uint64_t>& up, const std::vector<std::uint64_t>& comp,
                        std::uint64_t cap, Visit&& visit) {
  const std::size_t n = up.size();
  std::uint64_t visited = 0;
  bool complete = true;
  auto rec = [&](auto& self, std::size_t start, std::uint64_t chosen, std::uint64_t blocked,
                 std::uint64_t upset) -> void {
    if (!complete) return;
    if (visited == cap) {
      complete = false;
      return;
    }
    ++visited;
    visit(chosen, upset);
    for (std::size_t i = start; i < n; ++i)
      if (!((blocked >> i) & 1U)) self(self, i + 1, chosen | (std::uint64_t{1} << i), blocked | comp[i], upset | up[i]);
  };
  rec(rec, 0, 0, 0, 0);
  return complete;
}

inline void poset_masks(const std::vector<Point>& pts, std::vector<std::uint64_t>& up,
                        std::vector<std::uint64_t>& comp) {
  const std::size_t n = pts.size();
  up.assign(n, 0);
  comp.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const bool ij = leq(pts[i], pts[j]), ji = leq(pts[j], pts[i]);
      if (ij) up[i] |= std::uint64_t{1} << j;
      if (ij || ji) comp[i] |= std::uint64_t{1} << j;
    }
}

inline std::vector<bool> mask_to_members(std::uint64_t mask, std::size_t n) {
  std::vector<bool> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = (mask >> i) & 1U;
  return m;
}

}  // namespace detail

struct UpperSetCount {
  std::uint64_t raw = 0;          // every upward-closed subset, including empty and full
  std::uint64_t nontrivial = 0;   // raw - 2: the sequence 1, 4, 18, 166, 7579
};

inline void check_lattice_dim(std::size_t p) {
  if (p < 1) throw std::invalid_argument("enumerate_upper_sets: p must be >= 1");
  if (p > 5) throw refusal_error("enumerate_upper_sets: p > 5 refused (combinatorial blowup)");
}

// All upward-closed subsets of {0,1}^p, each generated from its antichain of
// minimal elements. Includes the empty set and the whole lattice.
inline std::vector<UpperSet> enumerate_upper_sets(std::size_t p) {
  check_lattice_dim(p);
  const auto pts = boolean_lattice(p);
  std::vector<std::uint64_t> up, comp;
  detail::poset_masks(pts, up, comp);
  std::vector<UpperSet> out;
  detail::for_each_antichain(up, comp, UINT64_MAX, [&](std::uint64_t, std::uint64_t upset) {
    out.emplace_back(pts, detail::mask_to_members(upset, pts.size()));
  });
  return out;
}

inline UpperSetCount count_upper_sets(std::size_t p) {
  check_lattice_dim(p);
  const auto pts = boolean_lattice(p);
  std::vector<std::uint64_t> up, comp;
  detail::poset_masks(pts, up, comp);
  UpperSetCount c;
  detail::for_each_antichain(up, comp, UINT64_MAX, [&](std::uint64_t, std::uint64_t) { ++c.raw; });
  c.nontrivial = c.raw - 2;
  return c;
}

struct MultivariateCheck {
  bool ordered = true;
  std::optional<UpperSet> witness;
  double p_mass = 0.0;  // P(U) and Q(U) at the witness
  double q_mass = 0.0;
  std::uint64_t upper_sets_checked = 0;
};

inline constexpr std::size_t max_grid_values = 12;
inline constexpr std::uint64_t max_antichains = std::uint64_t{1} << 20;

// Exhaustive check of P(U) <= Q(U) over every upper set U. Only the trace of
// U on the combined support matters, and those traces are exactly the
// up-closures (within the support) of antichains of support points.
inline MultivariateCheck check_multivariate_st(const DiscreteDistribution& P, const DiscreteDistribution& Q) {
  if (P.dim() != Q.dim()) throw input_error("check_multivariate_st: P and Q differ in dimension");
  const std::size_t p = P.dim();
  std::vector<Point> pts = P.support();
  for (const auto& y : Q.support())
    if (std::find(pts.begin(), pts.end(), y) == pts.end()) pts.push_back(y);
  std::sort(pts.begin(), pts.end());
  for (std::size_t k = 0; k < p; ++k) {
    std::vector<double> vals;
    for (const auto& x : pts) vals.push_back(x[k]);
    std::sort(vals.begin(), vals.end());
    if (std::unique(vals.begin(), vals.end()) - vals.begin() > static_cast<std::ptrdiff_t>(max_grid_values))
      throw refusal_error("check_multivariate_st: more than 12 distinct values in coordinate " + std::to_string(k));
  }
  if (pts.size() > 64) throw refusal_error("check_multivariate_st: combined support exceeds 64 points");

  const std::size_t n = pts.size();
  std::vector<double> pm(n), qm(n);
  for (std::size_t i = 0; i < n; ++i) {
    pm[i] = P.mass_of(pts[i]);
    qm[i] = Q.mass_of(pts[i]);
  }
  std::vector<std::uint64_t> up, comp;
  detail::poset_masks(pts, up, comp);

  MultivariateCheck res;
  double worst_gap = oracle_tolerance;
  std::uint64_t worst_mask = 0;
  const bool complete = detail::for_each_antichain(up, comp, max_antichains, [&](std::uint64_t, std::uint64_t upset) {
    ++res.upper_sets_checked;
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if ((upset >> i) & 1U) {
        a += pm[i];
        b += qm[i];
      }
    if (a - b > worst_gap) {
      worst_gap = a - b;
      worst_mask = upset;
      res.ordered = false;
    }
  });
  if (!complete) throw refusal_error("check_multivariate_st: more than 2^20 generator antichains");
  if (!res.ordered) {
    res.witness = UpperSet(pts, detail::mask_to_members(worst_mask, n));
    res.p_mass = res.witness->mass(P);
    res.q_mass = res.witness->mass(Q);
  }
  return res;
}

namespace detail {

inline double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

inline std::uint64_t nth_prime(std::size_t k) {
  std::uint64_t found = 0, c = 1;
  while (found <= k) {
    ++c;
    bool prime = true;
    for (std::uint64_t d = 2; d * d <= c && prime; ++d) prime = c % d != 0;
    found += prime;
  }
  return c;
}

}  // namespace detail

// grid_size directions: the p axes first, then Halton points of the angle
// box [0, pi/2]^{p-1} mapped to the sphere. Deterministic.
inline std::vector<Direction> direction_grid(std::size_t p, std::size_t grid_size) {
  if (p < 1 || grid_size < 1) throw std::invalid_argument("direction_grid: need p >= 1 and grid_size >= 1");
  std::vector<Direction> out;
  for (std::size_t k = 0; k < p && out.size() < grid_size; ++k) out.push_back(Direction::axis(p, k));
  if (p == 1) return out;
  std::vector<std::uint64_t> bases(p - 1);
  for (std::size_t k = 0; k + 1 < p; ++k) bases[k] = detail::nth_prime(k);
  std::vector<double> angles(p - 1), coords(p);
  for (std::uint64_t i = 1; out.size() < grid_size; ++i) {
    for (std::size_t k = 0; k + 1 < p; ++k) angles[k] = half_pi * detail::radical_inverse(i, bases[k]);
    detail::polar_to_cartesian(angles, coords);
    out.push_back(Direction::from_weights(coords));
  }
  return out;
}

struct LinearCheck {
  bool violated = false;
  std::optional<Direction> direction;
  double threshold = 0.0;
  double p_survival = 0.0;  // P(s.X > t) and P(s.Y > t) at the violation
  double q_survival = 0.0;
  std::size_t directions_checked = 0;

  const char* status() const noexcept { return violated ? "violated" : "no_violation_found"; }
};

// Compares P(s.X > t) with P(s.Y > t) at every projected support point t for
// each grid direction. Projections within 1e-12 (relative) of t count as
// ties. A clean pass is only a certificate that no violation was found.
inline LinearCheck check_linear_st_grid(const DiscreteDistribution& P, const DiscreteDistribution& Q,
                                        std::size_t grid_size) {
  if (P.dim() != Q.dim()) throw input_error("check_linear_st_grid: P and Q differ in dimension");
  if (grid_size < 1) throw std::invalid_argument("check_linear_st_grid: grid_size must be >= 1");
  const auto dirs = direction_grid(P.dim(), grid_size);

  double scale = 1.0;
  for (const auto* d : {&P, &Q})
    for (const auto& x : d->support())
      for (double v : x) scale = std::max(scale, std::abs(v));
  const double tie = oracle_tolerance * scale * static_cast<double>(P.dim());

  LinearCheck res;
  std::vector<double> px(P.size()), qy(Q.size());
  for (const auto& s : dirs) {
    ++res.directions_checked;
    for (std::size_t i = 0; i < P.size(); ++i)
      px[i] = std::inner_product(P.support()[i].begin(), P.support()[i].end(), s.coords().begin(), 0.0);
    for (std::size_t j = 0; j < Q.size(); ++j)
      qy[j] = std::inner_product(Q.support()[j].begin(), Q.support()[j].end(), s.coords().begin(), 0.0);
    auto survival = [&](const std::vector<double>& proj, const std::vector<double>& probs, double t) {
      double acc = 0.0;
      for (std::size_t i = 0; i < proj.size(); ++i)
        if (proj[i] > t + tie) acc += probs[i];
      return acc;
    };
    auto check_at = [&](double t) {
      const double a = survival(px, P.probs(), t), b = survival(qy, Q.probs(), t);
      if (a > b + oracle_tolerance) {
        res.violated = true;
        res.direction = s;
        res.threshold = t;
        res.p_survival = a;
        res.q_survival = b;
      }
      return res.violated;
    };
    for (double t : px)
      if (check_at(t)) return res;
    for (double t : qy)
      if (check_at(t)) return res;
  }
  return res;
}

struct RoyDirection {
  std::vector<double> weights;      // Sigma^{-1}(nu - mu), normalized to unit length
  std::optional<Direction> direction;  // set when every weight is >= 0
  double residual = 0.0;            // ||Sigma w - (nu - mu)|| before normalization
  // Maximizer of P(s.X <= s.Y) over the positive orthant; equals
  // *direction when that exists.
  Direction orthant_maximizer;

  bool in_positive_orthant() const noexcept { return direction.has_value(); }
};

namespace detail {

// For normals, P(s.X <= s.Y) = Phi(s.delta / sqrt(2 s'Sigma s)), so the
// orthant maximizer maximizes s.delta / sqrt(s'Sigma s) over s >= 0. On its
// support A the optimum is proportional to Sigma_AA^{-1} delta_A with all
// entries positive, and the ratio there is delta_A' Sigma_AA^{-1} delta_A.
// Enumerating supports is exact; p is capped at 20.
inline Direction orthant_roy_direction(const Eigen::VectorXd& delta, const Eigen::MatrixXd& sigma) {
  const auto p = static_cast<std::size_t>(delta.size());
  if (p > 20) throw refusal_error("roy_direction: orthant search is limited to p <= 20");
  double best = -1.0;
  std::vector<double> best_w;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << p); ++mask) {
    std::vector<Eigen::Index> idx;
    for (std::size_t k = 0; k < p; ++k)
      if ((mask >> k) & 1U) idx.push_back(static_cast<Eigen::Index>(k));
    const auto a = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd s(a, a);
    Eigen::VectorXd d(a);
    for (Eigen::Index i = 0; i < a; ++i) {
      d[i] = delta[idx[i]];
      for (Eigen::Index j = 0; j < a; ++j) s(i, j) = sigma(idx[i], idx[j]);
    }
    const Eigen::VectorXd w = s.llt().solve(d);
    if (!(w.minCoeff() > 0.0)) continue;
    const double value = d.dot(w);
    if (value > best) {
      best = value;
      best_w.assign(p, 0.0);
      for (Eigen::Index i = 0; i < a; ++i) best_w[static_cast<std::size_t>(idx[i])] = w[i];
    }
  }
  if (best_w.empty()) throw refusal_error("roy_direction: no positive orthant maximizer found");
  return Direction::from_weights(best_w);
}

}  // namespace detail

// Roy's maximal separating direction Sigma^{-1}(nu - mu) for normal
// distributions with common covariance Sigma.
inline RoyDirection roy_direction(std::span<const double> mu, std::span<const double> nu,
                                  const Eigen::MatrixXd& sigma) {
  const std::size_t p = mu.size();
  if (nu.size() != p || static_cast<std::size_t>(sigma.rows()) != p || static_cast<std::size_t>(sigma.cols()) != p)
    throw input_error("roy_direction: dimension mismatch");
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, sigma.cwiseAbs().maxCoeff()))
    throw input_error("roy_direction: covariance is not symmetric");
  Eigen::VectorXd delta(p);
  for (std::size_t k = 0; k < p; ++k) {
    delta[k] = nu[k] - mu[k];
    if (delta[k] < 0.0) throw input_error("roy_direction: nu must dominate mu componentwise");
  }
  if (delta.norm() == 0.0) throw input_error("roy_direction: nu equals mu, no separating direction");

  const Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success || llt.rcond() < 1e-14)
    throw refusal_error("roy_direction: covariance is singular or not positive definite");
  Eigen::VectorXd w = llt.solve(delta);
  // One step of iterative refinement.
  w += llt.solve(delta - sigma * w);

  RoyDirection r;
  r.residual = (sigma * w - delta).norm();
  if (r.residual > 1e-10 * delta.norm()) throw refusal_error("roy_direction: linear solve is inaccurate");
  const double norm = w.norm();
  r.weights.resize(p);
  bool nonneg = true;
  for (std::size_t k = 0; k < p; ++k) {
    r.weights[k] = w[k] / norm;
    nonneg = nonneg && r.weights[k] >= 0.0;
  }
  if (nonneg) r.direction = Direction::from_weights(r.weights);
  r.orthant_maximizer = nonneg ? *r.direction : detail::orthant_roy_direction(delta, sigma);
  return r;
}

inline Eigen::MatrixXd intraclass_covariance(std::size_t p, double rho) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Constant(p, p, rho);
  s.diagonal().setOnes();
  return s;
}

struct EquivalenceReport {
  std::size_t p = 0;
  std::size_t trials = 0;
  std::size_t grid_size = 0;
  std::size_t multivariate_ordered = 0;  // pairs with P <=st Q by enumeration
  std::size_t grid_ordered = 0;          // pairs with no linear violation on the grid
  std::size_t counterexamples = 0;       // grid-ordered but not multivariate-ordered
  std::size_t implication_failures = 0;  // multivariate-ordered but grid-violated (must stay 0)
  std::optional<DiscreteDistribution> example_p;
  std::optional<DiscreteDistribution> example_q;
  std::optional<UpperSet> example_witness;
};

namespace detail {

inline std::vector<double> random_masses(std::size_t k, engine_type& eng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(k);
  double total = 0.0;
  for (auto& v : w) total += (v = e(eng));
  for (auto& v : w) v /= total;
  return w;
}

// Drops zero-mass points and renormalizes away rounding.
inline DiscreteDistribution compact(const std::vector<Point>& pts, std::vector<double> w) {
  std::vector<Point> s;
  std::vector<double> q;
  double total = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (w[i] > 0.0) {
      s.push_back(pts[i]);
      q.push_back(w[i]);
      total += w[i];
    }
  for (auto& v : q) v /= total;
  return DiscreteDistribution(std::move(s), std::move(q));
}

}  // namespace detail

// Random multivariate binary pairs. For p <= 3 grid-linear order should imply
// multivariate order, so counterexamples must stay at zero. For p = 4 the
// search targets the antichain of weight-two points: P lives on
// {0000, a, a'} and Q on {b, b', 1111} for complementary weight-two pairs,
// which is linearly ordered yet puts more P mass on the upper set generated
// by {a, a'}. The search is randomized; a report with zero counterexamples
// at p = 4 means it failed, not that none exist.
inline EquivalenceReport check_mvb_equivalence(std::size_t p, std::size_t trials, std::uint64_t seed,
                                               std::size_t grid_size = 20000) {
  if (p < 2 || p > 4) throw std::invalid_argument("check_mvb_equivalence: p must be 2, 3 or 4");
  EquivalenceReport rep;
  rep.p = p;
  rep.trials = trials;
  rep.grid_size = grid_size;
  const auto pts = boolean_lattice(p);
  const std::size_t n = pts.size();

  for (std::size_t t = 0; t < trials; ++t) {
    engine_type eng(derive_seed(seed, t));
    std::vector<double> wp, wq;
    if (p == 4) {
      // Complementary weight-two pairs: 1100/0011, 1010/0101, 1001/0110.
      static constexpr std::array<std::array<std::size_t, 2>, 3> pairs{{{12, 3}, {10, 5}, {9, 6}}};
      std::uniform_int_distribution<std::size_t> pick(0, 2);
      const std::size_t ia = pick(eng);
      const std::size_t ib = (ia + 1 + std::uniform_int_distribution<std::size_t>(0, 1)(eng)) % 3;
      const auto mp = detail::random_masses(3, eng);
      const auto mq = detail::random_masses(3, eng);
      const double w = std::uniform_real_distribution<double>(0.0, 0.5)(eng);
      wp.assign(n, 0.0);
      wq.assign(n, 0.0);
      wp[0] = mp[0];
      wp[pairs[ia][0]] = mp[1];
      wp[pairs[ia][1]] = mp[2];
      wq[pairs[ib][0]] = (1.0 - w) * mq[0];
      wq[pairs[ib][1]] = (1.0 - w) * mq[1];
      wq[n - 1] = (1.0 - w) * mq[2] + w;
    } else {
      wp = detail::random_masses(n, eng);
      const int kind = std::uniform_int_distribution<int>(0, 2)(eng);
      if (kind == 0) {
        wq = detail::random_masses(n, eng);
      } else {
        // Move random fractions of mass upward; kind 2 then perturbs.
        wq = wp;
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::uniform_real_distribution<double> frac(0.0, 1.0);
        for (int moves = 0; moves < 6; ++moves) {
          const std::size_t from = pick(eng), to = pick(eng);
          if (from == to || !leq(pts[from], pts[to])) continue;
          const double amount = frac(eng) * wq[from];
          wq[from] -= amount;
          wq[to] += amount;
        }
        if (kind == 2) {
          const auto noise = detail::random_masses(n, eng);
          const double eps = 0.05 * frac(eng);
          for (std::size_t i = 0; i < n; ++i) wq[i] = (1.0 - eps) * wq[i] + eps * noise[i];
        }
      }
    }
    const auto P = detail::compact(pts, wp);
    const auto Q = detail::compact(pts, wq);
    const auto mv = check_multivariate_st(P, Q);
    const auto lin = check_linear_st_grid(P, Q, grid_size);
    rep.multivariate_ordered += mv.ordered;
    rep.grid_ordered += !lin.violated;
    if (mv.ordered && lin.violated) ++rep.implication_failures;
    if (!mv.ordered && !lin.violated) {
      ++rep.counterexamples;
      if (!rep.example_p) {
        rep.example_p = P;
        rep.example_q = Q;
        rep.example_witness = mv.witness;
      }
    }
  }
  return rep;
}

}  // namespace lstord

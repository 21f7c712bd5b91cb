#pragma once

// Empirical objectives on projected data.
//
// Ties: the indicator is s.X <= s.Y, so equal projections count as
// successes. Projections are compared exactly, without any epsilon; data
// that should tie under fuzz must be rounded by the caller. Values are
// accumulated as integer counts and divided once, which makes identities
// like psi(x,y) + psi(y,x) = 1 + ties/(nm) hold exactly.

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lstord/data.hpp"
#include "lstord/error.hpp"
#include "lstord/geometry.hpp"
#include "lstord/rng.hpp"

namespace lstord {

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

inline void project(const DataSet& d, std::span<const double> s, std::vector<double>& out) {
  out.resize(d.rows());
  for (std::size_t i = 0; i < d.rows(); ++i) out[i] = dot(d.row(i), s);
}

// #{(i, j) : u_i <= v_j}; sorts both inputs.
inline std::uint64_t count_le_pairs(std::vector<double>& u, std::vector<double>& v) {
  std::sort(u.begin(), u.end());
  std::sort(v.begin(), v.end());
  std::uint64_t total = 0;
  std::size_t i = 0;
  for (double vj : v) {
    while (i < u.size() && u[i] <= vj) ++i;
    total += i;
  }
  return total;
}

}  // namespace detail

// Reusable evaluator for Psi_{n,m}(s) = (1/nm) sum_ij 1[s.X_i <= s.Y_j].
// Holds scratch buffers, so one instance per thread.
class TwoSampleObjective {
 public:
  TwoSampleObjective(const DataSet& x, const DataSet& y) : x_(&x), y_(&y) {
    if (x.cols() != y.cols()) throw input_error("psi: x and y differ in dimension");
  }

  std::size_t dim() const noexcept { return x_->cols(); }
  std::uint64_t pairs() const noexcept { return std::uint64_t(x_->rows()) * y_->rows(); }

  // s need not be normalized; only its direction matters.
  std::uint64_t count(std::span<const double> s) {
    detail::project(*x_, s, u_);
    detail::project(*y_, s, v_);
    return detail::count_le_pairs(u_, v_);
  }

  double value(std::span<const double> s) { return static_cast<double>(count(s)) / static_cast<double>(pairs()); }

 private:
  const DataSet* x_;
  const DataSet* y_;
  std::vector<double> u_, v_;
};

// Psi_N(s) = (1/N) sum_i 1[s.X_i <= s.Y_i] for dependent pairs.
class PairedObjective {
 public:
  explicit PairedObjective(const PairedSample& pairs) : pairs_(&pairs) {}

  std::size_t dim() const noexcept { return pairs_->dim(); }
  std::uint64_t pairs() const noexcept { return pairs_->size(); }

  std::uint64_t count(std::span<const double> s) const {
    std::uint64_t total = 0;
    const auto& x = pairs_->x();
    const auto& y = pairs_->y();
    for (std::size_t i = 0; i < x.rows(); ++i) total += detail::dot(x.row(i), s) <= detail::dot(y.row(i), s);
    return total;
  }

  double value(std::span<const double> s) const {
    return static_cast<double>(count(s)) / static_cast<double>(pairs());
  }

 private:
  const PairedSample* pairs_;
};

inline void check_dim(std::size_t data_p, const Direction& s, const char* what) {
  if (data_p != s.dim()) throw input_error(std::string(what) + ": direction dimension does not match data");
}

inline std::uint64_t psi_two_sample_count(const DataSet& x, const DataSet& y, const Direction& s) {
  TwoSampleObjective obj(x, y);
  check_dim(obj.dim(), s, "psi_two_sample");
  return obj.count(s.coords());
}

inline double psi_two_sample(const DataSet& x, const DataSet& y, const Direction& s) {
  TwoSampleObjective obj(x, y);
  check_dim(obj.dim(), s, "psi_two_sample");
  return obj.value(s.coords());
}

inline double psi_paired(const PairedSample& pairs, const Direction& s) {
  check_dim(pairs.dim(), s, "psi_paired");
  return PairedObjective(pairs).value(s.coords());
}

// Rank of s.X_k in the combined sample, counting every element whose
// projection is <= s.X_k (including X_k itself). k is 0-based.
inline std::size_t rank_statistic(const DataSet& x, const DataSet& y, const Direction& s, std::size_t k) {
  if (x.cols() != y.cols()) throw input_error("rank_statistic: x and y differ in dimension");
  check_dim(x.cols(), s, "rank_statistic");
  if (k >= x.rows()) throw std::out_of_range("rank_statistic: index out of range");
  const double target = detail::dot(x.row(k), s.coords());
  std::size_t r = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) r += detail::dot(x.row(i), s.coords()) <= target;
  for (std::size_t j = 0; j < y.rows(); ++j) r += detail::dot(y.row(j), s.coords()) <= target;
  return r;
}

// Monte Carlo estimate of Psi(s) = P(s.X <= s.Y) for independent X, Y.
// Samplers are callables `std::vector<double>(engine_type&)`.
template <class SamplerX, class SamplerY>
double psi_population_mc(SamplerX&& gen_x, SamplerY&& gen_y, const Direction& s, std::size_t reps,
                         std::uint64_t seed) {
  if (reps < 1) throw std::invalid_argument("psi_population_mc: reps must be >= 1");
  engine_type eng(seed);
  std::uint64_t hits = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    const std::vector<double> xv = gen_x(eng);
    const std::vector<double> yv = gen_y(eng);
    if (xv.size() != s.dim() || yv.size() != s.dim())
      throw input_error("psi_population_mc: sampler dimension does not match direction");
    hits += detail::dot(xv, s.coords()) <= detail::dot(yv, s.coords());
  }
  return static_cast<double>(hits) / static_cast<double>(reps);
}

}  // namespace lstord

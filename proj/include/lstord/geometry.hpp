#pragma once

// Points on the nonnegative part of the unit sphere and their hyperspherical
// angle parameterization.
//
// Convention (p coordinates, p-1 angles t_1..t_{p-1}, each in [0, pi/2]):
//
//   s_1     = cos t_1
//   s_2     = sin t_1 cos t_2
//   ...
//   s_{p-1} = sin t_1 ... sin t_{p-2} cos t_{p-1}
//   s_p     = sin t_1 ... sin t_{p-1}
//
// The angle box [0, pi/2]^{p-1} maps onto the whole positive orthant part of
// the sphere, which is what the simplex search works on.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lstord/rng.hpp"

namespace lstord {

inline constexpr double half_pi = std::numbers::pi / 2.0;

class Direction {
 public:
  static constexpr double norm_tolerance = 1e-12;

  Direction() = default;

  // Validates: all coordinates >= 0, at least one > 0, unit norm.
  explicit Direction(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw std::invalid_argument("Direction: empty coordinate vector");
    double ss = 0.0;
    bool positive = false;
    for (double c : coords_) {
      if (!std::isfinite(c) || c < 0.0)
        throw std::invalid_argument("Direction: coordinates must be finite and nonnegative");
      positive = positive || c > 0.0;
      ss += c * c;
    }
    if (!positive) throw std::invalid_argument("Direction: zero vector");
    if (std::abs(std::sqrt(ss) - 1.0) > norm_tolerance)
      throw std::invalid_argument("Direction: not of unit norm");
  }

  // Normalizes a nonnegative, nonzero weight vector.
  static Direction from_weights(std::span<const double> w) {
    double ss = 0.0;
    for (double c : w) {
      if (!std::isfinite(c) || c < 0.0)
        throw std::invalid_argument("Direction::from_weights: weights must be finite and nonnegative");
      ss += c * c;
    }
    if (!(ss > 0.0)) throw std::invalid_argument("Direction::from_weights: zero vector");
    const double norm = std::sqrt(ss);
    std::vector<double> out(w.begin(), w.end());
    for (double& c : out) c /= norm;
    return Direction(std::move(out));
  }

  static Direction axis(std::size_t p, std::size_t k) {
    if (k >= p) throw std::out_of_range("Direction::axis: index out of range");
    std::vector<double> out(p, 0.0);
    out[k] = 1.0;
    return Direction(std::move(out));
  }

  std::size_t dim() const noexcept { return coords_.size(); }
  std::span<const double> coords() const noexcept { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

  double dot(const Direction& other) const {
    if (other.dim() != dim()) throw std::invalid_argument("Direction::dot: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < coords_.size(); ++i) acc += coords_[i] * other.coords_[i];
    return acc;
  }

  double distance(const Direction& other) const {
    if (other.dim() != dim()) throw std::invalid_argument("Direction::distance: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      const double d = coords_[i] - other.coords_[i];
      acc += d * d;
    }
    return std::sqrt(acc);
  }

  friend bool operator==(const Direction&, const Direction&) = default;

 private:
  std::vector<double> coords_;
};

class PolarAngles {
 public:
  PolarAngles() = default;

  explicit PolarAngles(std::vector<double> angles) : angles_(std::move(angles)) {
    for (double a : angles_)
      if (!(a >= 0.0 && a <= half_pi))
        throw std::invalid_argument("PolarAngles: angle outside [0, pi/2]");
  }

  std::size_t size() const noexcept { return angles_.size(); }
  std::span<const double> values() const noexcept { return angles_; }
  double operator[](std::size_t i) const { return angles_[i]; }

  friend bool operator==(const PolarAngles&, const PolarAngles&) = default;

 private:
  std::vector<double> angles_;
};

namespace detail {

// cos/sin that are exact at the box corners, so axis directions come out
// with exact zeros.
inline double cos_box(double a) noexcept { return a == half_pi ? 0.0 : (a == 0.0 ? 1.0 : std::cos(a)); }
inline double sin_box(double a) noexcept { return a == half_pi ? 1.0 : (a == 0.0 ? 0.0 : std::sin(a)); }

// Writes the Cartesian point for `angles` (assumed inside the box) into `out`
// of size angles.size() + 1. Hot path of the simplex objective.
inline void polar_to_cartesian(std::span<const double> angles, std::span<double> out) noexcept {
  double tail = 1.0;
  const std::size_t d = angles.size();
  for (std::size_t k = 0; k < d; ++k) {
    out[k] = tail * cos_box(angles[k]);
    tail *= sin_box(angles[k]);
  }
  out[d] = tail;
}

inline double clamp_angle(double a) noexcept {
  if (!(a > 0.0)) return 0.0;  // also maps NaN to 0
  return a > half_pi ? half_pi : a;
}

// Reflects a into [0, pi/2] off both walls (a triangle wave of period pi).
inline double fold_angle(double a) noexcept {
  if (!std::isfinite(a)) return 0.0;
  double r = std::fmod(std::abs(a), 2.0 * half_pi);
  if (r > half_pi) r = 2.0 * half_pi - r;
  return clamp_angle(r);
}

}  // namespace detail

inline Direction polar_to_direction(const PolarAngles& angles) {
  std::vector<double> out(angles.size() + 1);
  detail::polar_to_cartesian(angles.values(), out);
  // Not renormalized: the search objective evaluates exactly these
  // coordinates, and the chain is unit norm to within a few ulps.
  return Direction(std::move(out));
}

inline PolarAngles direction_to_polar(const Direction& d) {
  const std::size_t p = d.dim();
  std::vector<double> angles(p - 1, 0.0);
  // tail[k] = norm of coordinates k..p-1
  std::vector<double> tail(p + 1, 0.0);
  for (std::size_t k = p; k-- > 0;) tail[k] = std::hypot(tail[k + 1], d[k]);
  for (std::size_t k = 0; k + 1 < p; ++k) {
    if (tail[k + 1] == 0.0) break;  // remaining angles stay 0
    angles[k] = std::atan2(tail[k + 1], d[k]);
  }
  for (double& a : angles) a = detail::clamp_angle(a);
  return PolarAngles(std::move(angles));
}

// k directions uniform on the positive orthant part of the sphere: absolute
// values of standard normal vectors, normalized.
inline std::vector<Direction> sample_uniform_directions(std::size_t p, std::size_t k, std::uint64_t seed) {
  if (p < 1 || k < 1) throw std::invalid_argument("sample_uniform_directions: need p >= 1 and k >= 1");
  engine_type eng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Direction> out;
  out.reserve(k);
  std::vector<double> w(p);
  while (out.size() < k) {
    double ss = 0.0;
    for (double& c : w) {
      c = std::abs(normal(eng));
      ss += c * c;
    }
    if (ss == 0.0) continue;
    out.push_back(Direction::from_weights(w));
  }
  return out;
}

// Angular radius in degrees of the spherical cap {s : center . s >= threshold}.
inline double cap_radius_degrees(double threshold) {
  return std::acos(std::clamp(threshold, -1.0, 1.0)) * 180.0 / std::numbers::pi;
}

}  // namespace lstord

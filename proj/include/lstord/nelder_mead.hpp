#pragma once

// Derivative-free Nelder-Mead simplex minimization with the standard
// coefficients (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
// Works for objectives that are only piecewise constant: no derivative or
// continuity is assumed, and ties between vertices are resolved by
// insertion order so runs are reproducible.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace lstord {

struct NelderMeadOptions {
  std::size_t max_iterations = 1000;
  // Converged when every vertex lies within xtol (max-norm) of the best one.
  double xtol = 1e-8;
  // Also stop once all vertex values coincide. Cheap on piecewise-constant
  // objectives, but stalls on the first plateau the simplex lands on.
  bool stop_on_flat = false;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

template <class F>
NelderMeadResult nelder_mead_minimize(F&& f, std::vector<std::vector<double>> simplex,
                                      const NelderMeadOptions& opt = {}) {
  const std::size_t nv = simplex.size();
  if (nv < 2) throw std::invalid_argument("nelder_mead: simplex needs at least two vertices");
  const std::size_t d = simplex.front().size();
  if (nv != d + 1) throw std::invalid_argument("nelder_mead: simplex must have dim+1 vertices");

  NelderMeadResult res;
  std::vector<double> fv(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    fv[i] = f(simplex[i]);
    ++res.evaluations;
  }

  std::vector<std::size_t> order(nv);
  std::vector<double> centroid(d), xr(d), xe(d), xc(d);

  auto sort_vertices = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> s2(nv);
    std::vector<double> f2(nv);
    for (std::size_t i = 0; i < nv; ++i) {
      s2[i] = std::move(simplex[order[i]]);
      f2[i] = fv[order[i]];
    }
    simplex.swap(s2);
    fv.swap(f2);
  };

  auto affine = [&](const std::vector<double>& a, const std::vector<double>& b, double t, std::vector<double>& out) {
    for (std::size_t k = 0; k < d; ++k) out[k] = a[k] + t * (b[k] - a[k]);
  };

  sort_vertices();
  for (; res.iterations < opt.max_iterations; ++res.iterations) {
    double diameter = 0.0;
    for (std::size_t i = 1; i < nv; ++i)
      for (std::size_t k = 0; k < d; ++k) diameter = std::max(diameter, std::abs(simplex[i][k] - simplex[0][k]));
    if (diameter <= opt.xtol || (opt.stop_on_flat && fv[nv - 1] == fv[0])) {
      res.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i + 1 < nv; ++i)
      for (std::size_t k = 0; k < d; ++k) centroid[k] += simplex[i][k];
    for (double& c : centroid) c /= static_cast<double>(d);

    auto& worst = simplex[nv - 1];
    affine(centroid, worst, -1.0, xr);
    const double fr = f(xr);
    ++res.evaluations;

    if (fr < fv[0]) {
      affine(centroid, worst, -2.0, xe);
      const double fe = f(xe);
      ++res.evaluations;
      if (fe < fr) {
        worst = xe;
        fv[nv - 1] = fe;
      } else {
        worst = xr;
        fv[nv - 1] = fr;
      }
    } else if (fr < fv[nv - 2]) {
      worst = xr;
      fv[nv - 1] = fr;
    } else {
      // Outside contraction when the reflected point beats the worst vertex,
      // inside contraction otherwise.
      const bool outside = fr < fv[nv - 1];
      affine(centroid, worst, outside ? -0.5 : 0.5, xc);
      const double fc = f(xc);
      ++res.evaluations;
      if (outside ? fc <= fr : fc < fv[nv - 1]) {
        worst = xc;
        fv[nv - 1] = fc;
      } else {
        for (std::size_t i = 1; i < nv; ++i) {
          affine(simplex[0], simplex[i], 0.5, simplex[i]);
          fv[i] = f(simplex[i]);
          ++res.evaluations;
        }
      }
    }
    sort_vertices();
  }

  res.x = simplex[0];
  res.f = fv[0];
  return res;
}

}  // namespace lstord

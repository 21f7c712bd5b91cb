// Counts upper sets of {0,1}^p and shows a pair of bivariate distributions
// that is linearly but not multivariately ordered.

#include <cstdio>

#include "lstord/lstord.hpp"

int main() {
  for (std::size_t p = 1; p <= 5; ++p) {
    const auto c = lstord::count_upper_sets(p);
    std::printf("p=%zu  upper sets: %llu (without empty and full: %llu)\n", p,
                static_cast<unsigned long long>(c.raw), static_cast<unsigned long long>(c.nontrivial));
  }

  const auto P = lstord::DiscreteDistribution::uniform({{1, 1}, {0, 1}, {1, 0}});
  const auto Q = lstord::DiscreteDistribution::uniform({{0.75, 0.75}, {1, 2}, {2, 1}});
  std::printf("linear order on 1000 directions: %s\n", lstord::check_linear_st_grid(P, Q, 1000).status());
  const auto mv = lstord::check_multivariate_st(P, Q);
  if (!mv.ordered) {
    std::printf("upper set generated by");
    for (const auto& g : mv.witness->generators()) std::printf(" (%g, %g)", g[0], g[1]);
    std::printf(": P = %.4f > Q = %.4f\n", mv.p_mass, mv.q_mass);
  }
}

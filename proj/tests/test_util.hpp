#pragma once

#include <random>
#include <vector>

#include "gbw/coeff_vector.hpp"
#include "gbw/space.hpp"

namespace testutil {

using gbw::CoeffVector;
using gbw::Index;
using gbw::SpaceSpec;

inline SpaceSpec unweighted_l1(Index dim_cap = 1000) {
  SpaceSpec s;
  s.kind = gbw::SpaceKind::WeightedL1;
  s.weights = gbw::WeightSeq::ones();
  s.dim_cap = dim_cap;
  s.name = "unweighted_l1";
  return s;
}

// w periodic (1, 2): sup/inf = 2
inline SpaceSpec renormed12(Index dim_cap = 1000) {
  SpaceSpec s;
  s.kind = gbw::SpaceKind::WeightedL1;
  s.weights = gbw::WeightSeq::periodic({1.0, 2.0});
  s.dim_cap = dim_cap;
  s.name = "renormed12";
  return s;
}

// w = (2, 1, 1, ...): ||e_1|| = 2
inline SpaceSpec weighted21(Index dim_cap = 1000) {
  SpaceSpec s;
  s.kind = gbw::SpaceKind::WeightedL1;
  s.weights = gbw::WeightSeq::prefix_then_constant({2.0}, 1.0);
  s.dim_cap = dim_cap;
  s.name = "weighted21";
  return s;
}

inline SpaceSpec dichotomous(Index dim_cap = Index{1} << 40) {
  SpaceSpec s;
  s.kind = gbw::SpaceKind::SchreierDichotomous;
  s.dim_cap = dim_cap;
  s.name = "dichotomous";
  return s;
}

// w = (1, 1/2, 1, 1, ...): one sub-unit weight
inline SpaceSpec em3(Index dim_cap = 4096) {
  SpaceSpec s;
  s.kind = gbw::SpaceKind::SchreierSqrtWeighted;
  s.weights = gbw::WeightSeq::prefix_then_constant({1.0, 0.5}, 1.0);
  s.dim_cap = dim_cap;
  s.name = "em3";
  return s;
}

inline SpaceSpec plain_lp(double p, Index dim_cap = 1000) {
  SpaceSpec s;
  s.kind = gbw::SpaceKind::PlainLp;
  s.p = p;
  s.dim_cap = dim_cap;
  s.name = "l" + std::to_string(p);
  return s;
}

inline std::vector<SpaceSpec> three_constructions(Index dim_cap = 1000) {
  return {renormed12(dim_cap), dichotomous(std::max(dim_cap, Index{1} << 20)),
          em3(dim_cap)};
}

// Random vector with support inside [1, window], |supp| <= max_support,
// magnitudes drawn from mags with random signs.
inline CoeffVector random_vector(std::mt19937& rng, Index window, int max_support,
                                 const std::vector<double>& mags, Index dim_cap) {
  std::uniform_int_distribution<int> size_dist(0, max_support);
  std::uniform_int_distribution<Index> idx_dist(1, window);
  std::uniform_int_distribution<std::size_t> mag_dist(0, mags.size() - 1);
  std::bernoulli_distribution flip(0.5);
  CoeffVector x(dim_cap);
  const int size = size_dist(rng);
  for (int i = 0; i < size; ++i) {
    const Index n = idx_dist(rng);
    const double mag = mags[mag_dist(rng)];
    x.set(n, flip(rng) ? -mag : mag);
  }
  return x;
}

}  // namespace testutil

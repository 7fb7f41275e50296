#include <cmath>
#include <random>

#include "doctest.h"
#include "gbw/errors.hpp"
#include "gbw/oracles.hpp"
#include "oracle_ref.hpp"
#include "test_util.hpp"

using namespace gbw;
using testutil::unweighted_l1;

namespace {
constexpr double kTol = 1e-9;
}

TEST_CASE("gamma on simple instances") {
  const SpaceSpec l1 = unweighted_l1();
  CHECK(gamma(l1, CoeffVector::from_dense({1, 3}), 1) == doctest::Approx(1.0));
  CHECK(gamma(l1, CoeffVector::from_dense({3, 1, 1}), 2) == doctest::Approx(1.0));

  // Both greedy singletons of (1,1) leave one unit; the worst remainder
  // under w = (1,2,1,...) is ||e_2|| = 2.
  SpaceSpec w121 = l1;
  w121.weights = WeightSeq::prefix_then_constant({1.0, 2.0}, 1.0);
  CHECK(gamma(w121, CoeffVector::from_dense({1, 1}), 1) == doctest::Approx(2.0));

  const CoeffVector x = CoeffVector::from_dense({2, -1, 0.5});
  CHECK(gamma(l1, x, 0) == doctest::Approx(eval_norm(l1, x)));
  CHECK(gamma(l1, x, 3) == 0.0);
  CHECK(gamma(l1, x, 7) == 0.0);
}

TEST_CASE("sigma on simple instances") {
  const SpaceSpec l1 = unweighted_l1();
  CHECK(sigma(l1, SigmaKind::proj(), CoeffVector::from_dense({3, 1}), 1) ==
        doctest::Approx(1.0));
  CHECK(sigma(l1, SigmaKind::partial(), CoeffVector::from_dense({1, 3}), 1) ==
        doctest::Approx(3.0));
  CHECK(sigma(l1, SigmaKind::best(), CoeffVector::from_dense({3, 1}), 1) ==
        doctest::Approx(1.0));

  const CoeffVector x = CoeffVector::from_dense({0, 5, 1}, 10);
  const GreedyOrdering rho = canonical_ordering(x);
  CHECK(rho.order == std::vector<Index>{2, 3});
  CHECK(sigma(l1, SigmaKind::left_dk(rho), x, 1) == doctest::Approx(6.0));
  CHECK(sigma(l1, SigmaKind::right_dk(rho), x, 0) == doctest::Approx(6.0));
}

TEST_CASE("sigma kind validation") {
  const SpaceSpec l1 = unweighted_l1();
  const CoeffVector x = CoeffVector::from_dense({1, 2});
  SigmaKind bad{SigmaTag::LeftDK, std::nullopt};
  CHECK_THROWS_AS(sigma(l1, bad, x, 1), std::invalid_argument);
  SigmaKind also_bad{SigmaTag::Proj, canonical_ordering(x)};
  CHECK_THROWS_AS(sigma(l1, also_bad, x, 1), std::invalid_argument);
  // ordering must cover the support and decrease in modulus
  GreedyOrdering rho;
  rho.order = {1};
  CHECK_THROWS_AS(sigma(l1, SigmaKind::left_dk(rho), x, 1), std::invalid_argument);
  GreedyOrdering increasing;
  increasing.order = {1, 2};
  CHECK_THROWS_AS(sigma(l1, SigmaKind::left_dk(increasing), x, 1),
                  std::invalid_argument);
}

TEST_CASE("functional ordering and monotonicity") {
  std::mt19937 rng(31);
  const std::vector<double> mags{2.0, 1.0, 1.0, 0.5};
  for (const auto& space : testutil::three_constructions()) {
    for (int trial = 0; trial < 30; ++trial) {
      const CoeffVector x =
          testutil::random_vector(rng, 10, 6, mags, space.dim_cap);
      const double norm = eval_norm(space, x);
      double prev_best = 1e300, prev_proj = 1e300, prev_partial = 1e300,
             prev_gamma = 1e300;
      for (long long m = 0; m <= 7; ++m) {
        const double best = sigma(space, SigmaKind::best(), x, m);
        const double proj = sigma(space, SigmaKind::proj(), x, m);
        const double partial = sigma(space, SigmaKind::partial(), x, m);
        const double g = gamma(space, x, m);
        if (m == 0) {
          CHECK(best == doctest::Approx(norm));
          CHECK(proj == doctest::Approx(norm));
          CHECK(partial == doctest::Approx(norm));
        }
        CHECK(best <= proj + kTol);
        CHECK(proj <= partial + kTol);
        CHECK(g + kTol >= proj);
        CHECK(best <= prev_best + kTol);
        CHECK(proj <= prev_proj + kTol);
        CHECK(partial <= prev_partial + kTol);
        CHECK(g <= prev_gamma + kTol);  // holds on these 1-unconditional spaces
        prev_best = best;
        prev_proj = proj;
        prev_partial = partial;
        prev_gamma = g;
      }
      // homogeneity
      const double c = -2.5;
      CHECK(gamma(space, x.scaled(c), 2) ==
            doctest::Approx(std::abs(c) * gamma(space, x, 2)).epsilon(1e-9));
      CHECK(sigma(space, SigmaKind::proj(), x.scaled(c), 2) ==
            doctest::Approx(std::abs(c) * sigma(space, SigmaKind::proj(), x, 2))
                .epsilon(1e-9));
    }
  }
}

TEST_CASE("sign flips change nothing the functionals see") {
  std::mt19937 rng(37);
  const std::vector<double> mags{2.0, 1.0, 0.5};
  for (const auto& space : testutil::three_constructions()) {
    for (int trial = 0; trial < 20; ++trial) {
      const CoeffVector x =
          testutil::random_vector(rng, 10, 6, mags, space.dim_cap);
      CoeffVector abs_x(space.dim_cap);
      for (const auto& [n, v] : x.entries()) abs_x.set(n, std::abs(v));
      for (long long m = 0; m <= 4; ++m) {
        CHECK(gamma(space, x, m) == doctest::Approx(gamma(space, abs_x, m)));
        CHECK(sigma(space, SigmaKind::best(), x, m) ==
              doctest::Approx(sigma(space, SigmaKind::best(), abs_x, m)));
        CHECK(sigma(space, SigmaKind::partial(), x, m) ==
              doctest::Approx(sigma(space, SigmaKind::partial(), abs_x, m)));
      }
    }
  }
}

TEST_CASE("quasi-greedy with constant 1 on the constructions") {
  // Exhaustive over the window-8 grid: every greedy remainder stays below
  // the norm. Signs ride on modulus invariance (previous test).
  const std::vector<double> mods{2.0, 1.0, 0.5};
  for (const auto& space : testutil::three_constructions()) {
    IndexSet window = sets::range(1, 8);
    std::vector<std::size_t> digit;
    for (std::uint32_t mask = 0; mask < (1u << 8); ++mask) {
      IndexSet supp;
      for (int i = 0; i < 8; ++i)
        if (mask & (1u << i)) supp.push_back(window[i]);
      digit.assign(supp.size(), 0);
      while (true) {
        CoeffVector x(space.dim_cap);
        for (std::size_t i = 0; i < supp.size(); ++i) x.set(supp[i], mods[digit[i]]);
        const double norm = eval_norm(space, x);
        for (long long m = 0; m <= static_cast<long long>(supp.size()); ++m)
          CHECK(gamma(space, x, m) <= norm + kTol);
        std::size_t i = supp.size();
        bool done = true;
        while (i-- > 0) {
          if (++digit[i] < mods.size()) {
            done = false;
            break;
          }
          digit[i] = 0;
        }
        if (done) break;
      }
      if (supp.empty()) continue;
    }
  }
}

TEST_CASE("oracles agree with the literal reference") {
  std::mt19937 rng(41);
  const std::vector<double> mags{2.0, 1.5, 1.0, 1.0, 0.5};
  std::vector<SpaceSpec> spaces = testutil::three_constructions();
  spaces.push_back(testutil::plain_lp(2.0));
  for (const auto& space : spaces) {
    for (int trial = 0; trial < 15; ++trial) {
      const CoeffVector x =
          testutil::random_vector(rng, 12, 8, mags, space.dim_cap);
      for (long long m = 0; m <= 5; ++m) {
        CHECK(gamma(space, x, m) ==
              doctest::Approx(oracle_ref::ref_gamma(space, x, m, 12)).epsilon(kTol));
        CHECK(sigma(space, SigmaKind::proj(), x, m) ==
              doctest::Approx(oracle_ref::ref_sigma_proj(space, x, m)).epsilon(kTol));
        CHECK(sigma(space, SigmaKind::partial(), x, m) ==
              doctest::Approx(oracle_ref::ref_sigma_partial(space, x, m))
                  .epsilon(kTol));
        if (!x.empty()) {
          const auto orderings = greedy_orderings(x, 3);
          for (const auto& rho : orderings.orderings) {
            CHECK(sigma(space, SigmaKind::left_dk(rho), x, m) ==
                  doctest::Approx(oracle_ref::ref_sigma_left(space, x, rho, m))
                      .epsilon(kTol));
            CHECK(sigma(space, SigmaKind::right_dk(rho), x, m) ==
                  doctest::Approx(oracle_ref::ref_sigma_right(space, x, rho, m))
                      .epsilon(kTol));
          }
        }
      }
    }
  }
}

TEST_CASE("gamma refuses oversized families instead of sampling") {
  const SpaceSpec l1 = unweighted_l1(64);
  CoeffVector x(64);
  for (Index n = 1; n <= 20; ++n) x.set(n, 1.0);
  CHECK_THROWS_AS(gamma(l1, x, 10), EnumerationOverflowError);
}

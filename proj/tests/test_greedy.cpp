#include <cmath>
#include <random>

#include "doctest.h"
#include "gbw/errors.hpp"
#include "gbw/greedy.hpp"
#include "gbw/limits.hpp"
#include "gbw/space.hpp"
#include "oracle_ref.hpp"
#include "test_util.hpp"

using namespace gbw;

namespace {
constexpr double kTol = 1e-9;
}

TEST_CASE("greedy set families with ties") {
  const CoeffVector x = CoeffVector::from_dense({3, 1, 1}, 10);
  const GreedyFamily fam = greedy_sets(x, 2);
  CHECK(fam.mandatory == IndexSet{1});
  CHECK(fam.tie_class == IndexSet{2, 3});
  CHECK(fam.slots == 1);
  CHECK(fam.family_size() == 2);
  CHECK(fam.members() == std::vector<IndexSet>{{1, 2}, {1, 3}});

  const GreedyFamily empty = greedy_sets(x, 0);
  CHECK(empty.family_size() == 1);
  CHECK(empty.members() == std::vector<IndexSet>{{}});

  const CoeffVector y = CoeffVector::from_dense({5, 4, 3, 3, 3}, 10);
  const GreedyFamily fam3 = greedy_sets(y, 3);
  CHECK(fam3.mandatory == IndexSet{1, 2});
  CHECK(fam3.tie_class == IndexSet{3, 4, 5});
  CHECK(fam3.slots == 1);
  CHECK(fam3.family_size() == 3);
  CHECK(fam3.members().size() ==
        oracle_ref::ref_greedy_sets(y, 3, 5).size());
}

TEST_CASE("greedy sets pad with zero coefficients past the support") {
  const CoeffVector x = CoeffVector::from_dense({3, 1}, 5);
  const GreedyFamily fam = greedy_sets(x, 4);
  CHECK(fam.mandatory == IndexSet{1, 2});
  CHECK(fam.tie_class == IndexSet{3, 4, 5});
  CHECK(fam.slots == 2);
  CHECK(fam.family_size() == 3);
  for (const IndexSet& member : fam.members()) {
    CHECK(member.size() == 4);
    // min over the set >= max outside (threshold 0)
    double min_in = 1e300;
    for (Index n : member) min_in = std::min(min_in, std::abs(x.coeff(n)));
    CHECK(min_in >= 0.0);
  }
  CHECK_THROWS_AS(greedy_sets(x, 6), std::invalid_argument);  // m > dim_cap
}

TEST_CASE("greedy family counts match the brute-force filter") {
  std::mt19937 rng(23);
  const std::vector<double> mags{2.0, 1.0, 1.0, 0.5};  // ties likely
  for (int trial = 0; trial < 40; ++trial) {
    const CoeffVector x = testutil::random_vector(rng, 10, 10, mags, 10);
    for (long long m = 0; m <= static_cast<long long>(x.support_size()); ++m) {
      const GreedyFamily fam = greedy_sets(x, m);
      const auto brute = oracle_ref::ref_greedy_sets(x, m, 10);
      // The brute filter scans every subset of the window; members off the
      // support can enter only at threshold zero (m = |supp|), where
      // padding makes the counts differ by design. Compare below that.
      if (m < static_cast<long long>(x.support_size()))
        CHECK(fam.family_size() == static_cast<long long>(brute.size()));
      for (const IndexSet& member : fam.members())
        CHECK(fam.is_member(member));
    }
  }
}

TEST_CASE("greedy families are scale invariant") {
  const CoeffVector x = CoeffVector::from_dense({0.5, -2, 2, 1}, 12);
  const GreedyFamily base = greedy_sets(x, 2);
  for (double c : {2.0, -3.0, 0.25}) {
    const GreedyFamily scaled = greedy_sets(x.scaled(c), 2);
    CHECK(scaled.mandatory == base.mandatory);
    CHECK(scaled.tie_class == base.tie_class);
    CHECK(scaled.slots == base.slots);
  }
}

TEST_CASE("projection and partial sums") {
  const CoeffVector x = CoeffVector::from_dense({1, 2, 3}, 10);
  CHECK(project(x, {2}) == CoeffVector::from_dense({0, 2, 0}, 10));
  CHECK(project(x, {}) == CoeffVector(10));
  CHECK(project(x, {1, 2, 3, 7}) == x);

  const CoeffVector y = CoeffVector::from_dense({1, 3, 2}, 10);
  CHECK(partial_sum(y, 1) == CoeffVector::from_dense({1}, 10));
  CHECK(partial_sum(y, 0) == CoeffVector(10));
  CHECK(partial_sum(y, 10) == y);
  CHECK_THROWS_AS(partial_sum(y, 11), std::invalid_argument);
}

TEST_CASE("truncation operator") {
  const CoeffVector x = CoeffVector::from_dense({2, -3, 0.5}, 10);
  const CoeffVector once = truncate(x, 1.0);
  CHECK(once == CoeffVector::from_dense({1, -1, 0.5}, 10));
  CHECK(truncate(once, 1.0) == once);  // idempotent
  CHECK(once.sup_norm() <= 1.0);

  const CoeffVector small = CoeffVector::from_dense({0.25, -0.5}, 10);
  CHECK(truncate(small, 1.0) == small);
  CHECK_THROWS_AS(truncate(x, 0.0), std::invalid_argument);
}

TEST_CASE("truncation never grows the norm on the constructions") {
  std::mt19937 rng(29);
  const std::vector<double> mags{3.0, 2.0, 1.0, 0.5, 0.125};
  std::uniform_real_distribution<double> alpha_dist(0.05, 3.5);
  for (const auto& space : testutil::three_constructions()) {
    for (int trial = 0; trial < 200; ++trial) {
      const CoeffVector x =
          testutil::random_vector(rng, 12, 8, mags, space.dim_cap);
      const double alpha = alpha_dist(rng);
      const CoeffVector tx = truncate(x, alpha);
      CHECK(eval_norm(space, tx) <= eval_norm(space, x) + kTol);
      CHECK(tx.sup_norm() <= alpha + kTol);
    }
  }
}

TEST_CASE("greedy orderings enumerate tie permutations") {
  const CoeffVector x = CoeffVector::from_dense({3, 1, 1}, 10);
  const OrderingEnumeration orderings = greedy_orderings(x, 100);
  CHECK(orderings.total_count == 2);
  CHECK_FALSE(orderings.overflow);
  REQUIRE(orderings.orderings.size() == 2);
  CHECK(orderings.orderings[0].order == std::vector<Index>{1, 2, 3});
  CHECK(orderings.orderings[1].order == std::vector<Index>{1, 3, 2});
  CHECK(canonical_ordering(x).order == std::vector<Index>{1, 2, 3});

  const CoeffVector y = CoeffVector::from_dense({5, 4, 3}, 10);
  CHECK(greedy_orderings(y, 10).orderings.size() == 1);

  const CoeffVector ties = CoeffVector::from_dense({1, 1, 1}, 10);
  const OrderingEnumeration capped = greedy_orderings(ties, 2);
  CHECK(capped.orderings.size() == 2);
  CHECK(capped.overflow);
  CHECK(capped.total_count == 6);
}

TEST_CASE("ordering positions continue canonically past the support") {
  const CoeffVector x = CoeffVector::from_pairs({{2, 5.0}, {3, 1.0}}, 5);
  const GreedyOrdering rho = canonical_ordering(x);
  CHECK(rho.order == std::vector<Index>{2, 3});
  CHECK(ordering_at(rho, x, 1) == 2);
  CHECK(ordering_at(rho, x, 2) == 3);
  CHECK(ordering_at(rho, x, 3) == 1);
  CHECK(ordering_at(rho, x, 4) == 4);
  CHECK(ordering_at(rho, x, 5) == 5);
  CHECK_THROWS_AS(ordering_at(rho, x, 6), std::invalid_argument);
}

TEST_CASE("family member cap refuses huge tie classes") {
  CoeffVector x(64);
  for (Index n = 1; n <= 20; ++n) x.set(n, 1.0);
  const GreedyFamily fam = greedy_sets(x, 10);
  CHECK(fam.family_size() > enum_limits().family_cap);
  CHECK_THROWS_AS(fam.members(), EnumerationOverflowError);
}

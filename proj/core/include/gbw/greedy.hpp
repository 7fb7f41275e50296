#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gbw/coeff_vector.hpp"

namespace gbw {

// The complete family G(x, m) of greedy sets of x of size m, stored in
// threshold form: every member is mandatory plus any `slots`-subset of the
// tie class, and |mandatory| + slots = m.
struct GreedyFamily {
  IndexSet mandatory;   // coefficients strictly above the threshold
  IndexSet tie_class;   // coefficients exactly at the threshold
  long long slots = 0;  // tie-class members each greedy set takes
  long long m = 0;      // requested size

  // binomial(|tie_class|, slots), saturating at a large sentinel.
  long long family_size() const;

  // All member sets, ordered by the lexicographic order of the chosen
  // tie-class subsets. Throws EnumerationOverflowError past the family cap.
  std::vector<IndexSet> members() const;

  // Visits members in the same order; returns false from fn to stop early.
  void for_each_member(const std::function<bool(const IndexSet&)>& fn) const;

  bool is_member(const IndexSet& candidate) const;
};

// Exact greedy-set family of x at size m. Requires m <= dim_cap. For
// m > |supp(x)| the threshold is 0 and the tie class is every
// zero-coefficient index in [1, dim_cap] (materialized; guarded against
// absurd caps).
GreedyFamily greedy_sets(const CoeffVector& x, long long m);

// P_A(x): keeps coefficients on A, drops the rest. Indices outside the
// support are inert.
CoeffVector project(const CoeffVector& x, const IndexSet& a);

// S_k(x) = P_{[1,k]}(x). Requires k <= dim_cap.
CoeffVector partial_sum(const CoeffVector& x, long long k);

// Truncation: coefficients with |x_n| > alpha become sgn(x_n) * alpha.
CoeffVector truncate(const CoeffVector& x, double alpha);

// An enumeration of supp(x) by decreasing coefficient modulus. The order
// covers exactly the support; ties are broken by the declared policy.
struct GreedyOrdering {
  std::vector<Index> order;
  std::string tie_policy = "ascending-index";

  Index at(std::size_t i) const { return order.at(i); }  // 1-based via at(i-1)
  std::size_t length() const { return order.size(); }
};

GreedyOrdering canonical_ordering(const CoeffVector& x);

// rho(j), 1-based. Past the listed order the ordering continues through
// the zero-coefficient indices of the section in ascending order (any
// continuation is modulus-decreasing, this one is the canonical choice).
Index ordering_at(const GreedyOrdering& rho, const CoeffVector& x, long long j);

struct OrderingEnumeration {
  std::vector<GreedyOrdering> orderings;
  bool overflow = false;        // more orderings exist than the cap
  long long total_count = 0;    // product of tie-class factorials, saturated
};

// All orderings differing by permutations within tie classes, up to `cap`
// items, ascending-index arrangements first; the canonical ordering always
// comes first.
OrderingEnumeration greedy_orderings(const CoeffVector& x, long long cap);

}  // namespace gbw

#include "gbw/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gbw/errors.hpp"
#include "gbw/limits.hpp"

namespace gbw {

namespace {

constexpr long long kCountSentinel = std::numeric_limits<long long>::max() / 4;

long long saturating_binomial(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long result = 1;
  for (long long i = 1; i <= k; ++i) {
    if (result > kCountSentinel / n) return kCountSentinel;
    result = result * (n - k + i) / i;
  }
  return std::min(result, kCountSentinel);
}

// Visits all k-subsets of items in lexicographic order.
bool for_each_combination(const IndexSet& items, long long k,
                          const std::function<bool(const IndexSet&)>& fn) {
  const long long n = static_cast<long long>(items.size());
  if (k == 0) return fn({});
  std::vector<long long> pick(static_cast<std::size_t>(k));
  for (long long i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
  IndexSet subset(static_cast<std::size_t>(k));
  while (true) {
    for (long long i = 0; i < k; ++i)
      subset[static_cast<std::size_t>(i)] =
          items[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])];
    if (!fn(subset)) return false;
    long long i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return true;
    ++pick[static_cast<std::size_t>(i)];
    for (long long j = i + 1; j < k; ++j)
      pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace

long long GreedyFamily::family_size() const {
  return saturating_binomial(static_cast<long long>(tie_class.size()), slots);
}

void GreedyFamily::for_each_member(const std::function<bool(const IndexSet&)>& fn) const {
  if (family_size() > enum_limits().family_cap)
    throw EnumerationOverflowError("greedy family of size " +
                                   std::to_string(family_size()) +
                                   " exceeds the member cap");
  for_each_combination(tie_class, slots, [&](const IndexSet& chosen) {
    return fn(sets::set_union(mandatory, chosen));
  });
}

std::vector<IndexSet> GreedyFamily::members() const {
  std::vector<IndexSet> out;
  out.reserve(static_cast<std::size_t>(family_size()));
  for_each_member([&](const IndexSet& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

bool GreedyFamily::is_member(const IndexSet& candidate) const {
  if (static_cast<long long>(candidate.size()) != m) return false;
  if (!sets::is_subset(mandatory, candidate)) return false;
  const IndexSet extra = sets::set_minus(candidate, mandatory);
  return static_cast<long long>(extra.size()) == slots &&
         sets::is_subset(extra, tie_class);
}

GreedyFamily greedy_sets(const CoeffVector& x, long long m) {
  if (m < 0) throw std::invalid_argument("greedy_sets: m must be >= 0");
  if (m > x.dim_cap())
    throw std::invalid_argument("greedy_sets: m exceeds dim_cap");

  GreedyFamily fam;
  fam.m = m;
  if (m == 0) return fam;  // the single empty greedy set

  const long long supp_size = static_cast<long long>(x.support_size());
  if (m > supp_size) {
    // Threshold 0: every support index is mandatory and the tie class is
    // all zero-coefficient indices of the section.
    const long long zeros = x.dim_cap() - supp_size;
    if (zeros > 4'000'000)
      throw EnumerationOverflowError(
          "zero-coefficient tie class of size " + std::to_string(zeros) +
          " is too large to materialize");
    fam.mandatory = x.support();
    fam.tie_class = sets::set_minus(sets::range(1, x.dim_cap()), fam.mandatory);
    fam.slots = m - supp_size;
    return fam;
  }

  std::vector<std::pair<double, Index>> by_modulus;
  by_modulus.reserve(x.support_size());
  for (const auto& [n, v] : x.entries()) by_modulus.emplace_back(std::abs(v), n);
  std::sort(by_modulus.begin(), by_modulus.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  const double threshold = by_modulus[static_cast<std::size_t>(m - 1)].first;
  for (const auto& [mod, n] : by_modulus) {
    if (mod > threshold)
      fam.mandatory.push_back(n);
    else if (mod == threshold)
      fam.tie_class.push_back(n);
  }
  fam.mandatory = sets::normalized(fam.mandatory);
  fam.tie_class = sets::normalized(fam.tie_class);
  fam.slots = m - static_cast<long long>(fam.mandatory.size());
  return fam;
}

CoeffVector project(const CoeffVector& x, const IndexSet& a) {
  CoeffVector out(x.dim_cap());
  for (const auto& [n, v] : x.entries())
    if (sets::contains(a, n)) out.set(n, v);
  return out;
}

CoeffVector partial_sum(const CoeffVector& x, long long k) {
  if (k < 0 || k > x.dim_cap())
    throw std::invalid_argument("partial_sum: k must lie in [0, dim_cap]");
  CoeffVector out(x.dim_cap());
  for (const auto& [n, v] : x.entries())
    if (n <= k) out.set(n, v);
  return out;
}

CoeffVector truncate(const CoeffVector& x, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("truncate: alpha must be > 0");
  CoeffVector out(x.dim_cap());
  for (const auto& [n, v] : x.entries())
    out.set(n, std::abs(v) > alpha ? sgn(v) * alpha : v);
  return out;
}

GreedyOrdering canonical_ordering(const CoeffVector& x) {
  std::vector<std::pair<double, Index>> by_modulus;
  by_modulus.reserve(x.support_size());
  for (const auto& [n, v] : x.entries()) by_modulus.emplace_back(std::abs(v), n);
  std::sort(by_modulus.begin(), by_modulus.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  GreedyOrdering rho;
  rho.order.reserve(by_modulus.size());
  for (const auto& [_, n] : by_modulus) rho.order.push_back(n);
  return rho;
}

Index ordering_at(const GreedyOrdering& rho, const CoeffVector& x, long long j) {
  if (j < 1) throw std::invalid_argument("ordering_at: positions are 1-based");
  if (j <= static_cast<long long>(rho.order.size()))
    return rho.order[static_cast<std::size_t>(j - 1)];
  long long remaining = j - static_cast<long long>(rho.order.size());
  IndexSet used = sets::normalized(IndexSet(rho.order.begin(), rho.order.end()));
  for (Index n = 1; n <= x.dim_cap(); ++n) {
    if (sets::contains(used, n)) continue;
    if (--remaining == 0) return n;
  }
  throw std::invalid_argument("ordering_at: position exceeds the section");
}

OrderingEnumeration greedy_orderings(const CoeffVector& x, long long cap) {
  if (cap < 1) throw std::invalid_argument("greedy_orderings: cap must be >= 1");

  // Tie classes as runs of equal modulus in the canonical ordering.
  const GreedyOrdering canonical = canonical_ordering(x);
  std::vector<std::vector<Index>> classes;
  for (Index n : canonical.order) {
    const double mod = std::abs(x.coeff(n));
    if (!classes.empty() && std::abs(x.coeff(classes.back().front())) == mod)
      classes.back().push_back(n);
    else
      classes.push_back({n});
  }

  OrderingEnumeration out;
  out.total_count = 1;
  for (const auto& cls : classes) {
    for (std::size_t i = 2; i <= cls.size(); ++i) {
      if (out.total_count > kCountSentinel / static_cast<long long>(i)) {
        out.total_count = kCountSentinel;
        break;
      }
      out.total_count *= static_cast<long long>(i);
    }
  }

  // Odometer over per-class permutations; ascending arrangement first in
  // every class makes the first emitted ordering the canonical one.
  std::vector<std::vector<Index>> perm(classes.begin(), classes.end());
  while (true) {
    GreedyOrdering rho;
    rho.tie_policy = "enumerated";
    for (const auto& cls : perm)
      rho.order.insert(rho.order.end(), cls.begin(), cls.end());
    if (rho.order == canonical.order) rho.tie_policy = canonical.tie_policy;
    out.orderings.push_back(std::move(rho));
    if (static_cast<long long>(out.orderings.size()) == cap) {
      // Is there a next permutation anywhere?
      for (auto& cls : perm)
        if (std::next_permutation(cls.begin(), cls.end())) {
          out.overflow = true;
          return out;
        }
      return out;
    }
    std::size_t i = perm.size();
    bool advanced = false;
    while (i-- > 0) {
      if (std::next_permutation(perm[i].begin(), perm[i].end())) {
        advanced = true;
        break;
      }
      // next_permutation wrapped this class back to ascending; carry on.
    }
    if (!advanced) return out;
  }
}

}  // namespace gbw

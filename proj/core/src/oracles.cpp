#include "gbw/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "gbw/errors.hpp"
#include "gbw/limits.hpp"

namespace gbw {

std::string to_string(SigmaTag t) {
  switch (t) {
    case SigmaTag::Best: return "Best";
    case SigmaTag::Proj: return "Proj";
    case SigmaTag::Partial: return "Partial";
    case SigmaTag::LeftDK: return "LeftDK";
    case SigmaTag::RightDK: return "RightDK";
  }
  throw std::logic_error("unknown SigmaTag");
}

SigmaTag sigma_tag_from_string(const std::string& s) {
  if (s == "Best") return SigmaTag::Best;
  if (s == "Proj") return SigmaTag::Proj;
  if (s == "Partial") return SigmaTag::Partial;
  if (s == "LeftDK") return SigmaTag::LeftDK;
  if (s == "RightDK") return SigmaTag::RightDK;
  throw std::invalid_argument("unknown sigma kind: " + s);
}

void SigmaKind::validate() const {
  const bool dk = tag == SigmaTag::LeftDK || tag == SigmaTag::RightDK;
  if (dk != ordering.has_value())
    throw std::invalid_argument(
        "SigmaKind: an ordering is required exactly for the DK kinds");
}

namespace detail {

namespace {

// Positions of `mask` sorted by decreasing |value|, index-ascending ties.
std::vector<int> positions_by_modulus(const NormTable& t, std::uint32_t mask) {
  std::vector<int> pos;
  for (int i = 0; i < t.width(); ++i)
    if (mask & (1u << i)) pos.push_back(i);
  std::stable_sort(pos.begin(), pos.end(), [&](int a, int b) {
    return std::abs(t.values()[static_cast<std::size_t>(a)]) >
           std::abs(t.values()[static_cast<std::size_t>(b)]);
  });
  return pos;
}

// Visits all k-subsets of pool positions as masks.
template <typename Fn>
void for_each_position_subset(const std::vector<int>& pool, long long k, Fn&& fn) {
  const long long n = static_cast<long long>(pool.size());
  if (k > n) return;
  if (k == 0) {
    fn(0u);
    return;
  }
  std::vector<long long> pick(static_cast<std::size_t>(k));
  for (long long i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
  while (true) {
    std::uint32_t m = 0;
    for (long long i = 0; i < k; ++i)
      m |= 1u << pool[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])];
    fn(m);
    long long i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++pick[static_cast<std::size_t>(i)];
    for (long long j = i + 1; j < k; ++j)
      pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace

double gamma_t(const NormTable& t, std::uint32_t vec_mask, long long m) {
  const long long k = std::popcount(vec_mask);
  if (m >= k) return 0.0;
  if (m == 0) return t[vec_mask];

  const std::vector<int> by_mod = positions_by_modulus(t, vec_mask);
  const double threshold =
      std::abs(t.values()[static_cast<std::size_t>(by_mod[static_cast<std::size_t>(m - 1)])]);

  std::uint32_t mandatory = 0;
  std::vector<int> ties;
  for (int i : by_mod) {
    const double mod = std::abs(t.values()[static_cast<std::size_t>(i)]);
    if (mod > threshold)
      mandatory |= 1u << i;
    else if (mod == threshold)
      ties.push_back(i);
  }
  const long long slots = m - std::popcount(mandatory);

  // Guard before enumerating the member sets.
  long long fam = 1;
  {
    const long long tn = static_cast<long long>(ties.size());
    long long c = 1;
    const long long kk = std::min(slots, tn - slots);
    for (long long i = 1; i <= kk; ++i) c = c * (tn - kk + i) / i;
    fam = c;
  }
  if (fam > enum_limits().family_cap)
    throw EnumerationOverflowError("greedy family of size " + std::to_string(fam) +
                                   " exceeds the member cap");

  double worst = 0.0;
  for_each_position_subset(ties, slots, [&](std::uint32_t chosen) {
    const std::uint32_t member = mandatory | chosen;
    worst = std::max(worst, t[vec_mask & ~member]);
  });
  return worst;
}

double min_norm_dropping(const NormTable& t, std::uint32_t vec_mask,
                         std::uint32_t allowed, long long m) {
  std::vector<int> pool;
  for (int i = 0; i < t.width(); ++i)
    if (allowed & (1u << i)) pool.push_back(i);
  double best = t[vec_mask];  // dropping nothing
  const long long top = std::min<long long>(m, static_cast<long long>(pool.size()));
  for (long long k = 1; k <= top; ++k)
    for_each_position_subset(pool, k, [&](std::uint32_t s) {
      best = std::min(best, t[vec_mask & ~s]);
    });
  return best;
}

double sigma_best_t(const NormTable& t, std::uint32_t vec_mask, long long m) {
  return min_norm_dropping(t, vec_mask, vec_mask, m);
}

double sigma_proj_t(const NormTable& t, std::uint32_t vec_mask, long long m) {
  const long long k = std::popcount(vec_mask);
  const long long size = std::min(m, k);
  std::vector<int> pool;
  for (int i = 0; i < t.width(); ++i)
    if (vec_mask & (1u << i)) pool.push_back(i);
  double best = size == 0 ? t[vec_mask] : std::numeric_limits<double>::infinity();
  for_each_position_subset(pool, size, [&](std::uint32_t s) {
    best = std::min(best, t[vec_mask & ~s]);
  });
  return best;
}

double sigma_partial_t(const NormTable& t, std::uint32_t vec_mask, long long m) {
  double best = t[vec_mask];  // n = 0
  std::uint32_t prefix = 0;
  for (int i = 0; i < t.width(); ++i) {
    if (!(vec_mask & (1u << i))) continue;
    if (t.window()[static_cast<std::size_t>(i)] > m) break;
    prefix |= 1u << i;
    best = std::min(best, t[vec_mask & ~prefix]);
  }
  return best;
}

}  // namespace detail

double gamma(const SpaceSpec& space, const CoeffVector& x, long long m) {
  if (m < 0) throw std::invalid_argument("gamma: m must be >= 0");
  if (m > space.dim_cap) throw std::invalid_argument("gamma: m exceeds dim_cap");
  if (m >= static_cast<long long>(x.support_size())) {
    // Every greedy set then contains the whole support, leaving remainder 0
    // (gamma_0 of the zero vector included).
    return m == 0 ? eval_norm(space, x) : 0.0;
  }
  const NormTable t = NormTable::for_vector(space, x);
  return detail::gamma_t(t, t.full_mask(), m);
}

namespace {

void validate_ordering_for(const GreedyOrdering& rho, const CoeffVector& x) {
  std::set<Index> seen;
  for (std::size_t i = 0; i < rho.order.size(); ++i) {
    if (!seen.insert(rho.order[i]).second)
      throw std::invalid_argument("greedy ordering must be injective");
    if (i > 0 && std::abs(x.coeff(rho.order[i - 1])) < std::abs(x.coeff(rho.order[i])))
      throw std::invalid_argument("greedy ordering must be modulus-decreasing");
  }
  for (const auto& [n, _] : x.entries())
    if (!seen.count(n))
      throw std::invalid_argument("greedy ordering must cover supp(x)");
}

}  // namespace

double sigma(const SpaceSpec& space, const SigmaKind& kind, const CoeffVector& x,
             long long m) {
  kind.validate();
  if (m < 0) throw std::invalid_argument("sigma: m must be >= 0");
  if (x.empty()) return 0.0;

  if (kind.tag == SigmaTag::Best && !suppression_unconditional_const_one(space))
    throw UnsupportedOperationError(
        "coefficient optimization unsupported: sigma(Best) requires a space "
        "certified suppression unconditional with constant 1");

  const NormTable t = NormTable::for_vector(space, x);
  const std::uint32_t full = t.full_mask();
  switch (kind.tag) {
    case SigmaTag::Best:
      return detail::sigma_best_t(t, full, m);
    case SigmaTag::Proj:
      return detail::sigma_proj_t(t, full, m);
    case SigmaTag::Partial:
      return detail::sigma_partial_t(t, full, m);
    case SigmaTag::LeftDK: {
      validate_ordering_for(*kind.ordering, x);
      const Index rho1 = ordering_at(*kind.ordering, x, 1);
      std::uint32_t allowed = 0;
      for (int i = 0; i < t.width(); ++i)
        if (t.window()[static_cast<std::size_t>(i)] < rho1) allowed |= 1u << i;
      return detail::min_norm_dropping(t, full, allowed, m);
    }
    case SigmaTag::RightDK: {
      validate_ordering_for(*kind.ordering, x);
      if (m == 0) return t[full];  // only A = {} qualifies
      const Index tau = ordering_at(*kind.ordering, x, m);
      std::uint32_t allowed = 0;
      for (int i = 0; i < t.width(); ++i)
        if (t.window()[static_cast<std::size_t>(i)] > tau) allowed |= 1u << i;
      return detail::min_norm_dropping(t, full, allowed, m);
    }
  }
  throw std::logic_error("unknown SigmaTag");
}

}  // namespace gbw

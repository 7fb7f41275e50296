#pragma once

// Independent reference implementations used to cross-validate the fast
// paths. Everything here enumerates the defining quantifiers literally:
// subsets as index sets, admissibility straight from the family rule, the
// rank assignment in the dichotomous norm as a sup over all bijections
// whenever the set is small enough to afford it.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "gbw/coeff_vector.hpp"
#include "gbw/greedy.hpp"
#include "gbw/space.hpp"

namespace oracle_ref {

using gbw::CoeffVector;
using gbw::GreedyOrdering;
using gbw::Index;
using gbw::IndexSet;
using gbw::SpaceSpec;

inline bool ref_is_pow2(Index n) {
  Index p = 1;
  while (p < n) p *= 2;
  return p == n;
}

inline double ref_norm(const SpaceSpec& space, const CoeffVector& x) {
  switch (space.kind) {
    case gbw::SpaceKind::WeightedL1: {
      double total = 0.0;
      for (const auto& [n, v] : x.entries()) total += space.weights.at(n) * std::abs(v);
      return total;
    }
    case gbw::SpaceKind::PlainLp: {
      double total = 0.0;
      for (const auto& [n, v] : x.entries()) total += std::pow(std::abs(v), space.p);
      return std::pow(total, 1.0 / space.p);
    }
    default: break;
  }

  const IndexSet supp = x.support();
  const std::size_t k = supp.size();
  double best = 0.0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
    IndexSet f;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (std::uint64_t{1} << i)) f.push_back(supp[i]);
    const Index sz = static_cast<Index>(f.size());
    if (space.kind == gbw::SpaceKind::SchreierSqrtWeighted) {
      if (std::sqrt(static_cast<double>(f.front())) + 1e-12 <
          static_cast<double>(sz))
        continue;
      double val = 0.0;
      for (Index n : f) val += space.weights.at(n) * std::abs(x.coeff(n));
      best = std::max(best, val);
    } else {
      if (f.front() < sz) continue;
      bool in_d = true;
      for (Index n : f) in_d = in_d && ref_is_pow2(n);
      std::vector<double> mods;
      for (Index n : f) mods.push_back(std::abs(x.coeff(n)));
      std::vector<double> weights;
      for (Index r = 1; r <= sz; ++r)
        weights.push_back(in_d ? 1.0 / std::sqrt(static_cast<double>(r))
                               : 1.0 / static_cast<double>(r));
      if (f.size() <= 6) {
        // Literal sup over every bijection F -> [1, |F|].
        std::vector<std::size_t> perm(f.size());
        std::iota(perm.begin(), perm.end(), 0);
        double sup = 0.0;
        do {
          double val = 0.0;
          for (std::size_t i = 0; i < f.size(); ++i) val += weights[perm[i]] * mods[i];
          sup = std::max(sup, val);
        } while (std::next_permutation(perm.begin(), perm.end()));
        best = std::max(best, sup);
      } else {
        std::sort(mods.begin(), mods.end(), std::greater<double>());
        double val = 0.0;
        for (std::size_t i = 0; i < mods.size(); ++i) val += weights[i] * mods[i];
        best = std::max(best, val);
      }
    }
  }
  return best;
}

// Brute-force greedy-set filter over all size-m subsets of [1, scan_hi].
inline std::vector<IndexSet> ref_greedy_sets(const CoeffVector& x, long long m,
                                             Index scan_hi) {
  std::vector<IndexSet> out;
  IndexSet pool = gbw::sets::range(1, scan_hi);
  if (m == 0) return {IndexSet{}};
  if (m > static_cast<long long>(pool.size())) return out;
  std::vector<std::size_t> pick(static_cast<std::size_t>(m));
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    IndexSet cand;
    for (std::size_t p : pick) cand.push_back(pool[p]);
    double min_in = std::numeric_limits<double>::infinity();
    for (Index n : cand) min_in = std::min(min_in, std::abs(x.coeff(n)));
    double max_out = 0.0;
    for (const auto& [n, v] : x.entries())
      if (!gbw::sets::contains(cand, n)) max_out = std::max(max_out, std::abs(v));
    if (min_in >= max_out) out.push_back(cand);

    std::size_t i = pick.size();
    bool advanced = false;
    while (i-- > 0) {
      if (pick[i] != i + pool.size() - pick.size()) {
        ++pick[i];
        for (std::size_t j = i + 1; j < pick.size(); ++j) pick[j] = pick[j - 1] + 1;
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  return out;
}

inline double ref_gamma(const SpaceSpec& space, const CoeffVector& x, long long m,
                        Index scan_hi) {
  if (m >= static_cast<long long>(x.support_size()))
    return m == 0 ? ref_norm(space, x) : 0.0;
  double worst = 0.0;
  for (const IndexSet& lam : ref_greedy_sets(x, m, scan_hi)) {
    const CoeffVector rem =
        gbw::project(x, gbw::sets::set_minus(x.support(), lam));
    worst = std::max(worst, ref_norm(space, rem));
  }
  return worst;
}

// Literal subset scans for the five error functionals.
inline double ref_sigma_proj(const SpaceSpec& space, const CoeffVector& x,
                             long long m) {
  const IndexSet supp = x.support();
  const std::size_t k = supp.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    IndexSet a;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (std::uint64_t{1} << i)) a.push_back(supp[i]);
    if (static_cast<long long>(a.size()) > m) continue;
    best = std::min(best,
                    ref_norm(space, gbw::project(x, gbw::sets::set_minus(supp, a))));
  }
  return best;
}

inline double ref_sigma_best(const SpaceSpec& space, const CoeffVector& x,
                             long long m) {
  return ref_sigma_proj(space, x, m);  // valid on 1-suppression-unconditional spaces
}

inline double ref_sigma_partial(const SpaceSpec& space, const CoeffVector& x,
                                long long m) {
  double best = std::numeric_limits<double>::infinity();
  for (long long n = 0; n <= m; ++n) {
    if (n > x.dim_cap()) break;
    const CoeffVector rem =
        gbw::project(x, gbw::sets::set_minus(x.support(),
                                             gbw::sets::range(1, n)));
    best = std::min(best, ref_norm(space, rem));
  }
  return best;
}

inline double ref_sigma_left(const SpaceSpec& space, const CoeffVector& x,
                             const GreedyOrdering& rho, long long m) {
  if (x.empty()) return 0.0;
  const Index rho1 = rho.order.front();
  const IndexSet supp = x.support();
  IndexSet allowed;
  for (Index n : supp)
    if (n < rho1) allowed.push_back(n);
  double best = ref_norm(space, x);
  const std::size_t k = allowed.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
    IndexSet a;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (std::uint64_t{1} << i)) a.push_back(allowed[i]);
    if (static_cast<long long>(a.size()) > m) continue;
    best = std::min(best,
                    ref_norm(space, gbw::project(x, gbw::sets::set_minus(supp, a))));
  }
  return best;
}

inline double ref_sigma_right(const SpaceSpec& space, const CoeffVector& x,
                              const GreedyOrdering& rho, long long m) {
  if (x.empty()) return 0.0;
  if (m == 0) return ref_norm(space, x);
  const Index tau = gbw::ordering_at(rho, x, m);
  const IndexSet supp = x.support();
  IndexSet allowed;
  for (Index n : supp)
    if (n > tau) allowed.push_back(n);
  double best = ref_norm(space, x);
  const std::size_t k = allowed.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
    IndexSet a;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (std::uint64_t{1} << i)) a.push_back(allowed[i]);
    if (static_cast<long long>(a.size()) > m) continue;
    best = std::min(best,
                    ref_norm(space, gbw::project(x, gbw::sets::set_minus(supp, a))));
  }
  return best;
}

}  // namespace oracle_ref

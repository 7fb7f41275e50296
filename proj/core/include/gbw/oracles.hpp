#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gbw/coeff_vector.hpp"
#include "gbw/greedy.hpp"
#include "gbw/norm_table.hpp"
#include "gbw/space.hpp"

namespace gbw {

enum class SigmaTag { Best, Proj, Partial, LeftDK, RightDK };

std::string to_string(SigmaTag t);
SigmaTag sigma_tag_from_string(const std::string& s);

// Which benchmark error functional to evaluate. The DK variants carry the
// greedy ordering they are taken against.
struct SigmaKind {
  SigmaTag tag = SigmaTag::Best;
  std::optional<GreedyOrdering> ordering;

  static SigmaKind best() { return {SigmaTag::Best, std::nullopt}; }
  static SigmaKind proj() { return {SigmaTag::Proj, std::nullopt}; }
  static SigmaKind partial() { return {SigmaTag::Partial, std::nullopt}; }
  static SigmaKind left_dk(GreedyOrdering rho) {
    return {SigmaTag::LeftDK, std::move(rho)};
  }
  static SigmaKind right_dk(GreedyOrdering rho) {
    return {SigmaTag::RightDK, std::move(rho)};
  }

  void validate() const;  // ordering present iff a DK tag
};

// gamma_m(x): the worst greedy remainder over the full family G(x, m).
// Exact; refuses (EnumerationOverflowError) rather than sampling when the
// family exceeds the member cap. gamma_0 = ||x||; gamma_m = 0 once
// m >= |supp(x)|.
double gamma(const SpaceSpec& space, const CoeffVector& x, long long m);

// The five benchmark error functionals at size m:
//   Best    min over A subset supp(x), |A| <= m of ||x - P_A(x)|| (valid as
//           the free-coefficient infimum because every supported space is
//           suppression unconditional with constant 1)
//   Proj    min over |A| = min(m, |supp|) projections (same value as the
//           |A| <= m scan: padding realizes smaller sets at exact size m)
//   Partial min over 0 <= n <= m of ||x - S_n(x)||
//   LeftDK  min over |A| <= m with max A < rho(1)
//   RightDK min over |A| <= m with min A > rho(m); m = 0 gives ||x||
double sigma(const SpaceSpec& space, const SigmaKind& kind, const CoeffVector& x,
             long long m);

namespace detail {

// Table-based cores used by the scan loops. `vec_mask` selects the
// restriction P_M(z) of the table's vector that plays the role of x; every
// selected position must carry a nonzero value.
double gamma_t(const NormTable& t, std::uint32_t vec_mask, long long m);
double sigma_best_t(const NormTable& t, std::uint32_t vec_mask, long long m);
double sigma_proj_t(const NormTable& t, std::uint32_t vec_mask, long long m);
double sigma_partial_t(const NormTable& t, std::uint32_t vec_mask, long long m);

// min over submasks s of `allowed` with popcount(s) <= m of t[vec_mask & ~s].
double min_norm_dropping(const NormTable& t, std::uint32_t vec_mask,
                         std::uint32_t allowed, long long m);

}  // namespace detail

}  // namespace gbw

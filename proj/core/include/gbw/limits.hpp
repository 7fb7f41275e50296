#pragma once

namespace gbw {

// Global enumeration guards. The CLI sets these once at startup (honoring
// GBW_MAX_ENUM); everything downstream treats them as read-only.
struct EnumLimits {
  // Largest support for which Schreier-type norms and subset-scanning
  // oracles will enumerate exactly (2^support_cap subsets).
  int support_cap = 20;
  // Largest greedy family that will be enumerated member by member.
  long long family_cap = 10000;
};

EnumLimits& enum_limits();

}  // namespace gbw

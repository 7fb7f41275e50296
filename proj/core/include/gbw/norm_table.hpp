#pragma once

#include <cstdint>
#include <vector>

#include "gbw/coeff_vector.hpp"
#include "gbw/space.hpp"

namespace gbw {

// Precomputed restriction norms of one fixed vector z over a small index
// window: entry `mask` holds ||P_M(z)|| for the subset M of the window
// encoded by `mask`. The scan-heavy oracles, estimators and checks query
// thousands of restriction norms of the same vector; building the full
// table once (subset sums for the additive norms, a subset-max sweep over
// admissible sets for the Schreier norms, both exact) turns each query
// into a table lookup.
//
// The Schreier sweep relies on the families being hereditary (subsets of
// admissible sets are admissible), which holds for both family rules.
class NormTable {
 public:
  // `window` sorted and duplicate-free, values[i] pairing with window[i].
  NormTable(const SpaceSpec& space, IndexSet window, std::vector<double> values);

  // Table over supp(x) with x's own coefficients.
  static NormTable for_vector(const SpaceSpec& space, const CoeffVector& x);

  // Table over `window` for the vector equal to x on supp(x) and 1 on
  // window \ supp(x). Restrictions of that vector realize every
  // x + 1_{eps A} + 1_{delta B} needed by the set-quantified scans
  // (signs are inert: the norms see moduli only).
  static NormTable ones_padded(const SpaceSpec& space, const CoeffVector& x,
                               const IndexSet& window);

  double norm(std::uint32_t mask) const { return table_[mask]; }
  double operator[](std::uint32_t mask) const { return table_[mask]; }

  int width() const { return width_; }
  std::uint32_t full_mask() const { return full_; }
  const IndexSet& window() const { return window_; }
  const std::vector<double>& values() const { return values_; }

  // Position of index n in the window, -1 when absent.
  int pos_of(Index n) const;
  // Mask of a subset of the window (throws if not a subset).
  std::uint32_t mask_of(const IndexSet& subset) const;
  IndexSet set_of(std::uint32_t mask) const;

 private:
  SpaceKind kind_;
  IndexSet window_;
  std::vector<double> values_;
  std::vector<double> table_;
  int width_ = 0;
  std::uint32_t full_ = 0;
};

}  // namespace gbw

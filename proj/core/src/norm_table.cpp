#include "gbw/norm_table.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "gbw/errors.hpp"
#include "gbw/limits.hpp"

namespace gbw {

namespace {

inline int lowest_bit(std::uint32_t m) { return std::countr_zero(m); }

}  // namespace

NormTable::NormTable(const SpaceSpec& space, IndexSet window, std::vector<double> values)
    : kind_(space.kind), window_(std::move(window)), values_(std::move(values)) {
  space.validate();
  if (window_.size() != values_.size())
    throw std::invalid_argument("NormTable: window/value length mismatch");
  if (!std::is_sorted(window_.begin(), window_.end()) ||
      std::adjacent_find(window_.begin(), window_.end()) != window_.end())
    throw std::invalid_argument("NormTable: window must be sorted and unique");
  if (!window_.empty() && (window_.front() < 1 || window_.back() > space.dim_cap))
    throw std::invalid_argument("NormTable: window outside [1, dim_cap]");

  width_ = static_cast<int>(window_.size());
  if (width_ > enum_limits().support_cap || width_ > 26)
    throw EnumerationOverflowError("NormTable over " + std::to_string(width_) +
                                   " indices exceeds the cap");
  full_ = (width_ == 0) ? 0u : ((1u << width_) - 1u);
  const std::size_t size = static_cast<std::size_t>(full_) + 1;
  table_.assign(size, 0.0);
  if (width_ == 0) return;

  switch (kind_) {
    case SpaceKind::WeightedL1: {
      std::vector<double> contrib(static_cast<std::size_t>(width_));
      for (int i = 0; i < width_; ++i)
        contrib[static_cast<std::size_t>(i)] =
            space.weights.at(window_[static_cast<std::size_t>(i)]) *
            std::abs(values_[static_cast<std::size_t>(i)]);
      for (std::uint32_t m = 1; m <= full_; ++m)
        table_[m] = table_[m & (m - 1)] + contrib[static_cast<std::size_t>(lowest_bit(m))];
      break;
    }
    case SpaceKind::PlainLp: {
      std::vector<double> contrib(static_cast<std::size_t>(width_));
      for (int i = 0; i < width_; ++i)
        contrib[static_cast<std::size_t>(i)] =
            std::pow(std::abs(values_[static_cast<std::size_t>(i)]), space.p);
      for (std::uint32_t m = 1; m <= full_; ++m)
        table_[m] = table_[m & (m - 1)] + contrib[static_cast<std::size_t>(lowest_bit(m))];
      for (std::uint32_t m = 1; m <= full_; ++m)
        table_[m] = std::pow(table_[m], 1.0 / space.p);
      break;
    }
    case SpaceKind::SchreierSqrtWeighted: {
      // Weighted subset sums first, then the max over admissible subsets.
      std::vector<double> sums(size, 0.0), contrib(static_cast<std::size_t>(width_));
      for (int i = 0; i < width_; ++i)
        contrib[static_cast<std::size_t>(i)] =
            space.weights.at(window_[static_cast<std::size_t>(i)]) *
            std::abs(values_[static_cast<std::size_t>(i)]);
      for (std::uint32_t m = 1; m <= full_; ++m)
        sums[m] = sums[m & (m - 1)] + contrib[static_cast<std::size_t>(lowest_bit(m))];
      for (std::uint32_t m = 1; m <= full_; ++m) {
        const Index min_idx = window_[static_cast<std::size_t>(lowest_bit(m))];
        const Index sz = std::popcount(m);
        double best = (min_idx >= sz * sz) ? sums[m] : 0.0;
        for (std::uint32_t rest = m; rest;) {
          const std::uint32_t bit = rest & (~rest + 1);
          best = std::max(best, table_[m ^ bit]);
          rest ^= bit;
        }
        table_[m] = best;
      }
      break;
    }
    case SpaceKind::SchreierDichotomous: {
      // Rank weights pair with moduli sorted decreasingly; positions are
      // walked in that global order so no per-mask sort happens.
      std::vector<int> by_modulus(static_cast<std::size_t>(width_));
      for (int i = 0; i < width_; ++i) by_modulus[static_cast<std::size_t>(i)] = i;
      std::stable_sort(by_modulus.begin(), by_modulus.end(), [&](int a, int b) {
        return std::abs(values_[static_cast<std::size_t>(a)]) >
               std::abs(values_[static_cast<std::size_t>(b)]);
      });
      std::uint32_t pow2_mask = 0;
      for (int i = 0; i < width_; ++i)
        if (is_power_of_two(window_[static_cast<std::size_t>(i)])) pow2_mask |= 1u << i;

      std::vector<double> inv_r(static_cast<std::size_t>(width_) + 1, 0.0);
      std::vector<double> inv_sqrt_r(static_cast<std::size_t>(width_) + 1, 0.0);
      for (int r = 1; r <= width_; ++r) {
        inv_r[static_cast<std::size_t>(r)] = 1.0 / r;
        inv_sqrt_r[static_cast<std::size_t>(r)] = 1.0 / std::sqrt(static_cast<double>(r));
      }

      for (std::uint32_t m = 1; m <= full_; ++m) {
        const Index min_idx = window_[static_cast<std::size_t>(lowest_bit(m))];
        const Index sz = std::popcount(m);
        double best = 0.0;
        if (min_idx >= sz) {
          const bool in_d = (m & ~pow2_mask) == 0;
          const std::vector<double>& w = in_d ? inv_sqrt_r : inv_r;
          double val = 0.0;
          int rank = 0;
          for (int i : by_modulus) {
            if (m & (1u << i)) {
              ++rank;
              val += w[static_cast<std::size_t>(rank)] *
                     std::abs(values_[static_cast<std::size_t>(i)]);
            }
          }
          best = val;
        }
        for (std::uint32_t rest = m; rest;) {
          const std::uint32_t bit = rest & (~rest + 1);
          best = std::max(best, table_[m ^ bit]);
          rest ^= bit;
        }
        table_[m] = best;
      }
      break;
    }
  }
}

NormTable NormTable::for_vector(const SpaceSpec& space, const CoeffVector& x) {
  IndexSet supp = x.support();
  std::vector<double> vals(supp.size());
  for (std::size_t i = 0; i < supp.size(); ++i) vals[i] = x.coeff(supp[i]);
  return NormTable(space, std::move(supp), std::move(vals));
}

NormTable NormTable::ones_padded(const SpaceSpec& space, const CoeffVector& x,
                                 const IndexSet& window) {
  if (!sets::is_subset(x.support(), window))
    throw std::invalid_argument("ones_padded: supp(x) must lie inside the window");
  std::vector<double> vals(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) {
    const double c = x.coeff(window[i]);
    vals[i] = (c == 0.0) ? 1.0 : c;
  }
  // x may genuinely vanish at a support index only if it was never set;
  // coeff() returning 0 identifies exactly the off-support positions.
  return NormTable(space, window, std::move(vals));
}

int NormTable::pos_of(Index n) const {
  auto it = std::lower_bound(window_.begin(), window_.end(), n);
  if (it == window_.end() || *it != n) return -1;
  return static_cast<int>(it - window_.begin());
}

std::uint32_t NormTable::mask_of(const IndexSet& subset) const {
  std::uint32_t m = 0;
  for (Index n : subset) {
    const int pos = pos_of(n);
    if (pos < 0)
      throw std::invalid_argument("mask_of: index " + std::to_string(n) +
                                  " is not in the window");
    m |= 1u << pos;
  }
  return m;
}

IndexSet NormTable::set_of(std::uint32_t mask) const {
  IndexSet out;
  for (int i = 0; i < width_; ++i)
    if (mask & (1u << i)) out.push_back(window_[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace gbw

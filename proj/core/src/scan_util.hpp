#pragma once

// Shared enumeration helpers for the scan loops (internal).

#include <cstdint>
#include <functional>
#include <vector>

#include "gbw/coeff_vector.hpp"

namespace gbw::scan {

// Visits all k-subsets of items in lexicographic order; fn returning false
// stops the walk. Returns false iff stopped early.
inline bool for_each_combination(const IndexSet& items, long long k,
                                 const std::function<bool(const IndexSet&)>& fn) {
  const long long n = static_cast<long long>(items.size());
  if (k < 0 || k > n) return true;
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

// Visits all k-subsets of bit positions drawn from pool (ascending
// positions), emitting each as a mask, in lexicographic order of the
// chosen position tuples.
template <typename Fn>
void sized_subsets(const std::vector<int>& pool, long long k, Fn&& fn) {
  const long long n = static_cast<long long>(pool.size());
  if (k < 0 || k > n) return;
  if (k == 0) {
    fn(std::uint32_t{0});
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

inline std::vector<int> positions_of(std::uint32_t mask, int width) {
  std::vector<int> pos;
  for (int i = 0; i < width; ++i)
    if (mask & (1u << i)) pos.push_back(i);
  return pos;
}

}  // namespace gbw::scan

#pragma once

#include <cstdint>
#include <vector>

namespace omw {

// Binomial coefficient, saturating instead of overflowing.
inline std::uint64_t binom_u64(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(r);
}

// Colex rank of a strictly increasing k-subset of {0,…,n−1}: the position of
// the subset in colexicographic order, Σ C(a_i, i+1).
inline std::uint64_t colex_rank(const std::vector<int>& sorted_subset) {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < sorted_subset.size(); ++i)
    r += binom_u64(sorted_subset[i], static_cast<int>(i) + 1);
  return r;
}

// All k-subsets of {0,…,n−1} in colex order, flattened (k entries each,
// strictly increasing).  Position i of the flat list belongs to the subset of
// colex rank i / k.
inline std::vector<int> subsets_colex_flat(int n, int k) {
  std::vector<int> flat;
  if (k < 0 || k > n) return flat;
  if (k == 0) return flat;  // the single empty subset carries no entries
  flat.reserve(static_cast<std::size_t>(binom_u64(n, k)) *
               static_cast<std::size_t>(k));
  std::vector<int> cur(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i;
  while (true) {
    flat.insert(flat.end(), cur.begin(), cur.end());
    // Advance in colex order: bump the lowest slot that can move without
    // touching the slots above it, resetting everything below.
    int i = 0;
    while (i < k) {
      int cap = (i + 1 < k) ? cur[static_cast<std::size_t>(i) + 1] : n;
      if (cur[static_cast<std::size_t>(i)] + 1 < cap) break;
      ++i;
    }
    if (i == k) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = 0; j < i; ++j) cur[static_cast<std::size_t>(j)] = j;
  }
  return flat;
}

}  // namespace omw

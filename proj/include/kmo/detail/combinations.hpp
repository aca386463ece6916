#pragma once

#include <cstdint>
#include <vector>

namespace kmo::detail {

/// Calls f(idx) for every k-combination of {0, ..., n-1} in lexicographic
/// order. idx is a sorted vector of k positions. k = 0 yields one empty call.
template <typename F>
void for_each_combination(int n, int k, F&& f) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    f(static_cast<const std::vector<int>&>(idx));
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

/// Binomial coefficient, saturating at 2^62 to keep budget checks overflow-free.
inline std::uint64_t combination_count(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  const std::uint64_t cap = std::uint64_t{1} << 62;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t m = static_cast<std::uint64_t>(n - k + i);
    if (r > cap / m) return cap;
    r = r * m / static_cast<std::uint64_t>(i);
  }
  return r;
}

}  // namespace kmo::detail

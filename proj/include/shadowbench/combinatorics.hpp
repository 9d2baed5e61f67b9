#pragma once

#include <cstddef>
#include <vector>

namespace shadowbench {

/// C(n, k) saturated at cap+1 so callers can test a budget without overflow.
inline std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::size_t r = 1;
  for (std::size_t i = 0; i < k; ++i) {
    // r <= cap here, so the product fits as long as cap is far from SIZE_MAX.
    r = r * (n - i) / (i + 1);
    if (r > cap) return cap + 1;
  }
  return r;
}

/// Enumerates k-subsets of {0,..,n-1} in lexicographic order.
struct CombinationIter {
  std::vector<int> idx;
  int n = 0;
  int k = 0;

  CombinationIter(int n_, int k_) : n(n_), k(k_) {
    idx.resize(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
  }

  bool valid() const { return k <= n && k >= 0; }

  // Advances to the next subset; false once exhausted.
  bool next() {
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return false;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    return true;
  }
};

}  // namespace shadowbench

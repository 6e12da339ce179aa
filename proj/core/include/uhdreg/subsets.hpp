#ifndef UHDREG_SUBSETS_HPP
#define UHDREG_SUBSETS_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "uhdreg/errors.hpp"

namespace uhdreg {

inline constexpr std::uint64_t kDefaultSubsetBudget = 1'000'000;

/// C(p,k) as a double, saturating at +inf for counts beyond range.
inline double binomial_coefficient(int p, int k) {
  if (k < 0 || p < 0 || k > p) return 0.0;
  k = std::min(k, p - k);
  double result = 1.0;
  for (int i = 1; i <= k; ++i) {
    result *= static_cast<double>(p - k + i) / static_cast<double>(i);
    if (result > std::numeric_limits<double>::max() / 2) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return result;
}

/// Throws budget_error if enumerating all size-k subsets of {1..p} would
/// exceed `budget` subsets.
inline void check_subset_budget(int p, int k, std::uint64_t budget) {
  double count = binomial_coefficient(p, k);
  if (count > static_cast<double>(budget)) {
    throw budget_error("subset enumeration budget exceeded: C(" +
                           std::to_string(p) + "," + std::to_string(k) + ") = " +
                           std::to_string(count) + " > budget " +
                           std::to_string(budget),
                       count);
  }
}

/// Calls fn(subset) for every size-k subset of {0..p-1}, in lexicographic
/// order. The vector passed to fn is reused between calls.
template <typename F>
void for_each_subset(int p, int k, F&& fn) {
  if (k <= 0 || k > p) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(const_cast<const std::vector<int>&>(idx));
    // advance to the next combination
    int i = k - 1;
    while (i >= 0 && idx[i] == p - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace uhdreg

#endif

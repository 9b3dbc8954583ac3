#pragma once

#include <cstddef>

namespace matchbench {

// Max matchings an enumeration may produce before giving up.
inline constexpr std::size_t kDefaultEnumerationBudget = 1'000'000;

// Hard ceiling on the memoized RSD recursion; reachable states number
// C(2n,n), which is ~4e7 at n=14 and already hundreds of MB of memo table.
inline constexpr std::size_t kRsdRecursionHardCap = 14;

// Resource guards for the exact oracle. All are instance sizes (n).
struct OracleLimits {
    std::size_t rsd_recursion_cap = 12;   // exact_rsd_welfare / allocation
    std::size_t deviation_cap = 10;       // exact_deviation_value
    std::size_t exhaustive_cap = 5;       // truthfulness / symmetry sweeps
    std::size_t enumeration_budget = kDefaultEnumerationBudget;
};

} // namespace matchbench

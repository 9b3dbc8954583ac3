// Independent brute-force oracles for the test suites. These deliberately
// take the slow, literal route (explicit permutations, no memoization) so
// they share no code path with the library implementations they check.
#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "matchbench/instance.hpp"

namespace matchbench::testing {

// Maximum welfare over all n! complete matchings.
inline double brute_force_optimal(const Instance& inst) {
    const std::size_t n = inst.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = 0.0;
    do {
        double welfare = 0.0;
        for (std::size_t a = 0; a < n; ++a) welfare += inst.value(a, perm[a]);
        best = std::max(best, welfare);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

namespace detail {

inline double expected_over_ties(const Instance& inst,
                                 const std::vector<std::size_t>& order,
                                 std::size_t step,
                                 std::vector<char>& item_taken) {
    const std::size_t n = inst.size();
    if (step == n) return 0.0;
    const std::size_t agent = order[step];

    double best = -1.0;
    std::vector<std::size_t> favorites;
    for (std::size_t i = 0; i < n; ++i) {
        if (item_taken[i]) continue;
        const double v = inst.value(agent, i);
        if (v > best) {
            best = v;
            favorites.assign(1, i);
        } else if (v == best) {
            favorites.push_back(i);
        }
    }

    double total = 0.0;
    for (const std::size_t i : favorites) {
        item_taken[i] = 1;
        total += inst.value(agent, i) +
                 expected_over_ties(inst, order, step + 1, item_taken);
        item_taken[i] = 0;
    }
    return total / static_cast<double>(favorites.size());
}

} // namespace detail

// Exact expected RSD welfare by iterating every agent order explicitly and
// branching over every tie, with no memoization.
inline double rsd_welfare_by_enumeration(const Instance& inst) {
    const std::size_t n = inst.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<char> item_taken(n, 0);
    double total = 0.0;
    std::size_t orders = 0;
    do {
        total += detail::expected_over_ties(inst, order, 0, item_taken);
        ++orders;
    } while (std::next_permutation(order.begin(), order.end()));
    return total / static_cast<double>(orders);
}

} // namespace matchbench::testing

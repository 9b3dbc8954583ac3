#pragma once

#include "matchbench/instance.hpp"

namespace matchbench {

// A welfare-maximizing complete matching together with its welfare. The
// value is unique even when the matching is not.
struct OptimalResult {
    Matching matching;
    double value;
};

// Adjacency view of the 1-edges of a dichotomous valuation matrix.
struct BipartiteGraph {
    std::size_t n = 0;
    std::vector<std::vector<std::size_t>> adj; // agent -> 1-valued items

    static BipartiteGraph from_instance(const Instance& inst);
};

// Maximum-weight complete matching via the O(n^3) Hungarian algorithm.
// Works for any preference class; the reported value is recomputed from the
// returned matching against the raw inputs.
OptimalResult max_weight_matching(const Instance& inst);

// Maximum-cardinality matching on the 1-edges of a dichotomous instance
// (Hopcroft-Karp), completed to a full matching with zero-value pairs.
// Rejects non-dichotomous instances.
OptimalResult max_cardinality_matching(const Instance& inst);

// Hopcroft-Karp core: fills agent_match/item_match (kUnassigned-terminated)
// and returns the matching cardinality.
std::size_t hopcroft_karp(const BipartiteGraph& g,
                          std::vector<std::size_t>& agent_match,
                          std::vector<std::size_t>& item_match);

} // namespace matchbench

#pragma once

#include <span>
#include <vector>

#include "matchbench/instance.hpp"
#include "matchbench/limits.hpp"
#include "matchbench/mechanisms.hpp"
#include "matchbench/optimal.hpp"

namespace matchbench {

// Per-agent-per-item probabilities induced by a randomized mechanism,
// plus each agent's expected true value. Rows and columns each sum to 1.
struct ExpectedAllocation {
    std::size_t n = 0;
    std::vector<double> probs; // row-major n*n
    std::vector<double> expected_values;

    double prob(std::size_t agent, std::size_t item) const {
        return probs[agent * n + item];
    }
};

// Exact expected RSD welfare by memoized recursion over
// (remaining agents, remaining items) bitset states. Guarded by
// limits.rsd_recursion_cap (hard cap 14).
double exact_rsd_welfare(const Instance& inst, const OracleLimits& limits = {});

// Exact RSD allocation probabilities by forward dynamic programming over
// the same state space.
ExpectedAllocation exact_rsd_allocation(const Instance& inst,
                                        const OracleLimits& limits = {});

// Exact expected *true* value to `agent` under RSD when he picks uniformly
// among favorites of declared_row and everyone else plays truthfully.
double exact_deviation_value(const Instance& inst, std::size_t agent,
                             std::span<const double> declared_row,
                             const OracleLimits& limits = {});

// Every maximum-cardinality matching of a 1-edge bipartite graph. The list
// is exhaustive and duplicate-free; exceeding `budget` matchings raises
// ResourceLimitError.
struct MatchingEnumeration {
    std::vector<Matching> matchings;
    std::size_t cardinality = 0;
};
MatchingEnumeration enumerate_max_matchings(
    const BipartiteGraph& g, std::size_t budget = kDefaultEnumerationBudget);

// How many maximum matchings contain the edge (agent, item); 0 when the
// pair is not an edge of the graph.
std::size_t count_matchings_through_edge(
    const BipartiteGraph& g, std::size_t agent, std::size_t item,
    std::size_t budget = kDefaultEnumerationBudget);

/**
 * Worst deviation gain over every agent and a finite declaration basis.
 * Dichotomous: all 2^n rows per agent (exact arithmetic). Normalized /
 * unit-range RSD: all permutations of the agent's own row plus all
 * dichotomous rows; partial_basis marks the certificate as partial.
 * A mechanism passes on the instance iff max_gain <= 1e-12.
 */
struct TruthfulnessReport {
    bool truthful = true;
    double max_gain = 0.0;
    std::size_t worst_agent = 0;
    std::vector<double> worst_declaration;
    bool partial_basis = false;
};
TruthfulnessReport check_truthfulness(const Instance& inst, MechanismId mech,
                                      const OracleLimits& limits = {});

// Agents with identical rows must have equal expected true value
// (tolerance 1e-12). expected_values reports the exact per-agent values.
struct SymmetryReport {
    bool symmetric = true;
    double max_difference = 0.0;
    std::size_t agent_a = 0, agent_b = 0;
    std::vector<double> expected_values;
};
SymmetryReport check_symmetry(const Instance& inst, MechanismId mech,
                              const OracleLimits& limits = {});

// Builds the dichotomous instance whose rows are the n-bit slices of
// `mask` (row a = bits [a*n, (a+1)*n)).
Instance dichotomous_from_mask(std::size_t n, std::uint32_t mask);

/**
 * Truthfulness + symmetry over every dichotomous n x n instance (n <= 4).
 * Both checks are invariant under agent relabeling, so canonical_only may
 * restrict the sweep to one representative per multiset of rows without
 * losing coverage.
 */
struct SweepReport {
    std::size_t instances = 0;
    std::size_t truthfulness_failures = 0;
    std::size_t symmetry_failures = 0;
    double worst_gain = 0.0;
    double worst_symmetry_diff = 0.0;
    std::uint32_t worst_gain_mask = 0;
    std::uint32_t worst_symmetry_mask = 0;
};
SweepReport sweep_dichotomous_exhaustive(std::size_t n, MechanismId mech,
                                         bool canonical_only = true,
                                         const OracleLimits& limits = {});

} // namespace matchbench

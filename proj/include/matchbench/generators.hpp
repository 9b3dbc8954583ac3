#pragma once

#include <cstdint>

#include "matchbench/instance.hpp"

namespace matchbench {

/**
 * Dichotomous worst-case family for serial dictatorship: n = k + z agents
 * and items, k even. Using 1-based indices, v_a(i) = 1 iff
 *   a = i in {1..k}, or a in {1..k/2} and i in {k/2..k};
 * everything else (including all z trailing "dummy" agents) is 0. The
 * optimal welfare of the result is k.
 */
Instance gen_fact_instance(std::size_t k, std::size_t z);

/**
 * Chunked hardness family: agents and items split into k chunks of
 * n_bar = n/k. Within each chunk the first agent values the chunk's first
 * item at 1, the remaining n_bar - 1 agents value it at eps/k, and every
 * other entry (cross-chunk included) is 0. Optimal welfare is k.
 */
Instance gen_hardness_chunked(std::size_t n, std::size_t k, double eps);

/**
 * Seed-deterministic random instance. Dichotomous: iid Bernoulli(density)
 * entries. Normalized: iid uniform [0,1). UnitRange: uniform rows rescaled
 * so each row's min is exactly 0 and max exactly 1 (constant rows are
 * redrawn). density is only consulted for the dichotomous class.
 */
Instance gen_random(std::size_t n, PreferenceClass cls, double density,
                    std::uint64_t seed);

} // namespace matchbench

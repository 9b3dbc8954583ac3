#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "matchbench/instance.hpp"
#include "matchbench/limits.hpp"
#include "matchbench/optimal.hpp"
#include "matchbench/rng.hpp"

namespace matchbench {

/**
 * What agents report to a mechanism. Same shape as an instance's rows; the
 * domain decides which entries are legal (dichotomous: {0,1}, otherwise
 * [0,1]). Deviations are built with with_row().
 */
class DeclarationProfile {
public:
    DeclarationProfile(std::size_t n, std::vector<double> values,
                       PreferenceClass domain);
    static DeclarationProfile truthful(const Instance& inst);

    DeclarationProfile with_row(std::size_t agent,
                                std::span<const double> row) const;

    std::size_t size() const { return n_; }
    PreferenceClass domain() const { return domain_; }
    double value(std::size_t agent, std::size_t item) const {
        return values_[agent * n_ + item];
    }
    std::span<const double> row(std::size_t agent) const {
        return {values_.data() + agent * n_, n_};
    }

private:
    std::size_t n_;
    PreferenceClass domain_;
    std::vector<double> values_;
};

// 1-edge graph of a dichotomous declaration profile.
BipartiteGraph declaration_graph(const DeclarationProfile& decl);

/**
 * Serial dictatorship with a caller-fixed picking order: each agent in turn
 * receives an item drawn uniformly from his favorite set among the items
 * still available. An agent whose best remaining value is 0 is in a full
 * tie and therefore picks uniformly among all remaining items.
 */
Matching sd_fixed_order(const Instance& inst,
                        std::span<const std::size_t> order, RngStream& rng);

// Random Serial Dictatorship: a uniform order, then sd_fixed_order.
Matching rsd(const Instance& inst, RngStream& rng);

/**
 * Online greedy matching: arrivals are processed in order, each matched to
 * its unmatched neighbor of highest rank (or left unmatched). offline_ranks
 * must be a permutation of {0..m-1}; arrivals[t] lists neighbor indices
 * into the offline side. Returns (arrival, offline) pairs in arrival order.
 */
std::vector<std::pair<std::size_t, std::size_t>> ranking(
    std::span<const std::size_t> offline_ranks,
    const std::vector<std::vector<std::size_t>>& arrivals);

/**
 * Serial dictatorship over a random item ranking, dichotomous only: agents
 * are processed in a random order; an agent declaring 1 for some unmatched
 * item receives the highest-ranked such item, otherwise he is set aside.
 * Set-aside agents and leftover items are paired lowest-index first at the
 * end, so the result is complete. Agent order and item ranks come from two
 * independent sub-streams ("agent-order", "item-ranks").
 */
Matching rsd_star(const Instance& inst, const DeclarationProfile& declared,
                  RngStream& rng);
// Truthful (non-adversarial) play: declared = the instance itself.
Matching rsd_star(const Instance& inst, RngStream& rng);

// Deterministic core of rsd_star with explicit agent order and item ranks;
// used directly when enumerating the mechanism's randomness exactly.
Matching rsd_star_with(const DeclarationProfile& declared,
                       std::span<const std::size_t> order,
                       std::span<const std::size_t> item_rank);

/**
 * Draws one of the maximum-cardinality matchings of the declared 1-edge
 * graph uniformly at random, then completes it lowest-index first.
 * Enumeration is capped at `budget` matchings (ResourceLimitError beyond).
 */
Matching uniform_max_matching(const DeclarationProfile& decl, RngStream& rng,
                              std::size_t budget = kDefaultEnumerationBudget);

// Mechanism identifiers as used by the CLI and result files.
enum class MechanismId { Rsd, SdFixed, RsdStar, UniformMax, Ranking };

const char* to_string(MechanismId id);
MechanismId mechanism_from_string(const std::string& name);

} // namespace matchbench

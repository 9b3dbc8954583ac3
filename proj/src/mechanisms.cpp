#include "matchbench/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "matchbench/errors.hpp"
#include "matchbench/oracle.hpp"

namespace matchbench {

namespace {

void validate_domain(std::size_t n, const std::vector<double>& values,
                     PreferenceClass domain) {
    if (n == 0) throw std::invalid_argument("declarations require n >= 1");
    if (values.size() != n * n) {
        throw std::invalid_argument("declaration profile must hold n*n rows");
    }
    for (std::size_t idx = 0; idx < values.size(); ++idx) {
        const double v = values[idx];
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            throw ValidationError("declaration entry " + std::to_string(idx) +
                                  " outside [0,1]");
        }
        if (domain == PreferenceClass::Dichotomous && v != 0.0 && v != 1.0) {
            throw ValidationError("declaration entry " + std::to_string(idx) +
                                  " not in {0,1} for dichotomous domain");
        }
    }
}

} // namespace

DeclarationProfile::DeclarationProfile(std::size_t n,
                                       std::vector<double> values,
                                       PreferenceClass domain)
    : n_(n), domain_(domain), values_(std::move(values)) {
    validate_domain(n_, values_, domain_);
}

DeclarationProfile DeclarationProfile::truthful(const Instance& inst) {
    return DeclarationProfile(inst.size(), inst.values(),
                              inst.preference_class());
}

DeclarationProfile DeclarationProfile::with_row(
    std::size_t agent, std::span<const double> row) const {
    if (agent >= n_ || row.size() != n_) {
        throw std::invalid_argument("with_row: bad agent index or row length");
    }
    std::vector<double> values = values_;
    std::copy(row.begin(), row.end(), values.begin() + agent * n_);
    return DeclarationProfile(n_, std::move(values), domain_);
}

BipartiteGraph declaration_graph(const DeclarationProfile& decl) {
    if (decl.domain() != PreferenceClass::Dichotomous) {
        throw std::invalid_argument(
            "1-edge graph requires dichotomous declarations");
    }
    BipartiteGraph g;
    g.n = decl.size();
    g.adj.resize(g.n);
    for (std::size_t a = 0; a < g.n; ++a) {
        for (std::size_t i = 0; i < g.n; ++i) {
            if (decl.value(a, i) == 1.0) g.adj[a].push_back(i);
        }
    }
    return g;
}

namespace {

void check_permutation(std::span<const std::size_t> order, std::size_t n,
                       const char* what) {
    if (order.size() != n) {
        throw std::invalid_argument(std::string(what) +
                                    " must have length n");
    }
    std::vector<char> seen(n, 0);
    for (const std::size_t x : order) {
        if (x >= n || seen[x]) {
            throw std::invalid_argument(std::string(what) +
                                        " is not a permutation of 0..n-1");
        }
        seen[x] = 1;
    }
}

} // namespace

Matching sd_fixed_order(const Instance& inst,
                        std::span<const std::size_t> order, RngStream& rng) {
    const std::size_t n = inst.size();
    check_permutation(order, n, "order");

    Matching m(n);
    std::vector<std::size_t> remaining(n);
    for (std::size_t i = 0; i < n; ++i) remaining[i] = i;
    std::vector<std::size_t> favorites;
    favorites.reserve(n);

    for (const std::size_t agent : order) {
        double best = -1.0;
        favorites.clear();
        // Ties are exact value equality; values are stored untouched.
        for (const std::size_t item : remaining) {
            const double v = inst.value(agent, item);
            if (v > best) {
                best = v;
                favorites.clear();
                favorites.push_back(item);
            } else if (v == best) {
                favorites.push_back(item);
            }
        }
        const std::size_t pick = favorites[rng.uniform_index(favorites.size())];
        m.assign(agent, pick);
        remaining.erase(std::find(remaining.begin(), remaining.end(), pick));
    }
    return m;
}

Matching rsd(const Instance& inst, RngStream& rng) {
    const std::vector<std::size_t> order =
        random_permutation(inst.size(), rng);
    return sd_fixed_order(inst, order, rng);
}

std::vector<std::pair<std::size_t, std::size_t>> ranking(
    std::span<const std::size_t> offline_ranks,
    const std::vector<std::vector<std::size_t>>& arrivals) {
    const std::size_t m = offline_ranks.size();
    check_permutation(offline_ranks, m, "offline_ranks");

    std::vector<char> taken(m, 0);
    std::vector<std::pair<std::size_t, std::size_t>> matched;
    for (std::size_t t = 0; t < arrivals.size(); ++t) {
        std::size_t best = Matching::kUnassigned;
        for (const std::size_t u : arrivals[t]) {
            if (u >= m) {
                throw std::invalid_argument(
                    "arrival neighbor index out of range");
            }
            if (taken[u]) continue;
            if (best == Matching::kUnassigned ||
                offline_ranks[u] > offline_ranks[best]) {
                best = u;
            }
        }
        if (best != Matching::kUnassigned) {
            taken[best] = 1;
            matched.emplace_back(t, best);
        }
    }
    return matched;
}

Matching rsd_star_with(const DeclarationProfile& declared,
                       std::span<const std::size_t> order,
                       std::span<const std::size_t> item_rank) {
    const std::size_t n = declared.size();
    if (declared.domain() != PreferenceClass::Dichotomous) {
        throw std::invalid_argument("rsd_star requires dichotomous declarations");
    }
    check_permutation(order, n, "order");
    check_permutation(item_rank, n, "item_rank");

    Matching m(n);
    for (const std::size_t agent : order) {
        std::size_t best = Matching::kUnassigned;
        for (std::size_t item = 0; item < n; ++item) {
            if (m.item_used(item) || declared.value(agent, item) != 1.0) {
                continue;
            }
            if (best == Matching::kUnassigned ||
                item_rank[item] > item_rank[best]) {
                best = item;
            }
        }
        if (best != Matching::kUnassigned) m.assign(agent, best);
        // otherwise the agent is set aside for the final fill
    }
    complete_lowest_index(m);
    return m;
}

Matching rsd_star(const Instance& inst, const DeclarationProfile& declared,
                  RngStream& rng) {
    const std::size_t n = inst.size();
    if (inst.preference_class() != PreferenceClass::Dichotomous) {
        throw std::invalid_argument("rsd_star requires a dichotomous instance");
    }
    if (declared.size() != n) {
        throw std::invalid_argument(
            "declaration profile size does not match instance");
    }

    RngStream order_rng = rng.derive("agent-order");
    RngStream rank_rng = rng.derive("item-ranks");
    const std::vector<std::size_t> order = random_permutation(n, order_rng);
    const std::vector<std::size_t> item_rank =
        random_permutation(n, rank_rng);
    return rsd_star_with(declared, order, item_rank);
}

Matching rsd_star(const Instance& inst, RngStream& rng) {
    return rsd_star(inst, DeclarationProfile::truthful(inst), rng);
}

Matching uniform_max_matching(const DeclarationProfile& decl, RngStream& rng,
                              std::size_t budget) {
    const MatchingEnumeration all =
        enumerate_max_matchings(declaration_graph(decl), budget);
    const std::size_t pick = rng.uniform_index(all.matchings.size());
    Matching m = all.matchings[pick];
    complete_lowest_index(m);
    return m;
}

const char* to_string(MechanismId id) {
    switch (id) {
        case MechanismId::Rsd: return "rsd";
        case MechanismId::SdFixed: return "sd-fixed";
        case MechanismId::RsdStar: return "rsd-star";
        case MechanismId::UniformMax: return "uniform-max";
        case MechanismId::Ranking: return "ranking";
    }
    return "?";
}

MechanismId mechanism_from_string(const std::string& name) {
    if (name == "rsd") return MechanismId::Rsd;
    if (name == "sd-fixed") return MechanismId::SdFixed;
    if (name == "rsd-star") return MechanismId::RsdStar;
    if (name == "uniform-max") return MechanismId::UniformMax;
    if (name == "ranking") return MechanismId::Ranking;
    throw std::invalid_argument("unknown mechanism \"" + name + "\"");
}

} // namespace matchbench

#include "matchbench/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "matchbench/errors.hpp"
#include "matchbench/rational.hpp"

namespace matchbench {

namespace {

using Mask = std::uint32_t;

constexpr double kGainSlack = 1e-12;

std::uint64_t state_key(Mask mask_a, Mask mask_i) {
    return (static_cast<std::uint64_t>(mask_a) << 16) | mask_i;
}

std::size_t guarded_n(std::size_t n, std::size_t cap, const char* what) {
    const std::size_t limit = std::min(cap, kRsdRecursionHardCap);
    if (n > limit) {
        throw ResourceLimitError(std::string(what) + ": n = " +
                                 std::to_string(n) + " exceeds guard " +
                                 std::to_string(limit));
    }
    return n;
}

// Favorite items of `row` among maskI: the exact-equality argmax set.
void favorites_of(std::span<const double> row, Mask mask_i,
                  std::vector<std::size_t>& out) {
    out.clear();
    double best = -1.0;
    for (Mask m = mask_i; m; m &= m - 1) {
        const std::size_t i = std::countr_zero(m);
        const double v = row[i];
        if (v > best) {
            best = v;
            out.clear();
            out.push_back(i);
        } else if (v == best) {
            out.push_back(i);
        }
    }
}

Mask row_mask(std::span<const double> row) {
    Mask m = 0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i] == 1.0) m |= Mask(1) << i;
    }
    return m;
}

bool row_is_dichotomous(std::span<const double> row) {
    return std::all_of(row.begin(), row.end(),
                       [](double v) { return v == 0.0 || v == 1.0; });
}

// ---------------------------------------------------------------------------
// Expected true value of one agent under RSD with a deviated pick row.
// Dichotomous instances run on row bitmasks (exact Rational or double);
// the general path scans double rows. The recursion drops the agent's
// subtree as soon as he has picked, since later steps cannot change his
// value.
// ---------------------------------------------------------------------------

struct DichDeviation {
    std::size_t n = 0;
    std::size_t agent = 0;
    Mask true_mask = 0;             // agent's true 1-items
    std::vector<Mask> pick_rows;    // declared for `agent`, truthful otherwise
};

template <class Num>
Num dich_agent_value_rec(const DichDeviation& ctx, Mask mask_a, Mask mask_i,
                         std::unordered_map<std::uint64_t, Num>& memo) {
    const std::uint64_t key = state_key(mask_a, mask_i);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    const int k = std::popcount(mask_a);
    Num total(0);
    for (Mask ma = mask_a; ma; ma &= ma - 1) {
        const std::size_t b = std::countr_zero(ma);
        const Mask ones = ctx.pick_rows[b] & mask_i;
        const Mask favs = ones ? ones : mask_i; // all-zero best: full tie
        const int fcount = std::popcount(favs);
        if (b == ctx.agent) {
            const int hits = std::popcount(favs & ctx.true_mask);
            total += Num(hits) / Num(fcount);
        } else {
            Num sub(0);
            for (Mask mf = favs; mf; mf &= mf - 1) {
                const std::size_t i = std::countr_zero(mf);
                sub += dich_agent_value_rec(ctx, mask_a & ~(Mask(1) << b),
                                            mask_i & ~(Mask(1) << i), memo);
            }
            total += sub / Num(fcount);
        }
    }
    total = total / Num(k);
    memo.emplace(key, total);
    return total;
}

double dich_agent_value(const DichDeviation& ctx) {
    const Mask full = (Mask(1) << ctx.n) - 1;
    try {
        std::unordered_map<std::uint64_t, Rational> memo;
        return dich_agent_value_rec<Rational>(ctx, full, full, memo)
            .to_double();
    } catch (const RationalOverflow&) {
        std::unordered_map<std::uint64_t, double> memo;
        return dich_agent_value_rec<double>(ctx, full, full, memo);
    }
}

double general_agent_value_rec(const Instance& inst, std::size_t agent,
                               std::span<const double> declared, Mask mask_a,
                               Mask mask_i,
                               std::unordered_map<std::uint64_t, double>& memo,
                               std::vector<std::vector<std::size_t>>& scratch) {
    const std::uint64_t key = state_key(mask_a, mask_i);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    const int k = std::popcount(mask_a);
    auto& favs = scratch[k];
    double total = 0.0;
    for (Mask ma = mask_a; ma; ma &= ma - 1) {
        const std::size_t b = std::countr_zero(ma);
        favorites_of(b == agent ? declared : inst.row(b), mask_i, favs);
        if (b == agent) {
            double sum = 0.0;
            for (const std::size_t i : favs) sum += inst.value(agent, i);
            total += sum / static_cast<double>(favs.size());
        } else {
            double sub = 0.0;
            for (const std::size_t i : favs) {
                sub += general_agent_value_rec(
                    inst, agent, declared, mask_a & ~(Mask(1) << b),
                    mask_i & ~(Mask(1) << i), memo, scratch);
            }
            total += sub / static_cast<double>(favs.size());
        }
    }
    total /= static_cast<double>(k);
    memo.emplace(key, total);
    return total;
}

double rsd_agent_value(const Instance& inst, std::size_t agent,
                       std::span<const double> declared) {
    const std::size_t n = inst.size();
    if (inst.preference_class() == PreferenceClass::Dichotomous &&
        row_is_dichotomous(declared)) {
        DichDeviation ctx;
        ctx.n = n;
        ctx.agent = agent;
        ctx.true_mask = row_mask(inst.row(agent));
        ctx.pick_rows.resize(n);
        for (std::size_t b = 0; b < n; ++b) ctx.pick_rows[b] = row_mask(inst.row(b));
        ctx.pick_rows[agent] = row_mask(declared);
        return dich_agent_value(ctx);
    }
    std::unordered_map<std::uint64_t, double> memo;
    std::vector<std::vector<std::size_t>> scratch(n + 1);
    const Mask full = (Mask(1) << n) - 1;
    return general_agent_value_rec(inst, agent, declared, full, full, memo,
                                   scratch);
}

} // namespace

// ---------------------------------------------------------------------------
// Exact RSD welfare and allocation
// ---------------------------------------------------------------------------

double exact_rsd_welfare(const Instance& inst, const OracleLimits& limits) {
    const std::size_t n =
        guarded_n(inst.size(), limits.rsd_recursion_cap, "exact_rsd_welfare");
    std::unordered_map<std::uint64_t, double> memo;
    std::vector<std::vector<std::size_t>> scratch(n + 1);

    auto rec = [&](auto&& self, Mask mask_a, Mask mask_i) -> double {
        if (mask_a == 0) return 0.0;
        const std::uint64_t key = state_key(mask_a, mask_i);
        if (auto it = memo.find(key); it != memo.end()) return it->second;

        const int k = std::popcount(mask_a);
        auto& favs = scratch[k];
        double total = 0.0;
        for (Mask ma = mask_a; ma; ma &= ma - 1) {
            const std::size_t a = std::countr_zero(ma);
            favorites_of(inst.row(a), mask_i, favs);
            double sub = 0.0;
            for (const std::size_t i : favs) {
                sub += inst.value(a, i) + self(self, mask_a & ~(Mask(1) << a),
                                               mask_i & ~(Mask(1) << i));
            }
            total += sub / static_cast<double>(favs.size());
        }
        total /= static_cast<double>(k);
        memo.emplace(key, total);
        return total;
    };

    const Mask full = (Mask(1) << n) - 1;
    return rec(rec, full, full);
}

ExpectedAllocation exact_rsd_allocation(const Instance& inst,
                                        const OracleLimits& limits) {
    const std::size_t n = guarded_n(inst.size(), limits.rsd_recursion_cap,
                                    "exact_rsd_allocation");
    ExpectedAllocation out;
    out.n = n;
    out.probs.assign(n * n, 0.0);
    out.expected_values.assign(n, 0.0);

    const Mask full = (Mask(1) << n) - 1;
    std::unordered_map<std::uint64_t, double> level;
    level.emplace(state_key(full, full), 1.0);
    std::vector<std::size_t> favs;

    while (!level.empty()) {
        std::unordered_map<std::uint64_t, double> next;
        for (const auto& [key, p] : level) {
            const Mask mask_a = static_cast<Mask>(key >> 16);
            const Mask mask_i = static_cast<Mask>(key & 0xFFFF);
            const int k = std::popcount(mask_a);
            for (Mask ma = mask_a; ma; ma &= ma - 1) {
                const std::size_t a = std::countr_zero(ma);
                favorites_of(inst.row(a), mask_i, favs);
                const double w =
                    p / static_cast<double>(k) /
                    static_cast<double>(favs.size());
                for (const std::size_t i : favs) {
                    out.probs[a * n + i] += w;
                    const Mask next_a = mask_a & ~(Mask(1) << a);
                    if (next_a != 0) {
                        next[state_key(next_a, mask_i & ~(Mask(1) << i))] += w;
                    }
                }
            }
        }
        level = std::move(next);
    }

    for (std::size_t a = 0; a < n; ++a) {
        double ev = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ev += inst.value(a, i) * out.probs[a * n + i];
        }
        out.expected_values[a] = ev;
    }
    return out;
}

double exact_deviation_value(const Instance& inst, std::size_t agent,
                             std::span<const double> declared_row,
                             const OracleLimits& limits) {
    const std::size_t n =
        guarded_n(inst.size(), limits.deviation_cap, "exact_deviation_value");
    if (agent >= n) throw std::invalid_argument("agent index out of range");
    if (declared_row.size() != n) {
        throw std::invalid_argument("declared_row must have length n");
    }
    for (const double v : declared_row) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            throw ValidationError("declared_row entry outside [0,1]");
        }
    }
    return rsd_agent_value(inst, agent, declared_row);
}

// ---------------------------------------------------------------------------
// Maximum-matching enumeration
// ---------------------------------------------------------------------------

MatchingEnumeration enumerate_max_matchings(const BipartiteGraph& g,
                                            std::size_t budget) {
    const std::size_t n = g.n;
    std::vector<std::size_t> agent_match, item_match;
    const std::size_t target = hopcroft_karp(g, agent_match, item_match);

    MatchingEnumeration out;
    out.cardinality = target;
    std::vector<std::size_t> assign(n, Matching::kUnassigned);
    std::vector<char> used(n, 0);

    auto rec = [&](auto&& self, std::size_t a, std::size_t matched) -> void {
        if (matched + (n - a) < target) return; // cannot reach max any more
        if (a == n) {
            if (matched != target) return;
            if (out.matchings.size() >= budget) {
                throw ResourceLimitError(
                    "enumeration budget of " + std::to_string(budget) +
                    " maximum matchings exceeded");
            }
            Matching m(n);
            for (std::size_t b = 0; b < n; ++b) {
                if (assign[b] != Matching::kUnassigned) m.assign(b, assign[b]);
            }
            out.matchings.push_back(std::move(m));
            return;
        }
        for (const std::size_t i : g.adj[a]) {
            if (used[i]) continue;
            used[i] = 1;
            assign[a] = i;
            self(self, a + 1, matched + 1);
            used[i] = 0;
            assign[a] = Matching::kUnassigned;
        }
        self(self, a + 1, matched); // leave agent a unmatched
    };
    rec(rec, 0, 0);
    return out;
}

std::size_t count_matchings_through_edge(const BipartiteGraph& g,
                                         std::size_t agent, std::size_t item,
                                         std::size_t budget) {
    if (agent >= g.n || item >= g.n) {
        throw std::invalid_argument("edge endpoint out of range");
    }
    const MatchingEnumeration all = enumerate_max_matchings(g, budget);
    std::size_t count = 0;
    for (const Matching& m : all.matchings) {
        if (m.item_of(agent) == item) ++count;
    }
    return count;
}

// ---------------------------------------------------------------------------
// Exact mechanism expectations for truthfulness / symmetry checks
// ---------------------------------------------------------------------------

namespace {

// Expected true value of `agent` under uniform-max on `decl`, as an exact
// fraction (numerator over number of maximum matchings). True values must
// be dichotomous.
std::pair<std::int64_t, std::int64_t> umm_agent_value(
    const DeclarationProfile& decl, Mask true_mask, std::size_t agent,
    std::size_t budget) {
    const MatchingEnumeration all =
        enumerate_max_matchings(declaration_graph(decl), budget);
    std::int64_t num = 0;
    for (const Matching& m0 : all.matchings) {
        Matching m = m0;
        complete_lowest_index(m);
        num += (true_mask >> m.item_of(agent)) & 1U;
    }
    return {num, static_cast<std::int64_t>(all.matchings.size())};
}

std::uint64_t factorial(std::size_t n) {
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

// Sums, over all (agent order, item rank) permutation pairs, each agent's
// true value under rsd_star. Dividing by (n!)^2 gives exact expectations.
std::vector<std::uint64_t> rsd_star_numerators(
    const DeclarationProfile& decl, const std::vector<Mask>& true_masks) {
    const std::size_t n = decl.size();
    std::vector<std::uint64_t> num(n, 0);
    std::vector<std::size_t> order(n), rank(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    do {
        for (std::size_t i = 0; i < n; ++i) rank[i] = i;
        do {
            const Matching m = rsd_star_with(decl, order, rank);
            for (std::size_t a = 0; a < n; ++a) {
                num[a] += (true_masks[a] >> m.item_of(a)) & 1U;
            }
        } while (std::next_permutation(rank.begin(), rank.end()));
    } while (std::next_permutation(order.begin(), order.end()));
    return num;
}

// One agent's numerator (same denominator (n!)^2) under a deviated profile.
std::uint64_t rsd_star_agent_numerator(const DeclarationProfile& decl,
                                       Mask true_mask, std::size_t agent) {
    const std::size_t n = decl.size();
    std::uint64_t num = 0;
    std::vector<std::size_t> order(n), rank(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    do {
        for (std::size_t i = 0; i < n; ++i) rank[i] = i;
        do {
            const Matching m = rsd_star_with(decl, order, rank);
            num += (true_mask >> m.item_of(agent)) & 1U;
        } while (std::next_permutation(rank.begin(), rank.end()));
    } while (std::next_permutation(order.begin(), order.end()));
    return num;
}

std::vector<double> mask_to_row(Mask m, std::size_t n) {
    std::vector<double> row(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if ((m >> i) & 1U) row[i] = 1.0;
    }
    return row;
}

// Deviation basis for normalized / unit-range RSD: every permutation of
// the agent's own row plus every dichotomous row, deduplicated.
std::vector<std::vector<double>> general_deviation_basis(const Instance& inst,
                                                         std::size_t agent) {
    const std::size_t n = inst.size();
    std::set<std::vector<double>> rows;
    std::vector<double> own(inst.row(agent).begin(), inst.row(agent).end());
    std::sort(own.begin(), own.end());
    do {
        rows.insert(own);
    } while (std::next_permutation(own.begin(), own.end()));
    for (Mask m = 0; m < (Mask(1) << n); ++m) rows.insert(mask_to_row(m, n));
    return {rows.begin(), rows.end()};
}

void require_dichotomous(const Instance& inst, const char* what) {
    if (inst.preference_class() != PreferenceClass::Dichotomous) {
        throw std::invalid_argument(std::string(what) +
                                    " supports only dichotomous instances");
    }
}

} // namespace

TruthfulnessReport check_truthfulness(const Instance& inst, MechanismId mech,
                                      const OracleLimits& limits) {
    const std::size_t n =
        guarded_n(inst.size(), limits.exhaustive_cap, "check_truthfulness");
    const bool dich =
        inst.preference_class() == PreferenceClass::Dichotomous;

    TruthfulnessReport rep;
    auto consider = [&](double gain, std::size_t agent,
                        std::vector<double> declaration) {
        if (gain > rep.max_gain) {
            rep.max_gain = gain;
            rep.worst_agent = agent;
            rep.worst_declaration = std::move(declaration);
        }
    };

    switch (mech) {
        case MechanismId::Rsd: {
            for (std::size_t agent = 0; agent < n; ++agent) {
                const double truth = rsd_agent_value(inst, agent, inst.row(agent));
                if (dich) {
                    for (Mask m = 0; m < (Mask(1) << n); ++m) {
                        const std::vector<double> row = mask_to_row(m, n);
                        consider(rsd_agent_value(inst, agent, row) - truth,
                                 agent, row);
                    }
                } else {
                    rep.partial_basis = true;
                    for (const auto& row : general_deviation_basis(inst, agent)) {
                        consider(rsd_agent_value(inst, agent, row) - truth,
                                 agent, row);
                    }
                }
            }
            break;
        }
        case MechanismId::UniformMax: {
            require_dichotomous(inst, "uniform-max truthfulness");
            const DeclarationProfile truthful = DeclarationProfile::truthful(inst);
            for (std::size_t agent = 0; agent < n; ++agent) {
                const Mask true_mask = row_mask(inst.row(agent));
                const auto [tn, td] = umm_agent_value(truthful, true_mask,
                                                      agent,
                                                      limits.enumeration_budget);
                const double truth =
                    static_cast<double>(tn) / static_cast<double>(td);
                for (Mask m = 0; m < (Mask(1) << n); ++m) {
                    const std::vector<double> row = mask_to_row(m, n);
                    const auto [dn, dd] = umm_agent_value(
                        truthful.with_row(agent, row), true_mask, agent,
                        limits.enumeration_budget);
                    const double dev =
                        static_cast<double>(dn) / static_cast<double>(dd);
                    consider(dev - truth, agent, row);
                }
            }
            break;
        }
        case MechanismId::RsdStar: {
            require_dichotomous(inst, "rsd-star truthfulness");
            const DeclarationProfile truthful = DeclarationProfile::truthful(inst);
            const double den = static_cast<double>(factorial(n)) *
                               static_cast<double>(factorial(n));
            for (std::size_t agent = 0; agent < n; ++agent) {
                const Mask true_mask = row_mask(inst.row(agent));
                const double truth =
                    static_cast<double>(rsd_star_agent_numerator(
                        truthful, true_mask, agent)) /
                    den;
                for (Mask m = 0; m < (Mask(1) << n); ++m) {
                    const std::vector<double> row = mask_to_row(m, n);
                    const double dev =
                        static_cast<double>(rsd_star_agent_numerator(
                            truthful.with_row(agent, row), true_mask, agent)) /
                        den;
                    consider(dev - truth, agent, row);
                }
            }
            break;
        }
        default:
            throw std::invalid_argument(
                "truthfulness check not supported for mechanism " +
                std::string(to_string(mech)));
    }
    rep.truthful = rep.max_gain <= kGainSlack;
    return rep;
}

SymmetryReport check_symmetry(const Instance& inst, MechanismId mech,
                              const OracleLimits& limits) {
    const std::size_t n =
        guarded_n(inst.size(), limits.exhaustive_cap, "check_symmetry");

    SymmetryReport rep;
    rep.expected_values.assign(n, 0.0);

    switch (mech) {
        case MechanismId::Rsd: {
            for (std::size_t a = 0; a < n; ++a) {
                rep.expected_values[a] = rsd_agent_value(inst, a, inst.row(a));
            }
            break;
        }
        case MechanismId::UniformMax: {
            require_dichotomous(inst, "uniform-max symmetry");
            const DeclarationProfile truthful = DeclarationProfile::truthful(inst);
            const MatchingEnumeration all = enumerate_max_matchings(
                declaration_graph(truthful), limits.enumeration_budget);
            for (std::size_t a = 0; a < n; ++a) {
                const Mask true_mask = row_mask(inst.row(a));
                std::int64_t num = 0;
                for (const Matching& m0 : all.matchings) {
                    Matching m = m0;
                    complete_lowest_index(m);
                    num += (true_mask >> m.item_of(a)) & 1U;
                }
                rep.expected_values[a] =
                    static_cast<double>(num) /
                    static_cast<double>(all.matchings.size());
            }
            break;
        }
        case MechanismId::RsdStar: {
            require_dichotomous(inst, "rsd-star symmetry");
            std::vector<Mask> true_masks(n);
            for (std::size_t a = 0; a < n; ++a) {
                true_masks[a] = row_mask(inst.row(a));
            }
            const auto nums = rsd_star_numerators(
                DeclarationProfile::truthful(inst), true_masks);
            const double den = static_cast<double>(factorial(n)) *
                               static_cast<double>(factorial(n));
            for (std::size_t a = 0; a < n; ++a) {
                rep.expected_values[a] = static_cast<double>(nums[a]) / den;
            }
            break;
        }
        default:
            throw std::invalid_argument(
                "symmetry check not supported for mechanism " +
                std::string(to_string(mech)));
    }

    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (!std::equal(inst.row(a).begin(), inst.row(a).end(),
                            inst.row(b).begin())) {
                continue;
            }
            const double diff =
                std::abs(rep.expected_values[a] - rep.expected_values[b]);
            if (diff > rep.max_difference) {
                rep.max_difference = diff;
                rep.agent_a = a;
                rep.agent_b = b;
            }
        }
    }
    rep.symmetric = rep.max_difference <= kGainSlack;
    return rep;
}

Instance dichotomous_from_mask(std::size_t n, std::uint32_t mask) {
    std::vector<double> values(n * n, 0.0);
    for (std::size_t idx = 0; idx < n * n; ++idx) {
        if ((mask >> idx) & 1U) values[idx] = 1.0;
    }
    return Instance(n, std::move(values), PreferenceClass::Dichotomous);
}

SweepReport sweep_dichotomous_exhaustive(std::size_t n, MechanismId mech,
                                         bool canonical_only,
                                         const OracleLimits& limits) {
    if (n == 0 || n > 4) {
        throw ResourceLimitError(
            "exhaustive dichotomous sweep supports 1 <= n <= 4");
    }
    const std::uint64_t total = std::uint64_t(1) << (n * n);
    const std::uint32_t row_bits = (std::uint32_t(1) << n) - 1;

    SweepReport sweep;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        if (canonical_only) {
            // keep only masks whose rows are non-decreasing as n-bit ints
            bool canonical = true;
            for (std::size_t a = 0; a + 1 < n; ++a) {
                const std::uint32_t ra = (mask >> (a * n)) & row_bits;
                const std::uint32_t rb = (mask >> ((a + 1) * n)) & row_bits;
                if (ra > rb) {
                    canonical = false;
                    break;
                }
            }
            if (!canonical) continue;
        }
        const Instance inst =
            dichotomous_from_mask(n, static_cast<std::uint32_t>(mask));
        const TruthfulnessReport truth = check_truthfulness(inst, mech, limits);
        const SymmetryReport sym = check_symmetry(inst, mech, limits);
        ++sweep.instances;
        if (!truth.truthful) ++sweep.truthfulness_failures;
        if (!sym.symmetric) ++sweep.symmetry_failures;
        if (truth.max_gain > sweep.worst_gain) {
            sweep.worst_gain = truth.max_gain;
            sweep.worst_gain_mask = static_cast<std::uint32_t>(mask);
        }
        if (sym.max_difference > sweep.worst_symmetry_diff) {
            sweep.worst_symmetry_diff = sym.max_difference;
            sweep.worst_symmetry_mask = static_cast<std::uint32_t>(mask);
        }
    }
    return sweep;
}

} // namespace matchbench

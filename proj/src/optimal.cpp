#include "matchbench/optimal.hpp"

#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

namespace matchbench {

BipartiteGraph BipartiteGraph::from_instance(const Instance& inst) {
    if (inst.preference_class() != PreferenceClass::Dichotomous) {
        throw std::invalid_argument(
            "1-edge graph requires a dichotomous instance");
    }
    BipartiteGraph g;
    g.n = inst.size();
    g.adj.resize(g.n);
    for (std::size_t a = 0; a < g.n; ++a) {
        for (std::size_t i = 0; i < g.n; ++i) {
            if (inst.value(a, i) == 1.0) g.adj[a].push_back(i);
        }
    }
    return g;
}

OptimalResult max_weight_matching(const Instance& inst) {
    const std::size_t n = inst.size();
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // Standard potentials-based assignment solver (1-indexed scratch
    // arrays, column 0 is the virtual root), minimizing cost = -value.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1, 0);

    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        minv.assign(n + 1, kInf);
        used.assign(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur =
                    -inst.value(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    Matching m(n);
    for (std::size_t j = 1; j <= n; ++j) m.assign(p[j] - 1, j - 1);
    // Report the true welfare of the matching, not accumulated potentials.
    return OptimalResult{m, social_welfare(inst, m)};
}

std::size_t hopcroft_karp(const BipartiteGraph& g,
                          std::vector<std::size_t>& agent_match,
                          std::vector<std::size_t>& item_match) {
    constexpr std::size_t kNil = Matching::kUnassigned;
    constexpr std::size_t kInf = static_cast<std::size_t>(-1);
    const std::size_t n = g.n;
    agent_match.assign(n, kNil);
    item_match.assign(n, kNil);
    std::vector<std::size_t> dist(n, kInf);
    std::deque<std::size_t> queue;
    std::size_t matched = 0;

    auto bfs = [&]() -> bool {
        queue.clear();
        for (std::size_t a = 0; a < n; ++a) {
            if (agent_match[a] == kNil) {
                dist[a] = 0;
                queue.push_back(a);
            } else {
                dist[a] = kInf;
            }
        }
        bool reachable_free_item = false;
        while (!queue.empty()) {
            const std::size_t a = queue.front();
            queue.pop_front();
            for (const std::size_t i : g.adj[a]) {
                const std::size_t b = item_match[i];
                if (b == kNil) {
                    reachable_free_item = true;
                } else if (dist[b] == kInf) {
                    dist[b] = dist[a] + 1;
                    queue.push_back(b);
                }
            }
        }
        return reachable_free_item;
    };

    std::vector<std::size_t> iter(n, 0);
    auto dfs = [&](auto&& self, std::size_t a) -> bool {
        for (; iter[a] < g.adj[a].size(); ++iter[a]) {
            const std::size_t i = g.adj[a][iter[a]];
            const std::size_t b = item_match[i];
            if (b == kNil || (dist[b] == dist[a] + 1 && self(self, b))) {
                agent_match[a] = i;
                item_match[i] = a;
                return true;
            }
        }
        dist[a] = kInf;
        return false;
    };

    while (bfs()) {
        iter.assign(n, 0);
        for (std::size_t a = 0; a < n; ++a) {
            if (agent_match[a] == kNil && dfs(dfs, a)) ++matched;
        }
    }
    return matched;
}

OptimalResult max_cardinality_matching(const Instance& inst) {
    const BipartiteGraph g = BipartiteGraph::from_instance(inst);
    std::vector<std::size_t> agent_match, item_match;
    hopcroft_karp(g, agent_match, item_match);

    Matching m(g.n);
    for (std::size_t a = 0; a < g.n; ++a) {
        if (agent_match[a] != Matching::kUnassigned) {
            m.assign(a, agent_match[a]);
        }
    }
    // By maximality every leftover agent 0-values every leftover item, so
    // the completion does not change the welfare.
    complete_lowest_index(m);
    return OptimalResult{m, social_welfare(inst, m)};
}

} // namespace matchbench

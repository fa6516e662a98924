#pragma once

// Test oracles and fixtures shared by the unit and acceptance binaries.
// Nothing here calls into the library's centrality or estimator code.

#include <cmath>
#include <cstdint>
#include <deque>
#include <random>
#include <vector>

#include "rumor/diffusion.hpp"
#include "rumor/graph.hpp"

namespace testing {

using Adjacency = std::vector<std::vector<std::uint32_t>>;

inline Adjacency adjacency_from_edges(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    Adjacency adj(n);
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    return adj;
}

/// Number of orderings of all nodes that start at `root` and where every
/// node is adjacent to some earlier node. Subset DP; fine for n <= 20.
inline std::uint64_t count_infection_orderings(const Adjacency& adj, std::uint32_t root) {
    const std::size_t n = adj.size();
    std::vector<std::uint64_t> ways(std::size_t{1} << n, 0);
    ways[std::size_t{1} << root] = 1;
    for (std::size_t mask = 0; mask < ways.size(); ++mask) {
        if (ways[mask] == 0) continue;
        for (std::uint32_t v = 0; v < n; ++v) {
            if (mask >> v & 1) continue;
            bool touches = false;
            for (auto u : adj[v]) touches = touches || (mask >> u & 1);
            if (touches) ways[mask | std::size_t{1} << v] += ways[mask];
        }
    }
    return ways.back();
}

/// Labeled tree from a Pruefer sequence over n >= 2 nodes.
inline Adjacency tree_from_pruefer(std::size_t n, const std::vector<std::uint32_t>& seq) {
    std::vector<std::size_t> degree(n, 1);
    for (auto s : seq) ++degree[s];
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (auto s : seq) {
        for (std::uint32_t leaf = 0; leaf < n; ++leaf) {
            if (degree[leaf] == 1) {
                edges.emplace_back(leaf, s);
                --degree[leaf];
                --degree[s];
                break;
            }
        }
    }
    std::vector<std::uint32_t> rest;
    for (std::uint32_t v = 0; v < n; ++v)
        if (degree[v] == 1) rest.push_back(v);
    edges.emplace_back(rest[0], rest[1]);
    return adjacency_from_edges(n, edges);
}

/// All labeled trees on n nodes for small n, then `extra` random ones on
/// each of the larger sizes, to at least reach a few hundred shapes.
inline std::vector<Adjacency> tree_corpus(std::size_t exhaustive_up_to, std::size_t max_n, std::size_t extra,
                                          std::uint64_t seed) {
    std::vector<Adjacency> out;
    out.push_back(Adjacency(1));
    for (std::size_t n = 2; n <= exhaustive_up_to; ++n) {
        std::vector<std::uint32_t> seq(n - 2, 0);
        while (true) {
            out.push_back(tree_from_pruefer(n, seq));
            std::size_t i = 0;
            while (i < seq.size() && ++seq[i] == n) seq[i++] = 0;
            if (i == seq.size()) break;
        }
    }
    std::mt19937_64 rng(seed);
    for (std::size_t n = exhaustive_up_to + 1; n <= max_n; ++n) {
        std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
        for (std::size_t k = 0; k < extra; ++k) {
            std::vector<std::uint32_t> seq(n - 2);
            for (auto& s : seq) s = pick(rng);
            out.push_back(tree_from_pruefer(n, seq));
        }
    }
    return out;
}

/// Snapshot of a fully infected graph, infection order = BFS from `source`.
inline rumor::DiffusionSnapshot full_snapshot(const Adjacency& adj, std::uint32_t source,
                                              rumor::GraphKind kind = rumor::GraphKind::imported,
                                              unsigned tree_degree = 0) {
    const std::size_t n = adj.size();
    std::vector<rumor::NodeId> order{source};
    std::vector<rumor::LocalId> parents{rumor::no_parent};
    std::vector<rumor::LocalId> local(n, rumor::no_parent);
    local[source] = 0;
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (auto u : adj[order[head]]) {
            if (local[u] != rumor::no_parent) continue;
            local[u] = static_cast<rumor::LocalId>(order.size());
            order.push_back(u);
            parents.push_back(static_cast<rumor::LocalId>(head));
        }
    }
    std::vector<std::vector<rumor::NodeId>> topology;
    for (auto v : order) topology.emplace_back(adj[v].begin(), adj[v].end());
    return rumor::DiffusionSnapshot(kind, tree_degree, order, parents, topology);
}

/// Complete binary tree on 7 nodes, rooted at 0: 0-1, 0-2, 1-3, 1-4, 2-5, 2-6.
inline Adjacency binary_tree7() {
    return adjacency_from_edges(7, {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}, {2, 6}});
}

/// Bernoulli frequency within `k` standard errors of `prob`.
inline bool within_se(double observed, double prob, std::size_t samples, double k = 3.0) {
    const double se = std::sqrt(prob * (1.0 - prob) / static_cast<double>(samples));
    return std::abs(observed - prob) <= k * se + 1e-12;
}

}  // namespace testing

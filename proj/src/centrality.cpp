#include "rumor/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace rumor {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

struct Rooted {
    std::vector<LocalId> order;  // BFS order from the root
    std::vector<LocalId> parent;
};

Rooted bfs_tree(std::span<const std::vector<LocalId>> adjacency, LocalId root) {
    const std::size_t n = adjacency.size();
    Rooted t;
    t.order.reserve(n);
    t.parent.assign(n, no_parent);
    std::vector<bool> seen(n, false);
    seen[root] = true;
    t.order.push_back(root);
    for (std::size_t head = 0; head < t.order.size(); ++head) {
        LocalId u = t.order[head];
        for (LocalId w : adjacency[u]) {
            if (seen[w]) continue;
            seen[w] = true;
            t.parent[w] = u;
            t.order.push_back(w);
        }
    }
    return t;
}

std::vector<std::size_t> subtree_sizes(const Rooted& t) {
    std::vector<std::size_t> size(t.parent.size(), 1);
    for (auto it = t.order.rbegin(); it != t.order.rend(); ++it)
        if (t.parent[*it] != no_parent) size[t.parent[*it]] += size[*it];
    return size;
}

std::span<const std::vector<LocalId>> infected_adjacency_of(const DiffusionSnapshot& snap,
                                                            std::vector<std::vector<LocalId>>& storage) {
    storage.resize(snap.size());
    for (LocalId i = 0; i < snap.size(); ++i) {
        auto nbrs = snap.infected_neighbors(i);
        storage[i].assign(nbrs.begin(), nbrs.end());
    }
    return storage;
}

}  // namespace

CentralityTable rumor_centrality_tree(std::span<const std::vector<LocalId>> adjacency) {
    const std::size_t n = adjacency.size();
    if (n == 0) throw NotATreeError("empty tree");
    std::size_t half_edges = 0;
    for (const auto& nbrs : adjacency) half_edges += nbrs.size();
    if (half_edges != 2 * (n - 1))
        throw NotATreeError("infected subgraph is not a tree; use the BFS heuristic");

    CentralityTable table;
    table.root = 0;
    Rooted t = bfs_tree(adjacency, 0);
    if (t.order.size() != n) throw NotATreeError("infected subgraph is disconnected");
    table.subtree_size = subtree_sizes(t);
    table.parent = t.parent;

    double log_root = std::lgamma(static_cast<double>(n) + 1.0);
    for (std::size_t s : table.subtree_size) log_root -= std::log(static_cast<double>(s));

    table.log_r.assign(n, 0.0);
    table.log_r[0] = log_root;
    // R(child) / R(parent) = T_child / (N - T_child)
    for (std::size_t k = 1; k < t.order.size(); ++k) {
        LocalId c = t.order[k];
        const double tc = static_cast<double>(table.subtree_size[c]);
        table.log_r[c] = table.log_r[t.parent[c]] + std::log(tc) - std::log(static_cast<double>(n) - tc);
    }
    return table;
}

CentralityTable rumor_centrality_all(const DiffusionSnapshot& snap) {
    if (!snap.infected_is_tree()) throw NotATreeError("infected subgraph is not a tree; use the BFS heuristic");
    std::vector<std::vector<LocalId>> storage;
    return rumor_centrality_tree(infected_adjacency_of(snap, storage));
}

double log_rumor_centrality_at(std::span<const std::vector<LocalId>> adjacency, LocalId root) {
    Rooted t = bfs_tree(adjacency, root);
    auto sizes = subtree_sizes(t);
    double value = std::lgamma(static_cast<double>(adjacency.size()) + 1.0);
    for (LocalId u : t.order) value -= std::log(static_cast<double>(sizes[u]));
    return value;
}

std::vector<LocalId> near_max(std::span<const double> scores, std::span<const LocalId> among) {
    double best = neg_inf;
    for (LocalId i : among) best = std::max(best, scores[i]);
    std::vector<LocalId> out;
    if (best == neg_inf) {
        out.assign(among.begin(), among.end());
        return out;
    }
    const double slack = 1e-9 * std::max(1.0, std::abs(best));
    for (LocalId i : among)
        if (scores[i] >= best - slack) out.push_back(i);
    return out;
}

std::vector<LocalId> near_max(std::span<const double> scores) {
    std::vector<LocalId> all(scores.size());
    for (LocalId i = 0; i < all.size(); ++i) all[i] = i;
    return near_max(scores, all);
}

LocalId select_max(std::span<const double> scores, std::span<const LocalId> among, Rng& rng) {
    if (among.empty()) throw std::invalid_argument("select_max over an empty set");
    auto ties = near_max(scores, among);
    if (ties.size() == 1) return ties.front();
    std::uniform_int_distribution<std::size_t> pick(0, ties.size() - 1);
    return ties[pick(rng)];
}

LocalId select_max(std::span<const double> scores, Rng& rng) {
    if (scores.empty()) throw std::invalid_argument("select_max over an empty set");
    auto ties = near_max(scores);
    if (ties.size() == 1) return ties.front();
    std::uniform_int_distribution<std::size_t> pick(0, ties.size() - 1);
    return ties[pick(rng)];
}

LocalId rumor_center(const CentralityTable& table, std::uint64_t seed) {
    auto rng = make_rng(seed);
    return select_max(table.log_r, rng);
}

std::vector<int> hop_distances(const DiffusionSnapshot& snap, LocalId from) {
    std::vector<int> dist(snap.size(), -1);
    std::queue<LocalId> frontier;
    dist.at(from) = 0;
    frontier.push(from);
    while (!frontier.empty()) {
        LocalId u = frontier.front();
        frontier.pop();
        for (LocalId w : snap.infected_neighbors(u)) {
            if (dist[w] >= 0) continue;
            dist[w] = dist[u] + 1;
            frontier.push(w);
        }
    }
    return dist;
}

std::vector<int> hop_distances(const Graph& graph, NodeId from) {
    std::vector<int> dist(graph.node_count(), -1);
    std::queue<NodeId> frontier;
    dist.at(from) = 0;
    frontier.push(from);
    while (!frontier.empty()) {
        NodeId u = frontier.front();
        frontier.pop();
        for (NodeId w : graph.neighbors(u)) {
            if (dist[w] >= 0) continue;
            dist[w] = dist[u] + 1;
            frontier.push(w);
        }
    }
    return dist;
}

std::vector<double> bfs_heuristic_scores(const DiffusionSnapshot& snap) {
    const std::size_t n = snap.size();
    std::vector<std::vector<LocalId>> storage;
    auto adjacency = infected_adjacency_of(snap, storage);
    const double log_n_factorial = std::lgamma(static_cast<double>(n) + 1.0);

    std::vector<double> scores(n, 0.0);
    std::vector<bool> in_prefix(n);
    for (LocalId v = 0; v < n; ++v) {
        Rooted t = bfs_tree(adjacency, v);
        auto sizes = subtree_sizes(t);
        double log_r = log_n_factorial;
        for (LocalId u : t.order) log_r -= std::log(static_cast<double>(sizes[u]));

        // Boundary edges of each proper prefix of the BFS order.
        std::fill(in_prefix.begin(), in_prefix.end(), false);
        double log_seq = 0.0;
        std::int64_t boundary = 0;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            LocalId x = t.order[k];
            std::int64_t inside = 0;
            for (LocalId w : adjacency[x])
                if (in_prefix[w]) ++inside;
            in_prefix[x] = true;
            boundary += static_cast<std::int64_t>(snap.topology_neighbors(x).size()) - 2 * inside;
            log_seq -= std::log(static_cast<double>(boundary));
        }
        scores[v] = log_seq + log_r;
    }
    return scores;
}

LocalId bfs_heuristic_estimate(const DiffusionSnapshot& snap, std::uint64_t seed) {
    auto rng = make_rng(seed);
    return select_max(bfs_heuristic_scores(snap), rng);
}

double subtree_centrality_mass(const DiffusionSnapshot& snap, const CentralityTable& table, LocalId w,
                               NodeId v) {
    auto target = snap.local_index(v);
    if (!target) return neg_inf;
    std::vector<double> mass;
    std::vector<LocalId> stack{*target};
    std::vector<bool> seen(snap.size(), false);
    seen[w] = true;
    seen[*target] = true;
    while (!stack.empty()) {
        LocalId u = stack.back();
        stack.pop_back();
        mass.push_back(table.log_r[u]);
        for (LocalId x : snap.infected_neighbors(u)) {
            if (seen[x]) continue;
            seen[x] = true;
            stack.push_back(x);
        }
    }
    return log_sum_exp(mass);
}

double log_sum_exp(std::span<const double> values) {
    if (values.empty()) return neg_inf;
    const double top = *std::max_element(values.begin(), values.end());
    if (top == neg_inf) return neg_inf;
    double acc = 0.0;
    for (double x : values) acc += std::exp(x - top);
    return top + std::log(acc);
}

}  // namespace rumor

#include "rumor/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

namespace rumor {

std::string_view to_string(GraphKind kind) {
    switch (kind) {
        case GraphKind::regular_tree: return "regular-tree";
        case GraphKind::er: return "er";
        case GraphKind::scale_free: return "scale-free";
        case GraphKind::imported: return "imported";
    }
    return "unknown";
}

Graph Graph::from_edges(std::size_t node_count, std::span<const Edge> edges, GraphKind kind) {
    Graph g;
    g.kind_ = kind;
    g.adjacency_.resize(node_count);
    for (auto [a, b] : edges) {
        if (a >= node_count || b >= node_count)
            throw std::invalid_argument("edge endpoint out of range: " + std::to_string(std::max(a, b)));
        if (a == b) continue;
        g.adjacency_[a].push_back(b);
        g.adjacency_[b].push_back(a);
    }
    std::size_t half_edges = 0;
    for (auto& nbrs : g.adjacency_) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        half_edges += nbrs.size();
    }
    g.edge_count_ = half_edges / 2;
    return g;
}

bool Graph::has_edge(NodeId a, NodeId b) const {
    const auto& nbrs = adjacency_.at(a);
    return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

double Graph::mean_degree() const noexcept {
    if (adjacency_.empty()) return 0.0;
    return 2.0 * static_cast<double>(edge_count_) / static_cast<double>(adjacency_.size());
}

std::size_t Graph::max_degree() const noexcept {
    std::size_t best = 0;
    for (const auto& nbrs : adjacency_) best = std::max(best, nbrs.size());
    return best;
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId a = 0; a < adjacency_.size(); ++a)
        for (NodeId b : adjacency_[a])
            if (a < b) out.emplace_back(a, b);
    return out;
}

std::vector<std::vector<NodeId>> Graph::components() const {
    constexpr auto unseen = static_cast<std::size_t>(-1);
    std::vector<std::size_t> label(node_count(), unseen);
    std::vector<std::vector<NodeId>> out;
    for (NodeId start = 0; start < node_count(); ++start) {
        if (label[start] != unseen) continue;
        auto& comp = out.emplace_back();
        std::queue<NodeId> frontier;
        frontier.push(start);
        label[start] = out.size() - 1;
        while (!frontier.empty()) {
            NodeId u = frontier.front();
            frontier.pop();
            comp.push_back(u);
            for (NodeId w : adjacency_[u]) {
                if (label[w] != unseen) continue;
                label[w] = out.size() - 1;
                frontier.push(w);
            }
        }
        std::sort(comp.begin(), comp.end());
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });
    return out;
}

Graph Graph::largest_component() const {
    if (adjacency_.empty()) return *this;
    auto comps = components();
    const auto& keep = comps.front();
    if (keep.size() == node_count()) return *this;
    std::vector<NodeId> remap(node_count(), static_cast<NodeId>(-1));
    for (NodeId i = 0; i < keep.size(); ++i) remap[keep[i]] = i;
    std::vector<Edge> sub;
    for (auto [a, b] : edges())
        if (remap[a] != static_cast<NodeId>(-1)) sub.emplace_back(remap[a], remap[b]);
    return from_edges(keep.size(), sub, kind_);
}

LazyRegularTree::LazyRegularTree(unsigned degree) : degree_(degree) {
    if (degree < 3) throw std::invalid_argument("regular tree degree must be >= 3");
    adjacency_.emplace_back();
}

std::span<const NodeId> LazyRegularTree::neighbors(NodeId v) {
    if (v >= adjacency_.size()) throw std::out_of_range("node not materialized");
    while (adjacency_[v].size() < degree_) {
        auto child = static_cast<NodeId>(adjacency_.size());
        adjacency_.push_back({v});
        adjacency_[v].push_back(child);
    }
    return adjacency_[v];
}

void LazyRegularTree::materialize_ball(unsigned hops) {
    std::vector<NodeId> layer{root()};
    for (unsigned h = 0; h < hops; ++h) {
        std::vector<NodeId> next;
        for (NodeId u : layer) {
            // copy: neighbors() may reallocate adjacency_
            auto nbrs = neighbors(u);
            std::vector<NodeId> copy(nbrs.begin(), nbrs.end());
            for (NodeId w : copy)
                if (w > u) next.push_back(w);
        }
        layer = std::move(next);
    }
}

Graph LazyRegularTree::to_graph() const {
    std::vector<Edge> edges;
    edges.reserve(adjacency_.size());
    for (NodeId a = 0; a < adjacency_.size(); ++a)
        for (NodeId b : adjacency_[a])
            if (a < b) edges.emplace_back(a, b);
    return Graph::from_edges(adjacency_.size(), edges, GraphKind::regular_tree);
}

std::size_t regular_tree_ball_size(unsigned degree, unsigned hops) {
    if (degree < 3) throw std::invalid_argument("regular tree degree must be >= 3");
    std::size_t power = 1;
    for (unsigned i = 0; i < hops; ++i) power *= degree - 1;
    return (degree * power - 2) / (degree - 2);
}

}  // namespace rumor

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace rumor {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

enum class GraphKind { regular_tree, er, scale_free, imported };

std::string_view to_string(GraphKind kind);

/// Immutable undirected simple graph over dense ids [0, node_count).
class Graph {
public:
    Graph() = default;

    /// Builds from an edge list. Self-loops and duplicate edges are dropped.
    /// Throws std::invalid_argument if an endpoint is >= node_count.
    static Graph from_edges(std::size_t node_count, std::span<const Edge> edges,
                            GraphKind kind = GraphKind::imported);

    std::size_t node_count() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }
    GraphKind kind() const noexcept { return kind_; }

    std::span<const NodeId> neighbors(NodeId v) const { return adjacency_.at(v); }
    std::size_t degree(NodeId v) const { return adjacency_.at(v).size(); }
    bool has_edge(NodeId a, NodeId b) const;

    double mean_degree() const noexcept;
    std::size_t max_degree() const noexcept;

    /// Each undirected edge once, as (min, max), in ascending order.
    std::vector<Edge> edges() const;

    /// Node sets of connected components, largest first.
    std::vector<std::vector<NodeId>> components() const;

    /// Induced subgraph on the largest component. Ids are compacted in
    /// ascending order of the original ids.
    Graph largest_component() const;

private:
    std::vector<std::vector<NodeId>> adjacency_;
    std::size_t edge_count_ = 0;
    GraphKind kind_ = GraphKind::imported;
};

/// The unbounded d-regular tree, materialized on demand around node 0.
///
/// Node 0 is the root. Every node gets its full set of d neighbors the first
/// time neighbors() is called on it, so the frontier stays outside whatever
/// region a caller has touched. A trial owns its instance; growth mutates.
class LazyRegularTree {
public:
    explicit LazyRegularTree(unsigned degree);

    unsigned degree() const noexcept { return degree_; }
    std::size_t node_count() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept { return adjacency_.size() - 1; }
    static constexpr NodeId root() noexcept { return 0; }

    /// Materializes v's neighbors if needed; the result always has d entries.
    std::span<const NodeId> neighbors(NodeId v);

    bool is_expanded(NodeId v) const { return adjacency_.at(v).size() == degree_; }

    /// Expands every node closer than `hops` to the root, so that all nodes
    /// within `hops` exist. Node count becomes (d(d-1)^hops - 2)/(d-2).
    void materialize_ball(unsigned hops);

    /// Snapshot of the materialized part as a finite graph.
    Graph to_graph() const;

private:
    unsigned degree_;
    std::vector<std::vector<NodeId>> adjacency_;
};

/// Closed-form node count of the radius-L ball in a d-regular tree.
std::size_t regular_tree_ball_size(unsigned degree, unsigned hops);

}  // namespace rumor

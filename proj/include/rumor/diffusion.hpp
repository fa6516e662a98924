#pragma once

#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <unordered_map>
#include <vector>

#include "rumor/graph.hpp"

namespace rumor {

/// Index of an infected node in infection order; 0 is the source.
using LocalId = std::uint32_t;
inline constexpr LocalId no_parent = std::numeric_limits<LocalId>::max();

/// The observed infected subgraph G_N together with its ground truth.
///
/// Self-contained: the topology neighbors of every infected node are copied
/// in, so the snapshot outlives the graph (or lazy tree) it came from.
/// Estimators only look at structure; the source and parent links are read
/// by the query oracles and the harness.
class DiffusionSnapshot {
public:
    /// Validates and indexes the parts. `parents[i]` is the local id of the
    /// node that infected infected[i] (no_parent for i == 0).
    DiffusionSnapshot(GraphKind kind, unsigned tree_degree, std::vector<NodeId> infected,
                      std::vector<LocalId> parents, std::vector<std::vector<NodeId>> topology);

    GraphKind kind() const noexcept { return kind_; }
    /// d for regular-tree snapshots, 0 otherwise.
    unsigned tree_degree() const noexcept { return tree_degree_; }

    std::size_t size() const noexcept { return infected_.size(); }
    NodeId source() const noexcept { return infected_.front(); }
    std::span<const NodeId> infected() const noexcept { return infected_; }
    NodeId node(LocalId i) const { return infected_.at(i); }

    std::optional<LocalId> local_index(NodeId v) const;
    bool is_infected(NodeId v) const { return local_.contains(v); }

    LocalId parent_local(LocalId i) const { return parents_.at(i); }
    std::optional<NodeId> parent(NodeId v) const;

    /// All graph neighbors of an infected node, infected or not.
    std::span<const NodeId> topology_neighbors(LocalId i) const { return topology_.at(i); }
    /// Infected neighbors, as local ids.
    std::span<const LocalId> infected_neighbors(LocalId i) const { return infected_adjacency_.at(i); }

    std::size_t infected_edge_count() const noexcept { return infected_edges_; }
    /// The induced infected subgraph is a tree (it is always connected).
    bool infected_is_tree() const noexcept { return infected_edges_ + 1 == infected_.size(); }

private:
    GraphKind kind_;
    unsigned tree_degree_;
    std::vector<NodeId> infected_;
    std::vector<LocalId> parents_;
    std::vector<std::vector<NodeId>> topology_;
    std::vector<std::vector<LocalId>> infected_adjacency_;
    std::unordered_map<NodeId, LocalId> local_;
    std::size_t infected_edges_ = 0;
};

/// Discrete-event SI spread with Exp(1) edge delays, sampled as a uniformly
/// random susceptible-facing boundary edge per step (memorylessness).
/// Throws std::runtime_error if the component runs out before n_infected.
DiffusionSnapshot simulate_si(const Graph& graph, NodeId source, std::size_t n_infected,
                              std::uint64_t seed);
DiffusionSnapshot simulate_si(LazyRegularTree& tree, NodeId source, std::size_t n_infected,
                              std::uint64_t seed);

NodeId pick_random_source(const Graph& graph, std::uint64_t seed);
/// The unbounded tree is vertex-transitive, so the root is as good as any.
NodeId pick_random_source(const LazyRegularTree& tree, std::uint64_t seed);

/// Text dump: "source <id>", "n <N>", then "w parent order" per infected node
/// with "-" as the source's parent.
void dump_snapshot(const DiffusionSnapshot& snap, std::ostream& out);

/// Inverse of dump_snapshot. Without a graph the topology is the diffusion
/// tree itself; with one, neighbors come from the graph.
DiffusionSnapshot restore_snapshot(std::istream& in);
DiffusionSnapshot restore_snapshot(std::istream& in, const Graph& graph);

}  // namespace rumor

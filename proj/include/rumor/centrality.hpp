#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "rumor/diffusion.hpp"
#include "rumor/seeding.hpp"

namespace rumor {

class NotATreeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Rumor centrality of every node of a tree, in the natural-log domain.
///
/// Subtree bookkeeping is kept for the root the table was built from
/// (`root`), which is all the message-passing pass needs.
struct CentralityTable {
    std::vector<double> log_r;             // indexed by LocalId
    LocalId root = 0;
    std::vector<LocalId> parent;           // toward root; no_parent at root
    std::vector<std::size_t> subtree_size; // T_u with the tree rooted at `root`

    std::size_t size() const noexcept { return log_r.size(); }
};

/// Two-pass O(N) computation over an arbitrary tree given as local adjacency.
/// Throws NotATreeError if the adjacency is disconnected or has a cycle.
CentralityTable rumor_centrality_tree(std::span<const std::vector<LocalId>> adjacency);

/// Rumor centrality of every infected node. Throws NotATreeError on loopy
/// snapshots; use bfs_heuristic_scores there.
CentralityTable rumor_centrality_all(const DiffusionSnapshot& snap);

/// log N! - sum_u log T_u for a tree rooted at `root`, computed directly.
double log_rumor_centrality_at(std::span<const std::vector<LocalId>> adjacency, LocalId root);

/// Indices whose score is within a relative 1e-9 of the maximum; the log
/// values of symmetric nodes reach the same number along different paths.
std::vector<LocalId> near_max(std::span<const double> scores);
std::vector<LocalId> near_max(std::span<const double> scores, std::span<const LocalId> among);

/// Argmax with ties broken uniformly at random.
LocalId select_max(std::span<const double> scores, Rng& rng);
LocalId select_max(std::span<const double> scores, std::span<const LocalId> among, Rng& rng);

/// The rumor center: argmax of log_r, ties broken uniformly using `seed`.
LocalId rumor_center(const CentralityTable& table, std::uint64_t seed);

/// BFS hop distances over the infected subgraph; -1 where unreachable.
std::vector<int> hop_distances(const DiffusionSnapshot& snap, LocalId from);
/// BFS hop distances over a whole graph; -1 where unreachable.
std::vector<int> hop_distances(const Graph& graph, NodeId from);

/// Per-node score log P(sigma_v | v) + log R(v, T_b(v)) where T_b(v) is the
/// BFS tree of the infected subgraph rooted at v, sigma_v its BFS order, and
/// P(sigma_v | v) = prod_k 1 / b_k with b_k the number of graph edges leaving
/// the first k nodes of sigma_v.
std::vector<double> bfs_heuristic_scores(const DiffusionSnapshot& snap);
LocalId bfs_heuristic_estimate(const DiffusionSnapshot& snap, std::uint64_t seed);

/// log of the total rumor centrality of the component containing `v` once
/// the edge (w, v) is removed. -infinity when v is not infected.
double subtree_centrality_mass(const DiffusionSnapshot& snap, const CentralityTable& table, LocalId w,
                               NodeId v);

/// log(sum exp(x)) over the values, -infinity for an empty range.
double log_sum_exp(std::span<const double> values);

}  // namespace rumor

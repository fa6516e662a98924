#include "rumor/diffusion.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rumor/seeding.hpp"

namespace rumor {

DiffusionSnapshot::DiffusionSnapshot(GraphKind kind, unsigned tree_degree, std::vector<NodeId> infected,
                                     std::vector<LocalId> parents,
                                     std::vector<std::vector<NodeId>> topology)
    : kind_(kind),
      tree_degree_(tree_degree),
      infected_(std::move(infected)),
      parents_(std::move(parents)),
      topology_(std::move(topology)) {
    const std::size_t n = infected_.size();
    if (n == 0) throw std::invalid_argument("snapshot needs at least the source");
    if (parents_.size() != n || topology_.size() != n)
        throw std::invalid_argument("snapshot parts have inconsistent sizes");
    local_.reserve(n);
    for (LocalId i = 0; i < n; ++i)
        if (!local_.emplace(infected_[i], i).second)
            throw std::invalid_argument("node infected twice: " + std::to_string(infected_[i]));
    if (parents_[0] != no_parent) throw std::invalid_argument("source must not have a parent");
    for (LocalId i = 1; i < n; ++i) {
        if (parents_[i] >= i)
            throw std::invalid_argument("parent must be infected earlier than its child");
        const auto& nbrs = topology_[i];
        if (std::find(nbrs.begin(), nbrs.end(), infected_[parents_[i]]) == nbrs.end())
            throw std::invalid_argument("parent is not a neighbor of node " + std::to_string(infected_[i]));
    }

    infected_adjacency_.resize(n);
    std::size_t half_edges = 0;
    for (LocalId i = 0; i < n; ++i) {
        for (NodeId w : topology_[i]) {
            auto it = local_.find(w);
            if (it != local_.end()) infected_adjacency_[i].push_back(it->second);
        }
        half_edges += infected_adjacency_[i].size();
    }
    infected_edges_ = half_edges / 2;
}

std::optional<LocalId> DiffusionSnapshot::local_index(NodeId v) const {
    auto it = local_.find(v);
    if (it == local_.end()) return std::nullopt;
    return it->second;
}

std::optional<NodeId> DiffusionSnapshot::parent(NodeId v) const {
    auto i = local_index(v);
    if (!i || parents_[*i] == no_parent) return std::nullopt;
    return infected_[parents_[*i]];
}

namespace {

struct BoundaryEdge {
    LocalId from;
    NodeId to;
};

// Neighbors is a callable NodeId -> range of NodeId. It may grow a lazy tree,
// so results are copied before the next call.
template <class Neighbors>
DiffusionSnapshot spread(GraphKind kind, unsigned tree_degree, NodeId source, std::size_t n_infected,
                         std::uint64_t seed, Neighbors&& neighbors_of) {
    if (n_infected < 1) throw std::invalid_argument("n_infected must be >= 1");

    auto rng = make_rng(seed);
    std::vector<NodeId> order{source};
    std::vector<LocalId> parents{no_parent};
    std::vector<std::vector<NodeId>> topology;
    std::unordered_map<NodeId, LocalId> infected{{source, 0}};
    std::vector<BoundaryEdge> boundary;

    const auto absorb = [&](LocalId i) {
        auto nbrs = neighbors_of(order[i]);
        topology.emplace_back(nbrs.begin(), nbrs.end());
        for (NodeId w : topology.back())
            if (!infected.contains(w)) boundary.push_back({i, w});
    };
    absorb(0);

    while (order.size() < n_infected) {
        // Edges into already-infected nodes are stale; drop them as they
        // are drawn. Rejection keeps the draw uniform over live edges.
        std::optional<BoundaryEdge> chosen;
        while (!boundary.empty()) {
            std::uniform_int_distribution<std::size_t> pick(0, boundary.size() - 1);
            const std::size_t j = pick(rng);
            if (infected.contains(boundary[j].to)) {
                boundary[j] = boundary.back();
                boundary.pop_back();
                continue;
            }
            chosen = boundary[j];
            break;
        }
        if (!chosen)
            throw std::runtime_error("component exhausted after infecting " + std::to_string(order.size()) +
                                     " of " + std::to_string(n_infected) + " nodes");
        const auto i = static_cast<LocalId>(order.size());
        order.push_back(chosen->to);
        parents.push_back(chosen->from);
        infected.emplace(chosen->to, i);
        absorb(i);
    }
    return DiffusionSnapshot(kind, tree_degree, std::move(order), std::move(parents), std::move(topology));
}

}  // namespace

DiffusionSnapshot simulate_si(const Graph& graph, NodeId source, std::size_t n_infected, std::uint64_t seed) {
    if (source >= graph.node_count()) throw std::invalid_argument("source not in graph");
    unsigned degree = 0;
    if (graph.kind() == GraphKind::regular_tree) degree = static_cast<unsigned>(graph.max_degree());
    return spread(graph.kind(), degree, source, n_infected, seed,
                  [&](NodeId v) { return graph.neighbors(v); });
}

DiffusionSnapshot simulate_si(LazyRegularTree& tree, NodeId source, std::size_t n_infected, std::uint64_t seed) {
    if (source >= tree.node_count()) throw std::invalid_argument("source not in tree");
    return spread(GraphKind::regular_tree, tree.degree(), source, n_infected, seed,
                  [&](NodeId v) { return tree.neighbors(v); });
}

NodeId pick_random_source(const Graph& graph, std::uint64_t seed) {
    if (graph.node_count() == 0) throw std::invalid_argument("empty graph has no source");
    auto rng = make_rng(seed);
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(graph.node_count() - 1));
    return pick(rng);
}

NodeId pick_random_source(const LazyRegularTree&, std::uint64_t) { return LazyRegularTree::root(); }

void dump_snapshot(const DiffusionSnapshot& snap, std::ostream& out) {
    out << "source " << snap.source() << '\n' << "n " << snap.size() << '\n';
    for (LocalId i = 0; i < snap.size(); ++i) {
        out << snap.node(i) << ' ';
        if (snap.parent_local(i) == no_parent)
            out << '-';
        else
            out << snap.node(snap.parent_local(i));
        out << ' ' << i << '\n';
    }
}

namespace {

struct DumpRecord {
    NodeId node;
    std::optional<NodeId> parent;
    std::size_t order;
};

std::vector<DumpRecord> parse_dump(std::istream& in) {
    std::string key;
    NodeId source = 0;
    std::size_t n = 0;
    if (!(in >> key >> source) || key != "source") throw std::runtime_error("snapshot: expected 'source <id>'");
    if (!(in >> key >> n) || key != "n") throw std::runtime_error("snapshot: expected 'n <N>'");
    if (n == 0) throw std::runtime_error("snapshot: n must be positive");

    std::vector<DumpRecord> records(n);
    std::vector<bool> filled(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        NodeId w = 0;
        std::string parent;
        std::size_t order = 0;
        if (!(in >> w >> parent >> order))
            throw std::runtime_error("snapshot: truncated at record " + std::to_string(k + 1));
        if (order >= n || filled[order]) throw std::runtime_error("snapshot: bad order index " + std::to_string(order));
        filled[order] = true;
        std::optional<NodeId> p;
        if (parent != "-") p = static_cast<NodeId>(std::stoul(parent));
        records[order] = {w, p, order};
    }
    if (records[0].node != source || records[0].parent)
        throw std::runtime_error("snapshot: order 0 must be the source with parent '-'");
    return records;
}

DiffusionSnapshot assemble(const std::vector<DumpRecord>& records, const Graph* graph) {
    const std::size_t n = records.size();
    std::unordered_map<NodeId, LocalId> local;
    std::vector<NodeId> order(n);
    for (LocalId i = 0; i < n; ++i) {
        order[i] = records[i].node;
        local.emplace(order[i], i);
    }
    std::vector<LocalId> parents(n, no_parent);
    for (LocalId i = 1; i < n; ++i) {
        if (!records[i].parent) throw std::runtime_error("snapshot: non-source node without parent");
        auto it = local.find(*records[i].parent);
        if (it == local.end()) throw std::runtime_error("snapshot: parent is not infected");
        parents[i] = it->second;
    }
    std::vector<std::vector<NodeId>> topology(n);
    GraphKind kind = GraphKind::imported;
    unsigned degree = 0;
    if (graph) {
        kind = graph->kind();
        if (kind == GraphKind::regular_tree) degree = static_cast<unsigned>(graph->max_degree());
        for (LocalId i = 0; i < n; ++i) {
            if (order[i] >= graph->node_count()) throw std::runtime_error("snapshot: node outside graph");
            auto nbrs = graph->neighbors(order[i]);
            topology[i].assign(nbrs.begin(), nbrs.end());
        }
    } else {
        for (LocalId i = 1; i < n; ++i) {
            topology[i].push_back(order[parents[i]]);
            topology[parents[i]].push_back(order[i]);
        }
    }
    return DiffusionSnapshot(kind, degree, std::move(order), std::move(parents), std::move(topology));
}

}  // namespace

DiffusionSnapshot restore_snapshot(std::istream& in) { return assemble(parse_dump(in), nullptr); }

DiffusionSnapshot restore_snapshot(std::istream& in, const Graph& graph) {
    return assemble(parse_dump(in), &graph);
}

}  // namespace rumor

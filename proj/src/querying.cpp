#include "rumor/querying.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "rumor/seeding.hpp"

namespace rumor {

TruthModel::TruthModel(double p, double q, unsigned d) : p_(p), q_(q), d_(d) {
    if (!(p > 0.5 && p <= 1.0)) throw std::invalid_argument("p must lie in (1/2, 1]");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("q must lie in [0, 1]");
    if (d < 1) throw std::invalid_argument("d must be positive");
}

void TruthModel::require_direction_bias() const {
    if (!(q_ > 1.0 / d_))
        throw std::invalid_argument("q must exceed 1/d = " + std::to_string(1.0 / d_) + " on a d-regular tree");
}

unsigned DirectionAnswers::count_for(NodeId v) const {
    for (std::size_t i = 0; i < neighbors.size(); ++i)
        if (neighbors[i] == v) return counts[i];
    return 0;
}

QueryOracle::QueryOracle(const DiffusionSnapshot& snap, const TruthModel& model, std::uint64_t seed)
    : snap_(snap), model_(model), seed_(seed) {}

unsigned QueryOracle::ask_identity(NodeId v, unsigned r) {
    if (!snap_.is_infected(v)) throw std::invalid_argument("identity question to an uninfected node");
    const std::uint64_t visit = identity_visits_[v]++;
    const bool truth = v == snap_.source();
    unsigned yes = 0;
    for (unsigned j = 0; j < r; ++j) {
        const double u = to_unit(derive_seed({seed_, stream::identity, v, visit, j}));
        const bool honest = u < model_.p();
        if (honest == truth) ++yes;
    }
    return yes;
}

DirectionAnswers QueryOracle::ask_direction(NodeId v, unsigned r) {
    auto local = snap_.local_index(v);
    if (!local) throw std::invalid_argument("direction question to an uninfected node");
    if (*local == 0) throw std::invalid_argument("the source has no parent to designate");

    const NodeId parent = snap_.node(snap_.parent_local(*local));
    auto nbrs = snap_.topology_neighbors(*local);
    DirectionAnswers out;
    out.neighbors.assign(nbrs.begin(), nbrs.end());
    out.counts.assign(nbrs.size(), 0);
    out.r = r;

    const auto parent_pos = static_cast<std::size_t>(
        std::find(out.neighbors.begin(), out.neighbors.end(), parent) - out.neighbors.begin());
    const std::size_t decoys = out.neighbors.size() - 1;
    const std::uint64_t visit = direction_visits_[v]++;

    for (unsigned j = 0; j < r; ++j) {
        const double u = to_unit(derive_seed({seed_, stream::direction_truth, v, visit, j}));
        if (u < model_.q() || decoys == 0) {
            ++out.counts[parent_pos];
            continue;
        }
        const double w = to_unit(derive_seed({seed_, stream::direction_decoy, v, visit, j}));
        auto k = std::min(static_cast<std::size_t>(w * static_cast<double>(decoys)), decoys - 1);
        if (k >= parent_pos) ++k;  // skip over the parent
        ++out.counts[k];
    }
    return out;
}

unsigned ask_identity(const DiffusionSnapshot& snap, const TruthModel& model, NodeId v, unsigned r,
                      std::uint64_t seed) {
    QueryOracle oracle(snap, model, seed);
    return oracle.ask_identity(v, r);
}

DirectionAnswers ask_direction(const DiffusionSnapshot& snap, const TruthModel& model, NodeId v, unsigned r,
                               std::uint64_t seed) {
    QueryOracle oracle(snap, model, seed);
    return oracle.ask_direction(v, r);
}

}  // namespace rumor

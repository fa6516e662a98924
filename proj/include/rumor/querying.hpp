#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "rumor/diffusion.hpp"

namespace rumor {

/// Homogeneous truthfulness: identity answers are truthful with probability
/// p, direction answers name the true spreader with probability q.
class TruthModel {
public:
    /// Throws std::invalid_argument unless p in (1/2, 1], q in [0, 1], d >= 1.
    TruthModel(double p, double q, unsigned d);

    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }
    unsigned d() const noexcept { return d_; }

    /// Throws unless q > 1/d. Interactive estimators call this on regular trees.
    void require_direction_bias() const;

private:
    double p_;
    double q_;
    unsigned d_;
};

/// Designation counts over the graph neighbors of one queriee.
struct DirectionAnswers {
    std::vector<NodeId> neighbors;
    std::vector<unsigned> counts;  // parallel to neighbors, sums to r
    unsigned r = 0;

    unsigned count_for(NodeId v) const;
};

/// The answering population of one snapshot.
///
/// Every answer is a pure function of (seed, question kind, queriee, visit,
/// repetition), so answers do not depend on the order questions are asked or
/// on which estimator asks them. Asking the same node again (a new visit)
/// draws fresh answers.
class QueryOracle {
public:
    QueryOracle(const DiffusionSnapshot& snap, const TruthModel& model, std::uint64_t seed);

    /// Number of "yes" answers to "are you the source?" repeated r times.
    unsigned ask_identity(NodeId v, unsigned r);

    /// "Who spread the rumor to you?" repeated r times. Lies pick uniformly
    /// among all graph neighbors other than the true parent.
    /// Throws std::invalid_argument if v is the source.
    DirectionAnswers ask_direction(NodeId v, unsigned r);

    /// Interactive identity answers are always truthful.
    bool is_source(NodeId v) const { return v == snap_.source(); }

private:
    const DiffusionSnapshot& snap_;
    TruthModel model_;
    std::uint64_t seed_;
    std::unordered_map<NodeId, std::uint64_t> identity_visits_;
    std::unordered_map<NodeId, std::uint64_t> direction_visits_;
};

/// One-shot forms of the oracle, as if from a fresh population.
unsigned ask_identity(const DiffusionSnapshot& snap, const TruthModel& model, NodeId v, unsigned r,
                      std::uint64_t seed);
DirectionAnswers ask_direction(const DiffusionSnapshot& snap, const TruthModel& model, NodeId v, unsigned r,
                               std::uint64_t seed);

}  // namespace rumor

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rumor/diffusion.hpp"
#include "rumor/querying.hpp"

namespace rumor {

/// Questions issued against a total budget K; one unit per question.
class BudgetLedger {
public:
    explicit BudgetLedger(std::size_t total) : total_(total) {}

    std::size_t total() const noexcept { return total_; }
    std::size_t spent() const noexcept { return spent_; }
    std::size_t remaining() const noexcept { return total_ - spent_; }
    bool can_spend(std::size_t n) const noexcept { return n <= remaining(); }
    /// Throws std::logic_error on overdraft.
    void spend(std::size_t n);

private:
    std::size_t total_;
    std::size_t spent_ = 0;
};

enum class QuestionKind { identity, direction };

/// One round of questions to one queriee.
struct TraceEntry {
    QuestionKind kind = QuestionKind::identity;
    NodeId queriee = 0;
    unsigned repetitions = 0;      // budget consumed by this round
    unsigned yes_count = 0;        // identity rounds
    bool kept = false;             // identity: passed the filter, or confirmed source
    std::optional<NodeId> next;    // direction rounds: where the walk moved
    unsigned next_count = 0;       // designations received by `next`
    std::size_t remaining = 0;     // budget left after the round
    std::string note;
};

struct EstimationResult {
    NodeId estimate = 0;
    std::size_t budget_spent = 0;
    unsigned r = 0;
    std::vector<TraceEntry> trace;
    bool hit = false;  // set by the caller, who knows the truth
};

/// floor(1 + (1-p) ln K / (2e ln(d-1))), at least 1.
unsigned r_star_batch(std::size_t K, double p, unsigned d);
/// floor(1 + 2d(1-q)^2 ln ln K / (3(d-1))), at least 1; 1 when K < 3.
unsigned r_star_interactive(std::size_t K, double q, unsigned d);

/// Candidate radius: floor(ln(K(d-2)/(r d) + 2) / ln(d-1)).
unsigned candidate_radius(std::size_t K, unsigned r, unsigned d);

/// Per-node source scores: log rumor centrality when the infected subgraph
/// is a tree, the BFS-heuristic score otherwise.
std::vector<double> source_scores(const DiffusionSnapshot& snap);

/// Hop-ball candidates around the center, r identity questions each,
/// majority filter, then the highest-scoring survivor.
/// `r` defaults to r_star_batch and is clamped to [1, K].
EstimationResult sbq(const DiffusionSnapshot& snap, const TruthModel& model, std::size_t K,
                     std::optional<unsigned> r, std::uint64_t seed);

/// Top floor(K/r) nodes by score, r questions each, then the exact
/// posterior argmax of log R(v) + (2 x_v - r) ln(p / (1-p)).
EstimationResult sbq_mle_baseline(const DiffusionSnapshot& snap, const TruthModel& model, std::size_t K,
                                  unsigned r, std::uint64_t seed);

/// Walk from the center: one identity question per stop (truthful), then r
/// direction questions and a move to the most-designated infected neighbor.
/// `r` defaults to r_star_interactive and is clamped to [1, K].
EstimationResult idq(const DiffusionSnapshot& snap, const TruthModel& model, std::size_t K,
                     std::optional<unsigned> r, std::uint64_t seed);

/// idq with each move chosen by the exact per-step likelihood: the
/// centrality mass behind each neighbor times the multinomial likelihood of
/// the designations. Tree snapshots only; throws NotATreeError otherwise.
EstimationResult idq_mle_baseline(const DiffusionSnapshot& snap, const TruthModel& model, std::size_t K,
                                  unsigned r, std::uint64_t seed);

/// Rumor center (trees) or BFS-heuristic estimate (loopy graphs); no budget.
EstimationResult no_query_baseline(const DiffusionSnapshot& snap, std::uint64_t seed);

/// "step kind queriee answer_summary remaining_budget", one line per round.
void write_trace(const EstimationResult& result, std::ostream& out);

}  // namespace rumor

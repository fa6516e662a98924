#include "rumor/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rumor/centrality.hpp"
#include "rumor/seeding.hpp"

namespace rumor {

void BudgetLedger::spend(std::size_t n) {
    if (!can_spend(n))
        throw std::logic_error("budget overdraft: " + std::to_string(n) + " requested, " +
                               std::to_string(remaining()) + " left");
    spent_ += n;
}

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

void require_tree_degree(unsigned d) {
    if (d < 3) throw std::invalid_argument("degree parameter d must be >= 3");
}

unsigned floor_at_least_one(double x) {
    if (!(x >= 1.0)) return 1;
    return static_cast<unsigned>(std::floor(x + 1e-12));
}

unsigned clamp_r(unsigned r, std::size_t K) {
    const auto cap = static_cast<unsigned>(std::min<std::size_t>(K, std::numeric_limits<unsigned>::max()));
    return std::clamp(r, 1u, std::max(cap, 1u));
}

// x * log_y with 0 * anything = 0, so impossible events with zero count
// do not poison the sum.
double xlogy(double x, double log_y) { return x == 0.0 ? 0.0 : x * log_y; }

struct Start {
    std::vector<double> scores;
    LocalId center;
};

Start locate_center(const DiffusionSnapshot& snap, Rng& rng) {
    Start s{source_scores(snap), 0};
    s.center = select_max(s.scores, rng);
    return s;
}

TraceEntry identity_entry(NodeId v, unsigned r, unsigned yes, bool kept, std::size_t remaining) {
    TraceEntry e;
    e.kind = QuestionKind::identity;
    e.queriee = v;
    e.repetitions = r;
    e.yes_count = yes;
    e.kept = kept;
    e.remaining = remaining;
    return e;
}

bool passes_majority(unsigned yes, unsigned r) { return 2 * yes >= r; }

}  // namespace

unsigned r_star_batch(std::size_t K, double p, unsigned d) {
    require_tree_degree(d);
    if (K < 1) throw std::invalid_argument("K must be >= 1");
    const double x = 1.0 + (1.0 - p) * std::log(static_cast<double>(K)) /
                               (2.0 * std::numbers::e * std::log(static_cast<double>(d - 1)));
    return floor_at_least_one(x);
}

unsigned r_star_interactive(std::size_t K, double q, unsigned d) {
    require_tree_degree(d);
    if (K < 3) return 1;
    const double dd = static_cast<double>(d);
    const double x = 1.0 + 2.0 * dd * (1.0 - q) * (1.0 - q) * std::log(std::log(static_cast<double>(K))) /
                               (3.0 * (dd - 1.0));
    return floor_at_least_one(x);
}

unsigned candidate_radius(std::size_t K, unsigned r, unsigned d) {
    require_tree_degree(d);
    if (r < 1) throw std::invalid_argument("r must be >= 1");
    const double dd = static_cast<double>(d);
    const double arg = static_cast<double>(K) * (dd - 2.0) / (static_cast<double>(r) * dd) + 2.0;
    const double l = std::log(arg) / std::log(dd - 1.0);
    return static_cast<unsigned>(std::floor(l + 1e-9));
}

std::vector<double> source_scores(const DiffusionSnapshot& snap) {
    if (snap.infected_is_tree()) return rumor_centrality_all(snap).log_r;
    return bfs_heuristic_scores(snap);
}

EstimationResult sbq(const DiffusionSnapshot& snap, const TruthModel& model, std::size_t K,
                     std::optional<unsigned> r_opt, std::uint64_t seed) {
    if (K < 1) throw std::invalid_argument("sbq: budget K must be >= 1");
    if (r_opt && *r_opt > K) throw std::invalid_argument("sbq: repetition count exceeds budget");
    const unsigned r = clamp_r(r_opt.value_or(r_star_batch(K, model.p(), model.d())), K);

    auto rng = make_rng(derive_seed({seed, stream::tiebreak}));
    QueryOracle oracle(snap, model, derive_seed({seed, stream::query}));
    BudgetLedger budget(K);
    EstimationResult result;
    result.r = r;

    const auto [scores, center] = locate_center(snap, rng);
    const unsigned radius = candidate_radius(K, r, model.d());
    const auto dist = hop_distances(snap, center);

    std::vector<LocalId> ball;
    std::vector<LocalId> shell;
    for (LocalId i = 0; i < snap.size(); ++i) {
        if (dist[i] < 0) continue;
        if (static_cast<unsigned>(dist[i]) <= radius)
            ball.push_back(i);
        else if (static_cast<unsigned>(dist[i]) == radius + 1)
            shell.push_back(i);
    }
    // On loopy graphs the ball can hold more than K/r nodes; keep the
    // closest, then the highest scoring.
    const std::size_t capacity = K / r;
    if (ball.size() > capacity) {
        std::shuffle(ball.begin(), ball.end(), rng);
        std::stable_sort(ball.begin(), ball.end(), [&](LocalId a, LocalId b) {
            if (dist[a] != dist[b]) return dist[a] < dist[b];
            return scores[a] > scores[b];
        });
        ball.resize(capacity);
    }

    std::vector<LocalId> kept;
    const auto query = [&](LocalId i) {
        const NodeId v = snap.node(i);
        const unsigned yes = oracle.ask_identity(v, r);
        budget.spend(r);
        const bool pass = passes_majority(yes, r);
        if (pass) kept.push_back(i);
        result.trace.push_back(identity_entry(v, r, yes, pass, budget.remaining()));
    };

    for (LocalId i : ball) query(i);

    std::shuffle(shell.begin(), shell.end(), rng);
    for (LocalId i : shell) {
        if (!budget.can_spend(r)) break;
        query(i);
        result.trace.back().note = "shell";
    }

    const LocalId pick = kept.empty() ? select_max(scores, ball, rng) : select_max(scores, kept, rng);
    result.estimate = snap.node(pick);
    result.budget_spent = budget.spent();
    return result;
}

EstimationResult sbq_mle_baseline(const DiffusionSnapshot& snap, const TruthModel& model, std::size_t K,
                                  unsigned r, std::uint64_t seed) {
    if (K < 1) throw std::invalid_argument("sbq_mle_baseline: budget K must be >= 1");
    if (r < 1 || r > K) throw std::invalid_argument("sbq_mle_baseline: r must lie in [1, K]");

    auto rng = make_rng(derive_seed({seed, stream::tiebreak}));
    QueryOracle oracle(snap, model, derive_seed({seed, stream::query}));
    BudgetLedger budget(K);
    EstimationResult result;
    result.r = r;

    const auto scores = source_scores(snap);
    std::vector<LocalId> order(snap.size());
    for (LocalId i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::stable_sort(order.begin(), order.end(), [&](LocalId a, LocalId b) { return scores[a] > scores[b]; });
    order.resize(std::min(order.size(), K / r));

    const double p = model.p();
    std::vector<double> posterior(snap.size(), neg_inf);
    for (LocalId i : order) {
        const NodeId v = snap.node(i);
        const unsigned yes = oracle.ask_identity(v, r);
        budget.spend(r);
        result.trace.push_back(identity_entry(v, r, yes, false, budget.remaining()));
        if (p < 1.0) {
            const double shift = (2.0 * yes - r) * std::log(p / (1.0 - p));
            posterior[i] = scores[i] + shift;
        } else {
            // With p = 1 only an all-yes node can be the source.
            posterior[i] = yes == r ? scores[i] : neg_inf;
        }
    }
    const bool any_finite =
        std::any_of(order.begin(), order.end(), [&](LocalId i) { return posterior[i] != neg_inf; });
    const LocalId pick = any_finite ? select_max(posterior, order, rng) : select_max(scores, order, rng);
    result.estimate = snap.node(pick);
    result.budget_spent = budget.spent();
    return result;
}

namespace {

enum class MoveRule { majority, likelihood };

EstimationResult interactive_walk(const DiffusionSnapshot& snap, const TruthModel& model, std::size_t K,
                                  unsigned r, std::uint64_t seed, MoveRule rule) {
    if (snap.kind() == GraphKind::regular_tree) model.require_direction_bias();

    auto rng = make_rng(derive_seed({seed, stream::tiebreak}));
    QueryOracle oracle(snap, model, derive_seed({seed, stream::query}));
    BudgetLedger budget(K);
    EstimationResult result;
    result.r = r;

    const auto start = locate_center(snap, rng);
    std::optional<CentralityTable> table;
    if (rule == MoveRule::likelihood) table = rumor_centrality_all(snap);
    const double log_q = std::log(model.q());

    LocalId s = start.center;
    while (budget.can_spend(1)) {
        const NodeId v = snap.node(s);
        budget.spend(1);
        const bool found = oracle.is_source(v);
        result.trace.push_back(identity_entry(v, 1, found ? 1 : 0, found, budget.remaining()));
        if (found || !budget.can_spend(r)) break;

        const DirectionAnswers answers = oracle.ask_direction(v, r);
        budget.spend(r);

        std::vector<LocalId> candidates;
        std::vector<double> weight(snap.size(), neg_inf);
        for (LocalId w : snap.infected_neighbors(s)) {
            candidates.push_back(w);
            const double y = answers.count_for(snap.node(w));
            if (rule == MoveRule::majority) {
                weight[w] = y;
            } else {
                const std::size_t decoys = answers.neighbors.size() - 1;
                const double log_decoy =
                    decoys == 0 ? 0.0 : std::log((1.0 - model.q()) / static_cast<double>(decoys));
                weight[w] = subtree_centrality_mass(snap, *table, s, snap.node(w)) + xlogy(y, log_q) +
                            xlogy(static_cast<double>(r) - y, log_decoy);
            }
        }

        TraceEntry entry;
        entry.kind = QuestionKind::direction;
        entry.queriee = v;
        entry.repetitions = r;
        if (rule == MoveRule::majority) {
            const auto top = *std::max_element(answers.counts.begin(), answers.counts.end());
            std::size_t top_infected = 0;
            std::size_t top_total = 0;
            for (std::size_t k = 0; k < answers.neighbors.size(); ++k) {
                if (answers.counts[k] != top) continue;
                ++top_total;
                if (snap.is_infected(answers.neighbors[k])) ++top_infected;
            }
            if (top_infected < top_total) entry.note = "designee not infected; restricted to infected neighbors";
        }
        s = select_max(weight, candidates, rng);
        entry.next = snap.node(s);
        entry.next_count = answers.count_for(snap.node(s));
        entry.remaining = budget.remaining();
        result.trace.push_back(std::move(entry));
    }

    result.estimate = snap.node(s);
    result.budget_spent = budget.spent();
    return result;
}

}  // namespace

EstimationResult idq(const DiffusionSnapshot& snap, const TruthModel& model, std::size_t K,
                     std::optional<unsigned> r_opt, std::uint64_t seed) {
    const unsigned r = K == 0 ? 1 : clamp_r(r_opt.value_or(r_star_interactive(K, model.q(), model.d())), K);
    return interactive_walk(snap, model, K, r, seed, MoveRule::majority);
}

EstimationResult idq_mle_baseline(const DiffusionSnapshot& snap, const TruthModel& model, std::size_t K,
                                  unsigned r, std::uint64_t seed) {
    if (r < 1) throw std::invalid_argument("idq_mle_baseline: r must be >= 1");
    if (!snap.infected_is_tree())
        throw NotATreeError("idq_mle_baseline needs a tree snapshot; use idq on loopy graphs");
    return interactive_walk(snap, model, K, r, seed, MoveRule::likelihood);
}

EstimationResult no_query_baseline(const DiffusionSnapshot& snap, std::uint64_t seed) {
    auto rng = make_rng(derive_seed({seed, stream::tiebreak}));
    const auto start = locate_center(snap, rng);
    EstimationResult result;
    result.estimate = snap.node(start.center);
    return result;
}

void write_trace(const EstimationResult& result, std::ostream& out) {
    std::size_t step = 0;
    for (const auto& e : result.trace) {
        out << ++step << ' ' << (e.kind == QuestionKind::identity ? "identity" : "direction") << ' '
            << e.queriee << ' ';
        if (e.kind == QuestionKind::identity)
            out << "yes=" << e.yes_count << '/' << e.repetitions << (e.kept ? ",kept" : ",dropped");
        else
            out << "next=" << (e.next ? std::to_string(*e.next) : "-") << ",count=" << e.next_count << '/'
                << e.repetitions;
        out << ' ' << e.remaining << '\n';
    }
}

}  // namespace rumor

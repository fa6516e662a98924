#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "rumor/centrality.hpp"
#include "rumor/estimators.hpp"
#include "rumor/generators.hpp"
#include "rumor/seeding.hpp"
#include "support.hpp"

using namespace rumor;
using testing::Adjacency;

namespace {

DiffusionSnapshot tree_snapshot(std::size_t n, std::uint64_t seed, unsigned d = 3) {
    LazyRegularTree tree(d);
    return simulate_si(tree, 0, n, seed);
}

std::size_t trace_cost(const EstimationResult& r) {
    std::size_t total = 0;
    for (const auto& e : r.trace) total += e.repetitions;
    return total;
}

// Hop distance between two infected nodes of a snapshot.
int distance(const DiffusionSnapshot& snap, NodeId a, NodeId b) {
    return hop_distances(snap, *snap.local_index(a))[*snap.local_index(b)];
}

bool near_best(const std::vector<double>& values, std::size_t pick) {
    const double best = *std::max_element(values.begin(), values.end());
    return values[pick] >= best - 1e-9 * std::max(1.0, std::abs(best));
}

}  // namespace

TEST_CASE("budget ledger refuses overdraft") {
    BudgetLedger b(5);
    b.spend(3);
    CHECK(b.remaining() == 2);
    CHECK_FALSE(b.can_spend(3));
    CHECK_THROWS_AS(b.spend(3), std::logic_error);
    CHECK(b.spent() == 3);
}

TEST_CASE("closed-form repetition counts") {
    CHECK(r_star_batch(766, 1.0, 3) == 1);
    CHECK(r_star_batch(123456, 1.0, 3) == 1);
    CHECK(r_star_batch(766, 0.6, 3) == 1);
    CHECK(r_star_batch(1000000, 0.5 + 1e-6, 3) == 2);
    // Independent evaluation of the same expression.
    const double x = 1.0 + 0.4 * std::log(766.0) / (2.0 * std::exp(1.0) * std::log(2.0));
    CHECK(r_star_batch(766, 0.6, 3) == static_cast<unsigned>(std::floor(x)));
    CHECK_THROWS(r_star_batch(766, 0.7, 2));

    CHECK(r_star_interactive(200, 1.0, 3) == 1);
    CHECK(r_star_interactive(200, 0.6, 3) == 1);
    CHECK(r_star_interactive(10000, 0.4, 3) == 1);
    CHECK(r_star_interactive(2, 0.4, 3) == 1);
    CHECK(r_star_interactive(100000000, 0.0, 3) == 3);

    CHECK(candidate_radius(766, 1, 3) == 8);
    CHECK(candidate_radius(765, 1, 3) == 8);
    CHECK(candidate_radius(100, 1, 3) == 5);
}

TEST_CASE("SB-Q at p = 1 returns the source whenever it is queried") {
    const TruthModel model(1.0, 0.6, 3);
    int queried = 0;
    for (std::uint64_t t = 0; t < 60; ++t) {
        const auto snap = tree_snapshot(400, 1000 + t);
        const auto res = sbq(snap, model, 766, 1, t);
        const bool source_queried = std::any_of(res.trace.begin(), res.trace.end(),
                                                [&](const TraceEntry& e) { return e.queriee == snap.source(); });
        if (source_queried) {
            ++queried;
            CHECK(res.estimate == snap.source());
        }
    }
    CHECK(queried > 50);
}

TEST_CASE("SB-Q filter, budget and trace bookkeeping") {
    for (std::uint64_t t = 0; t < 40; ++t) {
        const auto snap = tree_snapshot(400, 2000 + t);
        const TruthModel model(0.55 + 0.01 * t, 0.6, 3);
        const std::size_t K = 50 + 30 * t;
        const unsigned r = 1 + t % 5;
        const auto res = sbq(snap, model, K, r, t);
        CHECK(res.r == r);
        CHECK(res.budget_spent <= K);
        CHECK(trace_cost(res) == res.budget_spent);
        std::vector<NodeId> kept;
        for (const auto& e : res.trace) {
            CHECK(e.kind == QuestionKind::identity);
            CHECK(e.repetitions == r);
            CHECK(e.yes_count <= r);
            CHECK(e.kept == (2 * e.yes_count >= r));
            if (e.kept) kept.push_back(e.queriee);
        }
        // The estimate is a filtered survivor whenever one exists.
        if (!kept.empty()) CHECK(std::find(kept.begin(), kept.end(), res.estimate) != kept.end());
    }
}

TEST_CASE("SB-Q candidate set is the hop ball around the rumor center") {
    const auto snap = tree_snapshot(400, 77);
    const TruthModel model(0.7, 0.6, 3);
    const std::size_t K = 100;  // radius 5 at r = 1
    const auto res = sbq(snap, model, K, 1, 3);
    const auto table = rumor_centrality_all(snap);
    const auto center = rumor_center(table, derive_seed({3, stream::tiebreak}));
    const auto dist = hop_distances(snap, center);
    std::size_t ball = 0;
    for (const auto& e : res.trace) {
        const int d = dist[*snap.local_index(e.queriee)];
        if (e.note == "shell") {
            CHECK(d == 6);
        } else {
            CHECK(d <= 5);
            ++ball;
        }
    }
    std::size_t expected_ball = 0;
    for (int d : dist) expected_ball += d >= 0 && d <= 5 ? 1 : 0;
    CHECK(ball == std::min<std::size_t>(expected_ball, K));
}

TEST_CASE("SB-Q errors and defaults") {
    const auto snap = tree_snapshot(50, 1);
    const TruthModel model(0.7, 0.6, 3);
    CHECK_THROWS_AS(sbq(snap, model, 3, 5u, 1), std::invalid_argument);
    CHECK_THROWS_AS(sbq(snap, model, 0, std::nullopt, 1), std::invalid_argument);
    CHECK(sbq(snap, model, 766, std::nullopt, 1).r == r_star_batch(766, 0.7, 3));
    // Candidate set larger than the snapshot: every infected node is asked.
    const auto all = sbq(snap, model, 5000, 1u, 1);
    CHECK(all.trace.size() == snap.size());
}

TEST_CASE("SB-Q MLE matches the exhaustive likelihood oracle on a 3-node path") {
    const Adjacency path = testing::adjacency_from_edges(3, {{0, 1}, {1, 2}});
    for (NodeId source = 0; source < 3; ++source) {
        const auto snap = testing::full_snapshot(path, source);
        for (double p : {0.6, 0.75, 0.9}) {
            const TruthModel model(p, 0.6, 3);
            for (std::uint64_t seed = 0; seed < 40; ++seed) {
                const auto res = sbq_mle_baseline(snap, model, 3, 1, seed);
                REQUIRE(res.trace.size() == 3);
                std::vector<unsigned> yes(3);
                for (const auto& e : res.trace) yes[e.queriee] = e.yes_count;
                std::vector<double> like(3);
                for (NodeId v = 0; v < 3; ++v) {
                    int consistent = 0;
                    for (NodeId u = 0; u < 3; ++u) consistent += (yes[u] == 1) == (u == v) ? 1 : 0;
                    like[v] = static_cast<double>(testing::count_infection_orderings(path, v)) *
                              std::pow(p, consistent) * std::pow(1.0 - p, 3 - consistent);
                }
                CHECK(near_best(like, res.estimate));
            }
        }
    }
}

TEST_CASE("SB-Q MLE at p = 1 picks the unique yes node") {
    const auto snap = tree_snapshot(300, 5);
    const TruthModel model(1.0, 0.6, 3);
    const auto res = sbq_mle_baseline(snap, model, 300, 1, 9);
    CHECK(res.estimate == snap.source());
    CHECK(res.budget_spent == 300);
    CHECK_THROWS_AS(sbq_mle_baseline(snap, model, 3, 4, 1), std::invalid_argument);
}

TEST_CASE("ID-Q stops after one unit when the center is the source") {
    // A star infected from its center: the center is the unique rumor center.
    const auto snap = testing::full_snapshot(testing::adjacency_from_edges(4, {{0, 1}, {0, 2}, {0, 3}}), 0);
    for (double q : {0.5, 0.7, 1.0}) {
        const auto res = idq(snap, TruthModel(0.7, q, 3), 50, 2u, 4);
        CHECK(res.estimate == 0);
        CHECK(res.budget_spent == 1);
    }
}

TEST_CASE("ID-Q at q = 1, r = 1 walks up true parents") {
    const TruthModel model(0.7, 1.0, 3);
    int checked = 0;
    for (std::uint64_t t = 0; t < 40; ++t) {
        const auto snap = tree_snapshot(400, 3000 + t);
        const auto center = rumor_center(rumor_centrality_all(snap), derive_seed({t, stream::tiebreak}));
        const int dist = distance(snap, snap.node(center), snap.source());
        for (std::size_t K : {std::size_t(2 * dist), std::size_t(2 * dist + 1), std::size_t(2 * dist + 7)}) {
            if (K == 0) continue;
            const auto res = idq(snap, model, K, 1u, t);
            const bool confirmed = !res.trace.empty() && res.trace.back().kind == QuestionKind::identity &&
                                   res.trace.back().kept;
            CHECK(confirmed == (K >= 2 * static_cast<std::size_t>(dist) + 1));
            CHECK((res.estimate == snap.source()) == (K >= 2 * static_cast<std::size_t>(dist)));
            ++checked;
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("ID-Q budget safety and trace consistency") {
    for (std::uint64_t t = 0; t < 40; ++t) {
        const auto snap = tree_snapshot(400, 4000 + t);
        const TruthModel model(0.7, 0.4 + 0.015 * t, 3);
        const std::size_t K = 5 + 7 * t;
        const unsigned r = 1 + t % 4;
        for (const auto& res : {idq(snap, model, K, r, t), idq_mle_baseline(snap, model, K, r, t)}) {
            CHECK(res.budget_spent <= K);
            CHECK(trace_cost(res) == res.budget_spent);
            std::size_t remaining = K;
            for (const auto& e : res.trace) {
                if (e.kind == QuestionKind::direction) {
                    CHECK(remaining >= r);
                    CHECK(e.repetitions == r);
                    CHECK(e.next.has_value());
                    CHECK(snap.is_infected(*e.next));
                } else {
                    CHECK(e.repetitions == 1);
                }
                remaining -= e.repetitions;
                CHECK(e.remaining == remaining);
            }
        }
    }
}

TEST_CASE("ID-Q on a regular tree requires q > 1/d") {
    const auto snap = tree_snapshot(50, 2);
    CHECK_THROWS(idq(snap, TruthModel(0.7, 0.3, 3), 50, 1u, 1));
    CHECK_THROWS(idq_mle_baseline(snap, TruthModel(0.7, 1.0 / 3.0, 3), 50, 1, 1));
}

TEST_CASE("ID-Q MLE at q = 1 follows the same trajectory as ID-Q") {
    const TruthModel model(0.7, 1.0, 3);
    for (std::uint64_t t = 0; t < 30; ++t) {
        const auto snap = tree_snapshot(400, 5000 + t);
        const auto a = idq(snap, model, 60, 1u, t);
        const auto b = idq_mle_baseline(snap, model, 60, 1, t);
        CHECK(a.estimate == b.estimate);
        REQUIRE(a.trace.size() == b.trace.size());
        for (std::size_t k = 0; k < a.trace.size(); ++k) {
            CHECK(a.trace[k].queriee == b.trace[k].queriee);
            CHECK(a.trace[k].next == b.trace[k].next);
        }
    }
}

TEST_CASE("ID-Q MLE step decisions match the brute-force per-step oracle on a 7-node tree") {
    const Adjacency adj = testing::binary_tree7();
    int steps = 0;
    for (NodeId source : {3u, 5u, 2u, 6u}) {
        const auto snap = testing::full_snapshot(adj, source);
        for (double q : {0.45, 0.6, 0.8}) {
            const TruthModel model(0.7, q, 3);
            for (std::uint64_t seed = 0; seed < 15; ++seed) {
                const unsigned r = 1 + seed % 3;
                const auto res = idq_mle_baseline(snap, model, 40, r, seed);
                // Same answers as the estimator saw: same seed stream, same visit order.
                QueryOracle replay(snap, model, derive_seed({seed, stream::query}));
                for (const auto& e : res.trace) {
                    if (e.kind != QuestionKind::direction) continue;
                    const auto answers = replay.ask_direction(e.queriee, r);
                    const NodeId w = e.queriee;
                    const double log_decoy = std::log((1.0 - q) / double(adj[w].size() - 1));
                    std::vector<double> weight;
                    std::vector<NodeId> options;
                    for (NodeId v : adj[w]) {
                        // Component behind v once edge (w, v) is cut.
                        std::vector<NodeId> comp{v};
                        std::vector<bool> seen(7, false);
                        seen[w] = seen[v] = true;
                        for (std::size_t h = 0; h < comp.size(); ++h)
                            for (NodeId u : adj[comp[h]])
                                if (!seen[u]) {
                                    seen[u] = true;
                                    comp.push_back(u);
                                }
                        double mass = 0.0;
                        for (NodeId u : comp) mass += double(testing::count_infection_orderings(adj, u));
                        const double y = answers.count_for(v);
                        double lw = std::log(mass) + y * std::log(q);
                        if (y < r) lw += (r - y) * log_decoy;
                        weight.push_back(lw);
                        options.push_back(v);
                    }
                    const auto at = std::find(options.begin(), options.end(), *e.next) - options.begin();
                    CHECK(near_best(weight, static_cast<std::size_t>(at)));
                    ++steps;
                }
            }
        }
    }
    CHECK(steps > 50);
}

TEST_CASE("ID-Q MLE refuses loopy snapshots") {
    const Graph g = gen_er(400, 6.0, 1);
    const auto snap = simulate_si(g, 0, 100, 1);
    REQUIRE_FALSE(snap.infected_is_tree());
    CHECK_THROWS_AS(idq_mle_baseline(snap, TruthModel(0.7, 0.7, 6), 50, 1, 1), NotATreeError);
    CHECK_NOTHROW(idq(snap, TruthModel(0.7, 0.7, 6), 50, 1u, 1));
    CHECK_NOTHROW(sbq(snap, TruthModel(0.7, 0.7, 6), 50, 1u, 1));
}

TEST_CASE("no-query baseline") {
    const auto one = testing::full_snapshot(Adjacency(1), 0);
    const auto res = no_query_baseline(one, 1);
    CHECK(res.estimate == 0);
    CHECK(res.budget_spent == 0);

    const auto two = testing::full_snapshot(testing::adjacency_from_edges(2, {{0, 1}}), 0);
    int hits = 0;
    const int runs = 4000;
    for (int s = 0; s < runs; ++s) hits += no_query_baseline(two, std::uint64_t(s)).estimate == 0 ? 1 : 0;
    CHECK(testing::within_se(hits / double(runs), 0.5, runs));
}

TEST_CASE("estimators are pure in their seed") {
    const auto snap = tree_snapshot(400, 42);
    const TruthModel model(0.7, 0.6, 3);
    CHECK(sbq(snap, model, 300, 3u, 8).estimate == sbq(snap, model, 300, 3u, 8).estimate);
    CHECK(idq(snap, model, 30, 1u, 8).trace.size() == idq(snap, model, 30, 1u, 8).trace.size());
}

TEST_CASE("detection is non-decreasing in p for SB-Q and in q for ID-Q") {
    const std::size_t trials = 200;
    const auto detection = [&](auto&& run) {
        std::size_t hits = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            const auto snap = tree_snapshot(400, derive_seed({99, t}));
            hits += run(snap, t) == snap.source() ? 1 : 0;
        }
        return hits / double(trials);
    };
    const auto se = [&](double prob) { return std::sqrt(prob * (1 - prob) / trials); };
    std::vector<double> by_p;
    for (double p : {0.55, 0.7, 0.85, 1.0})
        by_p.push_back(detection([&](const DiffusionSnapshot& s, std::uint64_t t) {
            return sbq(s, TruthModel(p, 0.6, 3), 766, std::nullopt, t).estimate;
        }));
    std::vector<double> by_q;
    for (double q : {0.4, 0.6, 0.8, 1.0})
        by_q.push_back(detection([&](const DiffusionSnapshot& s, std::uint64_t t) {
            return idq(s, TruthModel(0.7, q, 3), 20, std::nullopt, t).estimate;
        }));
    for (const auto* series : {&by_p, &by_q})
        for (std::size_t i = 0; i + 1 < series->size(); ++i) {
            const double a = (*series)[i];
            const double b = (*series)[i + 1];
            CHECK(b >= a - 2.0 * std::hypot(se(a), se(b)));
        }
    CHECK(by_p.back() > by_p.front());
    CHECK(by_q.back() > by_q.front());
}

TEST_CASE("trace serialization") {
    const auto snap = tree_snapshot(100, 6);
    const auto res = idq(snap, TruthModel(0.7, 0.6, 3), 12, 2u, 1);
    std::ostringstream out;
    write_trace(res, out);
    std::istringstream lines(out.str());
    std::string line;
    std::size_t count = 0;
    while (std::getline(lines, line)) {
        ++count;
        std::istringstream fields(line);
        std::size_t step;
        std::string kind, summary;
        NodeId queriee;
        std::size_t remaining;
        REQUIRE(static_cast<bool>(fields >> step >> kind >> queriee >> summary >> remaining));
        CHECK(step == count);
        CHECK((kind == "identity" || kind == "direction"));
    }
    CHECK(count == res.trace.size());
}

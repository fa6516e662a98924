#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <array>
#include <map>
#include <sstream>

#include "rumor/diffusion.hpp"
#include "rumor/generators.hpp"
#include "rumor/seeding.hpp"
#include "support.hpp"

using namespace rumor;

namespace {

void check_diffusion_tree(const DiffusionSnapshot& snap) {
    CHECK(snap.parent_local(0) == no_parent);
    CHECK_FALSE(snap.parent(snap.source()).has_value());
    for (LocalId i = 1; i < snap.size(); ++i) {
        const LocalId p = snap.parent_local(i);
        REQUIRE(p < i);
        const auto nb = snap.topology_neighbors(i);
        CHECK(std::find(nb.begin(), nb.end(), snap.node(p)) != nb.end());
        CHECK(snap.parent(snap.node(i)) == snap.node(p));
    }
}

}  // namespace

TEST_CASE("one infected node is just the source") {
    LazyRegularTree tree(3);
    const auto snap = simulate_si(tree, 0, 1, 5);
    CHECK(snap.size() == 1);
    CHECK(snap.source() == 0);
    CHECK(snap.infected_edge_count() == 0);
    CHECK(snap.infected_is_tree());
    CHECK_THROWS_AS(simulate_si(tree, 0, 0, 5), std::invalid_argument);
}

TEST_CASE("second infection on a 3-regular tree is uniform over the root's neighbors") {
    std::map<NodeId, int> freq;
    const int runs = 10000;
    for (int s = 0; s < runs; ++s) {
        LazyRegularTree tree(3);
        const auto snap = simulate_si(tree, 0, 2, derive_seed({77, static_cast<std::uint64_t>(s)}));
        ++freq[snap.node(1)];
    }
    CHECK(freq.size() == 3);
    for (auto [node, count] : freq) CHECK(std::abs(count / double(runs) - 1.0 / 3.0) <= 0.03);
}

TEST_CASE("snapshots satisfy the diffusion-tree invariant") {
    LazyRegularTree tree(3);
    const auto t = simulate_si(tree, 0, 400, 12);
    CHECK(t.size() == 400);
    CHECK(t.kind() == GraphKind::regular_tree);
    CHECK(t.tree_degree() == 3);
    CHECK(t.infected_is_tree());
    check_diffusion_tree(t);
    for (LocalId i = 0; i < t.size(); ++i) CHECK(t.topology_neighbors(i).size() == 3);

    const Graph er = gen_er(2000, 4.0, 3);
    const auto e = simulate_si(er, pick_random_source(er, 1), 400, 2);
    CHECK(e.size() == 400);
    CHECK(e.tree_degree() == 0);
    check_diffusion_tree(e);
    // Infected neighbors are exactly the infected graph neighbors.
    for (LocalId i = 0; i < e.size(); ++i) {
        std::size_t infected = 0;
        for (NodeId u : e.topology_neighbors(i)) infected += e.is_infected(u) ? 1 : 0;
        CHECK(e.infected_neighbors(i).size() == infected);
    }
}

TEST_CASE("simulation is deterministic in its seed") {
    const Graph g = gen_scale_free(1000, 1.5, 4);
    const auto a = simulate_si(g, 3, 200, 99);
    const auto b = simulate_si(g, 3, 200, 99);
    const auto c = simulate_si(g, 3, 200, 100);
    CHECK(std::equal(a.infected().begin(), a.infected().end(), b.infected().begin()));
    CHECK_FALSE(std::equal(a.infected().begin(), a.infected().end(), c.infected().begin()));
}

TEST_CASE("star: the step-2 choice is uniform over boundary edges") {
    // Center 0 with leaves 1, 2, 3; once the center and one leaf are infected
    // the boundary holds the two remaining leaves.
    const Graph star = Graph::from_edges(4, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}}, GraphKind::imported);
    const int runs = 10000;
    std::array<int, 4> third{};
    for (int s = 0; s < runs; ++s) {
        const auto snap = simulate_si(star, 1, 3, derive_seed({5, static_cast<std::uint64_t>(s)}));
        CHECK(snap.node(1) == 0);
        ++third[snap.node(2)];
    }
    CHECK(third[0] == 0);
    CHECK(third[1] == 0);
    CHECK(testing::within_se(third[2] / double(runs), 0.5, runs));
    CHECK(testing::within_se(third[3] / double(runs), 0.5, runs));
}

TEST_CASE("boundary edges, not boundary nodes, are uniform") {
    // Source 0 with neighbors 1, 2, 4; nodes 1 and 2 both lead to 3.
    // Exact third-node law: P(3) = P(4) = 2/9, P(1) = P(2) = 5/18.
    const Graph g = Graph::from_edges(5, std::vector<Edge>{{0, 1}, {0, 2}, {0, 4}, {1, 3}, {2, 3}},
                                      GraphKind::imported);
    const int runs = 20000;
    std::array<int, 5> third{};
    for (int s = 0; s < runs; ++s) ++third[simulate_si(g, 0, 3, derive_seed({6, std::uint64_t(s)})).node(2)];
    CHECK(testing::within_se(third[1] / double(runs), 5.0 / 18.0, runs));
    CHECK(testing::within_se(third[2] / double(runs), 5.0 / 18.0, runs));
    CHECK(testing::within_se(third[3] / double(runs), 2.0 / 9.0, runs));
    CHECK(testing::within_se(third[4] / double(runs), 2.0 / 9.0, runs));
}

TEST_CASE("exhausted component is an error naming the achieved size") {
    const Graph g = Graph::from_edges(5, std::vector<Edge>{{0, 1}, {1, 2}, {3, 4}}, GraphKind::imported);
    try {
        simulate_si(g, 0, 4, 1);
        FAIL("expected an error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("after infecting 3") != std::string::npos);
    }
    CHECK_THROWS_AS(simulate_si(g, 9, 2, 1), std::invalid_argument);
}

TEST_CASE("random source: single node, lazy tree root, and chi-square uniformity") {
    const Graph one = Graph::from_edges(1, std::vector<Edge>{}, GraphKind::imported);
    CHECK(pick_random_source(one, 123) == 0);
    LazyRegularTree tree(3);
    CHECK(pick_random_source(tree, 123) == 0);

    const Graph g = gen_er_raw(2000, 4.0, 8);
    const int draws = 10000;
    std::vector<int> count(g.node_count(), 0);
    for (int s = 0; s < draws; ++s) ++count[pick_random_source(g, derive_seed({9, std::uint64_t(s)}))];
    const double expected = draws / double(g.node_count());
    double chi2 = 0.0;
    for (int c : count) chi2 += (c - expected) * (c - expected) / expected;
    boost::math::chi_squared dist(static_cast<double>(g.node_count() - 1));
    const double p_value = boost::math::cdf(boost::math::complement(dist, chi2));
    CHECK(p_value > 0.001);
}

TEST_CASE("snapshot dump and restore round-trip") {
    LazyRegularTree tree(3);
    const auto snap = simulate_si(tree, 0, 60, 31);
    std::stringstream buf;
    dump_snapshot(snap, buf);
    CHECK(buf.str().rfind("source 0\nn 60\n", 0) == 0);

    const auto back = restore_snapshot(buf);
    CHECK(back.size() == snap.size());
    CHECK(back.source() == snap.source());
    for (LocalId i = 0; i < snap.size(); ++i) {
        CHECK(back.node(i) == snap.node(i));
        CHECK(back.parent_local(i) == snap.parent_local(i));
    }
    CHECK(back.infected_is_tree());

    const Graph er = gen_er(500, 4.0, 2);
    const auto e = simulate_si(er, 0, 80, 4);
    std::stringstream buf2;
    dump_snapshot(e, buf2);
    const auto e2 = restore_snapshot(buf2, er);
    CHECK(e2.infected_edge_count() == e.infected_edge_count());
    for (LocalId i = 0; i < e.size(); ++i) CHECK(e2.topology_neighbors(i).size() == e.topology_neighbors(i).size());

    std::istringstream bad("source 0\nn 2\n0 - 0\n");
    CHECK_THROWS_AS(restore_snapshot(bad), std::runtime_error);
}

TEST_CASE("snapshot construction validates its parts") {
    using Topo = std::vector<std::vector<NodeId>>;
    CHECK_THROWS_AS(DiffusionSnapshot(GraphKind::imported, 0, {0, 1}, {no_parent, 1}, Topo{{1}, {0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(DiffusionSnapshot(GraphKind::imported, 0, {0, 1}, {no_parent, 0}, Topo{{}, {}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(DiffusionSnapshot(GraphKind::imported, 0, {0, 0}, {no_parent, 0}, Topo{{0}, {0}}),
                    std::invalid_argument);
    CHECK_NOTHROW(DiffusionSnapshot(GraphKind::imported, 0, {0, 1}, {no_parent, 0}, Topo{{1}, {0}}));
}

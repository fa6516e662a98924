#include "rumor/generators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "rumor/seeding.hpp"

namespace rumor {

Graph gen_er_raw(std::size_t n, double avg_degree, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_er: n must be >= 2");
    const double max_degree = static_cast<double>(n - 1);
    if (!(avg_degree > 0.0) || avg_degree > max_degree)
        throw std::invalid_argument("gen_er: avg_degree must lie in (0, n-1]");

    const double p = avg_degree / max_degree;
    std::vector<Edge> edges;
    if (p >= 1.0) {
        for (NodeId a = 0; a < n; ++a)
            for (NodeId b = a + 1; b < n; ++b) edges.emplace_back(a, b);
        return Graph::from_edges(n, edges, GraphKind::er);
    }

    // Geometric skipping over the lower-triangular pair sequence.
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double log_q = std::log1p(-p);
    std::int64_t v = 1;
    std::int64_t w = -1;
    const auto nn = static_cast<std::int64_t>(n);
    while (v < nn) {
        const double u = unit(rng);
        w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-u) / log_q));
        while (w >= v && v < nn) {
            w -= v;
            ++v;
        }
        if (v < nn) edges.emplace_back(static_cast<NodeId>(w), static_cast<NodeId>(v));
    }
    return Graph::from_edges(n, edges, GraphKind::er);
}

Graph gen_er(std::size_t n, double avg_degree, std::uint64_t seed) {
    return gen_er_raw(n, avg_degree, seed).largest_component();
}

Graph gen_scale_free(std::size_t n, double edge_node_ratio, std::uint64_t seed) {
    if (n < 3) throw std::invalid_argument("gen_scale_free: n must be >= 3");
    if (!(edge_node_ratio >= 1.0)) throw std::invalid_argument("gen_scale_free: ratio must be >= 1");

    auto rng = make_rng(seed);
    std::vector<Edge> edges{{0, 1}};
    // Each node appears once per incident edge: sampling uniformly from this
    // list is sampling proportional to degree.
    std::vector<NodeId> endpoints{0, 1};
    std::vector<NodeId> chosen;

    for (NodeId i = 2; i < n; ++i) {
        const auto quota = static_cast<std::size_t>(std::floor(edge_node_ratio * i) -
                                                    std::floor(edge_node_ratio * (i - 1)));
        const std::size_t m = std::min<std::size_t>(std::max<std::size_t>(quota, 1), i);
        chosen.clear();
        std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
        while (chosen.size() < m) {
            NodeId t = endpoints[pick(rng)];
            if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
        }
        for (NodeId t : chosen) {
            edges.emplace_back(t, i);
            endpoints.push_back(t);
            endpoints.push_back(i);
        }
    }
    return Graph::from_edges(n, edges, GraphKind::scale_free);
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

bool next_uint(std::string_view& s, std::uint64_t& out) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{}) return false;
    s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
    return s.empty() || s.front() == ' ' || s.front() == '\t';
}

}  // namespace

Graph load_edge_list(std::istream& in, LoadSummary* summary) {
    LoadSummary local;
    std::unordered_map<std::uint64_t, NodeId> ids;
    std::vector<Edge> edges;
    std::unordered_set<std::uint64_t> seen;

    const auto intern = [&](std::uint64_t raw) {
        auto [it, inserted] = ids.try_emplace(raw, static_cast<NodeId>(ids.size()));
        return it->second;
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        std::uint64_t a = 0;
        std::uint64_t b = 0;
        if (!next_uint(body, a) || !next_uint(body, b) || !trim(body).empty())
            throw ParseError(lineno, "expected two non-negative integer node ids, got \"" +
                                         std::string(trim(line)) + "\"");
        NodeId ia = intern(a);
        NodeId ib = intern(b);
        if (ia == ib) {
            ++local.self_loops_dropped;
            continue;
        }
        const auto key = (static_cast<std::uint64_t>(std::min(ia, ib)) << 32) | std::max(ia, ib);
        if (!seen.insert(key).second) {
            ++local.duplicates_dropped;
            continue;
        }
        edges.emplace_back(ia, ib);
    }
    local.lines = lineno;
    if (ids.empty()) throw ParseError(lineno, "edge list contains no edges");
    if (summary) *summary = local;
    return Graph::from_edges(ids.size(), edges, GraphKind::imported);
}

Graph load_edge_list_file(const std::string& path, LoadSummary* summary) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list: " + path);
    return load_edge_list(in, summary);
}

void write_edge_list(const Graph& g, std::ostream& out) {
    out << "# nodes " << g.node_count() << " edges " << g.edge_count() << '\n';
    for (auto [a, b] : g.edges()) out << a << ' ' << b << '\n';
}

}  // namespace rumor

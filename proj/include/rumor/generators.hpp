#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "rumor/graph.hpp"

namespace rumor {

/// G(n, p) with p = avg_degree / (n - 1), before any component filtering.
Graph gen_er_raw(std::size_t n, double avg_degree, std::uint64_t seed);

/// Erdos-Renyi graph restricted to its largest connected component.
Graph gen_er(std::size_t n, double avg_degree, std::uint64_t seed);

/// Preferential-attachment growth from a single edge. Node i attaches
/// floor(ratio*i) - floor(ratio*(i-1)) distinct edges (1,2,1,2,... for 1.5),
/// chosen with probability proportional to current degree, so the edge/node
/// ratio tracks `edge_node_ratio` for any real value >= 1.
Graph gen_scale_free(std::size_t n, double edge_node_ratio, std::uint64_t seed);

struct LoadSummary {
    std::size_t lines = 0;
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_dropped = 0;
};

/// Thrown for malformed edge-list input; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Reads a SNAP-style edge list ("u v" per line, '#' comments, LF or CRLF).
/// Ids are compacted in first-seen order.
Graph load_edge_list(std::istream& in, LoadSummary* summary = nullptr);
Graph load_edge_list_file(const std::string& path, LoadSummary* summary = nullptr);

void write_edge_list(const Graph& g, std::ostream& out);

}  // namespace rumor

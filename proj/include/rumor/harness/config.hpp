#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rumor::harness {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class TopologyKind { regular_tree, er, scale_free, edge_list };

struct TopologySpec {
    TopologyKind kind = TopologyKind::regular_tree;
    unsigned degree = 3;        // regular-tree
    std::size_t n = 2000;       // er, scale-free
    double avg_degree = 4.0;    // er
    double ratio = 1.5;         // scale-free edge/node ratio
    std::uint64_t seed = 1;     // graph generator seed
    std::string path;           // edge-list

    std::string label() const;
};

enum class EstimatorKind { no_query, sbq, sbq_mle, idq, idq_mle };

struct EstimatorSpec {
    EstimatorKind kind = EstimatorKind::sbq;
    std::optional<unsigned> fixed_r;  // empty: use the closed-form r*

    /// "sbq:r-star", "sbq-mle:1", "no-query", ...
    std::string label() const;
    /// Inverse of label(); "name" alone means r-star.
    static EstimatorSpec parse(const std::string& text);
};

enum class SweepAxis { p, q, K };

std::string to_string(SweepAxis axis);

struct ExperimentConfig {
    std::string name = "experiment";
    TopologySpec topology;
    std::size_t n_infected = 400;
    std::size_t trials = 200;
    std::vector<EstimatorSpec> estimators{EstimatorSpec{EstimatorKind::sbq, std::nullopt}};
    SweepAxis axis = SweepAxis::p;
    std::vector<double> grid{0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0};
    std::size_t K = 766;
    double p = 0.7;
    double q = 0.6;
    std::uint64_t master_seed = 1;
    unsigned workers = 0;   // 0: one per hardware thread
    bool timing = false;    // wall_ms stays 0 unless set, keeping output reproducible

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// INI-style text: "[section]" headers, "key = value" lines, '#' or ';'
/// comments. Sections: experiment, topology, query, sweep, estimators.
/// Unknown sections or keys are errors.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

}  // namespace rumor::harness

#pragma once

#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "rumor/estimators.hpp"
#include "rumor/harness/config.hpp"

namespace rumor::harness {

/// One CSV record: detection probability of one estimator at one grid point.
struct ResultRow {
    std::string estimator;
    std::string topology;
    std::size_t N = 0;
    std::size_t K = 0;
    double p = 0.0;
    double q = 0.0;
    unsigned r = 0;
    std::size_t trials = 0;
    std::size_t hits = 0;
    double detection_prob = 0.0;
    double stderr_ = 0.0;
    double mean_budget = 0.0;
    double wall_ms = 0.0;

    bool operator==(const ResultRow&) const = default;
};

/// A grid point that could not be evaluated; the rest of the run continues.
struct RowError {
    std::string estimator;
    double grid_value = 0.0;
    std::string message;
};

struct ExperimentReport {
    std::vector<ResultRow> rows;
    std::vector<RowError> errors;
};

inline constexpr const char* csv_header =
    "estimator,topology,N,K,p,q,r,trials,hits,detection_prob,stderr,mean_budget,wall_ms";

/// Binomial standard error sqrt(prob (1 - prob) / trials).
double binomial_stderr(std::size_t hits, std::size_t trials);

/// Runs every (grid point, trial) pair across worker threads. Each trial's
/// seed is derived from (master_seed, grid index, trial index), and all
/// estimators of a trial see the same snapshot and the same answers, so the
/// output does not depend on the worker count. Rows are sorted by
/// (estimator label, grid value).
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Value of the sweep axis carried by a row.
double axis_value(const ResultRow& row, SweepAxis axis);

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out);
/// Throws std::invalid_argument on zero rows (nothing is created) and
/// std::runtime_error if the path cannot be written.
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);
/// Parses what write_csv produced. Throws std::runtime_error on mismatch.
std::vector<ResultRow> parse_csv(std::istream& in);

/// Self-contained SVG line chart of detection_prob against the sweep axis,
/// one series per estimator, with +-2 stderr whiskers.
void write_svg_plot(const std::vector<ResultRow>& rows, SweepAxis axis, std::ostream& out);
void emit_svg_plot(const std::vector<ResultRow>& rows, SweepAxis axis, const std::string& path);

}  // namespace rumor::harness

#include "rumor/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "rumor/diffusion.hpp"
#include "rumor/generators.hpp"
#include "rumor/seeding.hpp"

namespace rumor::harness {

namespace {

struct Topology {
    std::optional<Graph> graph;  // empty for the lazy regular tree
    unsigned tree_degree = 0;
    unsigned model_degree = 3;
};

Topology prepare(const TopologySpec& spec) {
    Topology t;
    switch (spec.kind) {
        case TopologyKind::regular_tree:
            t.tree_degree = spec.degree;
            t.model_degree = spec.degree;
            return t;
        case TopologyKind::er: t.graph = gen_er(spec.n, spec.avg_degree, spec.seed); break;
        case TopologyKind::scale_free: t.graph = gen_scale_free(spec.n, spec.ratio, spec.seed); break;
        case TopologyKind::edge_list: t.graph = load_edge_list_file(spec.path).largest_component(); break;
    }
    // Loopy graphs have no single degree; the closed forms take the mean.
    t.model_degree = std::max(3u, static_cast<unsigned>(std::lround(t.graph->mean_degree())));
    return t;
}

struct GridPoint {
    double value;
    std::size_t K;
    double p;
    double q;
};

GridPoint grid_point(const ExperimentConfig& cfg, double value) {
    GridPoint g{value, cfg.K, cfg.p, cfg.q};
    switch (cfg.axis) {
        case SweepAxis::p: g.p = value; break;
        case SweepAxis::q: g.q = value; break;
        case SweepAxis::K: g.K = static_cast<std::size_t>(value); break;
    }
    return g;
}

unsigned resolve_r(const EstimatorSpec& spec, const GridPoint& g, unsigned d) {
    if (spec.kind == EstimatorKind::no_query) return 0;
    if (spec.fixed_r) return *spec.fixed_r;
    const bool batch = spec.kind == EstimatorKind::sbq || spec.kind == EstimatorKind::sbq_mle;
    const unsigned r = batch ? r_star_batch(g.K, g.p, d) : r_star_interactive(g.K, g.q, d);
    return static_cast<unsigned>(std::clamp<std::size_t>(r, 1, std::max<std::size_t>(g.K, 1)));
}

EstimationResult run_estimator(const EstimatorSpec& spec, unsigned r, const DiffusionSnapshot& snap,
                               const TruthModel& model, std::size_t K, std::uint64_t seed) {
    switch (spec.kind) {
        case EstimatorKind::no_query: return no_query_baseline(snap, seed);
        case EstimatorKind::sbq: return sbq(snap, model, K, r, seed);
        case EstimatorKind::sbq_mle: return sbq_mle_baseline(snap, model, K, r, seed);
        case EstimatorKind::idq: return idq(snap, model, K, r, seed);
        case EstimatorKind::idq_mle: return idq_mle_baseline(snap, model, K, r, seed);
    }
    throw std::logic_error("unhandled estimator kind");
}

struct TrialOutcome {
    std::vector<char> hit;
    std::vector<std::size_t> budget;
    std::vector<double> ms;
    std::vector<std::string> error;
};

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

double binomial_stderr(std::size_t hits, std::size_t trials) {
    if (trials == 0) return 0.0;
    const double prob = static_cast<double>(hits) / static_cast<double>(trials);
    return std::sqrt(prob * (1.0 - prob) / static_cast<double>(trials));
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    ExperimentReport report;
    const std::size_t n_est = config.estimators.size();
    const std::size_t n_grid = config.grid.size();

    Topology topo;
    try {
        topo = prepare(config.topology);
        if (topo.graph && topo.graph->node_count() < config.n_infected)
            throw std::runtime_error("largest component has " + std::to_string(topo.graph->node_count()) +
                                     " nodes, fewer than N = " + std::to_string(config.n_infected));
    } catch (const std::exception& e) {
        for (const auto& est : config.estimators)
            for (double v : config.grid) report.errors.push_back({est.label(), v, e.what()});
        return report;
    }

    std::vector<GridPoint> points;
    std::vector<std::vector<unsigned>> rs(n_grid, std::vector<unsigned>(n_est, 0));
    for (std::size_t g = 0; g < n_grid; ++g) {
        points.push_back(grid_point(config, config.grid[g]));
        for (std::size_t e = 0; e < n_est; ++e) rs[g][e] = resolve_r(config.estimators[e], points[g], topo.model_degree);
    }

    const std::size_t n_tasks = n_grid * config.trials;
    std::vector<TrialOutcome> outcomes(n_tasks);
    std::atomic<std::size_t> next{0};

    const auto work = [&] {
        for (std::size_t task = next++; task < n_tasks; task = next++) {
            const std::size_t g = task / config.trials;
            const std::size_t t = task % config.trials;
            const GridPoint& pt = points[g];
            const std::uint64_t trial_seed = derive_seed({config.master_seed, g, t});
            TrialOutcome& out = outcomes[task];
            out.hit.assign(n_est, 0);
            out.budget.assign(n_est, 0);
            out.ms.assign(n_est, 0.0);
            out.error.assign(n_est, {});

            std::optional<DiffusionSnapshot> snap;
            try {
                const auto source_seed = derive_seed({trial_seed, stream::source});
                const auto spread_seed = derive_seed({trial_seed, stream::diffusion});
                if (topo.graph) {
                    NodeId source = pick_random_source(*topo.graph, source_seed);
                    snap.emplace(simulate_si(*topo.graph, source, config.n_infected, spread_seed));
                } else {
                    LazyRegularTree tree(topo.tree_degree);
                    NodeId source = pick_random_source(tree, source_seed);
                    snap.emplace(simulate_si(tree, source, config.n_infected, spread_seed));
                }
            } catch (const std::exception& ex) {
                std::fill(out.error.begin(), out.error.end(), std::string("diffusion: ") + ex.what());
                continue;
            }

            for (std::size_t e = 0; e < n_est; ++e) {
                try {
                    const TruthModel model(pt.p, pt.q, topo.model_degree);
                    const auto start = std::chrono::steady_clock::now();
                    auto result = run_estimator(config.estimators[e], rs[g][e], *snap, model, pt.K, trial_seed);
                    const auto stop = std::chrono::steady_clock::now();
                    out.hit[e] = result.estimate == snap->source() ? 1 : 0;
                    out.budget[e] = result.budget_spent;
                    out.ms[e] = std::chrono::duration<double, std::milli>(stop - start).count();
                } catch (const std::exception& ex) {
                    out.error[e] = ex.what();
                }
            }
        }
    };

    unsigned workers = config.workers ? config.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n_tasks, 1)));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
    }

    const std::string topology_label = config.topology.label();
    for (std::size_t e = 0; e < n_est; ++e) {
        for (std::size_t g = 0; g < n_grid; ++g) {
            std::size_t hits = 0;
            std::size_t budget = 0;
            double ms = 0.0;
            std::string error;
            for (std::size_t t = 0; t < config.trials; ++t) {
                const auto& out = outcomes[g * config.trials + t];
                if (!out.error[e].empty() && error.empty()) error = out.error[e];
                hits += static_cast<std::size_t>(out.hit[e]);
                budget += out.budget[e];
                ms += out.ms[e];
            }
            const std::string label = config.estimators[e].label();
            if (!error.empty()) {
                report.errors.push_back({label, config.grid[g], error});
                continue;
            }
            ResultRow row;
            row.estimator = label;
            row.topology = topology_label;
            row.N = config.n_infected;
            row.K = points[g].K;
            row.p = points[g].p;
            row.q = points[g].q;
            row.r = rs[g][e];
            row.trials = config.trials;
            row.hits = hits;
            row.detection_prob = static_cast<double>(hits) / static_cast<double>(config.trials);
            row.stderr_ = binomial_stderr(hits, config.trials);
            row.mean_budget = static_cast<double>(budget) / static_cast<double>(config.trials);
            row.wall_ms = config.timing ? std::round(ms * 1000.0) / 1000.0 : 0.0;
            report.rows.push_back(std::move(row));
        }
    }
    std::stable_sort(report.rows.begin(), report.rows.end(), [&](const ResultRow& a, const ResultRow& b) {
        if (a.estimator != b.estimator) return a.estimator < b.estimator;
        return axis_value(a, config.axis) < axis_value(b, config.axis);
    });
    return report;
}

double axis_value(const ResultRow& row, SweepAxis axis) {
    switch (axis) {
        case SweepAxis::p: return row.p;
        case SweepAxis::q: return row.q;
        case SweepAxis::K: return static_cast<double>(row.K);
    }
    return 0.0;
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
    out << csv_header << '\n';
    for (const auto& r : rows) {
        out << r.estimator << ',' << r.topology << ',' << r.N << ',' << r.K << ',' << format_double(r.p) << ','
            << format_double(r.q) << ',' << r.r << ',' << r.trials << ',' << r.hits << ','
            << format_double(r.detection_prob) << ',' << format_double(r.stderr_) << ','
            << format_double(r.mean_budget) << ',' << format_double(r.wall_ms) << '\n';
    }
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    if (rows.empty()) throw std::invalid_argument("no result rows to write");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_csv(rows, out);
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

// Splits on commas outside parentheses; topology labels contain commas.
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields(1);
    int depth = 0;
    for (char c : line) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0)
            fields.emplace_back();
        else
            fields.back().push_back(c);
    }
    return fields;
}

template <class T>
T field(const std::string& s, std::size_t lineno) {
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::runtime_error("csv line " + std::to_string(lineno) + ": bad number '" + s + "'");
    return v;
}

}  // namespace

std::vector<ResultRow> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != csv_header) throw std::runtime_error("csv: unexpected header");
    std::vector<ResultRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 13) throw std::runtime_error("csv line " + std::to_string(lineno) + ": expected 13 fields");
        ResultRow r;
        r.estimator = f[0];
        r.topology = f[1];
        r.N = field<std::size_t>(f[2], lineno);
        r.K = field<std::size_t>(f[3], lineno);
        r.p = field<double>(f[4], lineno);
        r.q = field<double>(f[5], lineno);
        r.r = field<unsigned>(f[6], lineno);
        r.trials = field<std::size_t>(f[7], lineno);
        r.hits = field<std::size_t>(f[8], lineno);
        r.detection_prob = field<double>(f[9], lineno);
        r.stderr_ = field<double>(f[10], lineno);
        r.mean_budget = field<double>(f[11], lineno);
        r.wall_ms = field<double>(f[12], lineno);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_svg_plot(const std::vector<ResultRow>& rows, SweepAxis axis, std::ostream& out) {
    if (rows.empty()) throw std::invalid_argument("no result rows to plot");
    constexpr double width = 720, height = 440;
    constexpr double left = 60, right = 190, top = 30, bottom = 50;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double xmin = axis_value(rows.front(), axis);
    double xmax = xmin;
    for (const auto& r : rows) {
        xmin = std::min(xmin, axis_value(r, axis));
        xmax = std::max(xmax, axis_value(r, axis));
    }
    if (xmax == xmin) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    const auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
    const auto sy = [&](double y) { return top + (1.0 - std::clamp(y, 0.0, 1.0)) * plot_h; };

    std::vector<std::string> series;
    for (const auto& r : rows)
        if (std::find(series.begin(), series.end(), r.estimator) == series.end()) series.push_back(r.estimator);
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 5; ++k) {
        const double y = k / 5.0;
        out << "<line x1=\"" << left << "\" x2=\"" << left + plot_w << "\" y1=\"" << sy(y) << "\" y2=\"" << sy(y)
            << "\" stroke=\"#ddd\"/>\n";
        out << "<text x=\"" << left - 8 << "\" y=\"" << sy(y) + 4 << "\" text-anchor=\"end\">" << format_double(y)
            << "</text>\n";
    }
    for (int k = 0; k <= 4; ++k) {
        const double x = xmin + (xmax - xmin) * k / 4.0;
        const double rounded = std::round(x * 1000.0) / 1000.0;
        out << "<text x=\"" << sx(x) << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">"
            << format_double(rounded) << "</text>\n";
    }
    out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">"
        << to_string(axis) << "</text>\n";
    out << "<text transform=\"translate(16," << top + plot_h / 2
        << ") rotate(-90)\" text-anchor=\"middle\">detection probability</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = palette[s % std::size(palette)];
        std::vector<const ResultRow*> pts;
        for (const auto& r : rows)
            if (r.estimator == series[s]) pts.push_back(&r);
        std::sort(pts.begin(), pts.end(),
                  [&](const ResultRow* a, const ResultRow* b) { return axis_value(*a, axis) < axis_value(*b, axis); });
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto* r : pts) out << sx(axis_value(*r, axis)) << ',' << sy(r->detection_prob) << ' ';
        out << "\"/>\n";
        for (const auto* r : pts) {
            const double x = sx(axis_value(*r, axis));
            out << "<line x1=\"" << x << "\" x2=\"" << x << "\" y1=\"" << sy(r->detection_prob - 2 * r->stderr_)
                << "\" y2=\"" << sy(r->detection_prob + 2 * r->stderr_) << "\" stroke=\"" << color << "\"/>\n";
            out << "<circle cx=\"" << x << "\" cy=\"" << sy(r->detection_prob) << "\" r=\"3\" fill=\"" << color
                << "\"/>\n";
        }
        const double ly = top + 14 + 18.0 * static_cast<double>(s);
        out << "<line x1=\"" << left + plot_w + 12 << "\" x2=\"" << left + plot_w + 32 << "\" y1=\"" << ly
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << left + plot_w + 38 << "\" y=\"" << ly + 4 << "\">" << series[s] << "</text>\n";
    }
    out << "</svg>\n";
}

void emit_svg_plot(const std::vector<ResultRow>& rows, SweepAxis axis, const std::string& path) {
    if (rows.empty()) throw std::invalid_argument("no result rows to plot");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_svg_plot(rows, axis, out);
}

}  // namespace rumor::harness

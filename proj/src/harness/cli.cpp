#include "rumor/harness/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "rumor/bounds.hpp"
#include "rumor/centrality.hpp"
#include "rumor/diffusion.hpp"
#include "rumor/estimators.hpp"
#include "rumor/generators.hpp"
#include "rumor/harness/config.hpp"
#include "rumor/harness/experiment.hpp"

namespace rumor::harness {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

struct Formula {
    std::vector<std::string> params;
    std::function<double(const std::map<std::string, double>&)> eval;
    const char* help;
};

unsigned as_uint(const std::map<std::string, double>& in, const std::string& key) {
    const double v = in.at(key);
    if (!(v >= 0.0) || v != std::floor(v) || v > 4e9) throw UsageError(key + " must be a non-negative integer");
    return static_cast<unsigned>(v);
}

const std::map<std::string, Formula>& formulas() {
    using In = std::map<std::string, double>;
    static const std::map<std::string, Formula> table{
        {"budget-batch",
         {{"p", "d", "delta"},
          [](const In& in) { return bounds::budget_bound_batch(in.at("delta"), in.at("p"), as_uint(in, "d")); },
          "budget K needed by batch querying for accuracy 1 - delta"}},
        {"budget-interactive",
         {{"q", "d", "delta"},
          [](const In& in) { return bounds::budget_bound_interactive(in.at("delta"), in.at("q"), as_uint(in, "d")); },
          "budget K needed by interactive querying for accuracy 1 - delta"}},
        {"majority",
         {{"p", "r"},
          [](const In& in) { return bounds::majority_success_prob(in.at("p"), as_uint(in, "r")); },
          "P(source survives the majority filter)"}},
        {"lemma1",
         {{"p", "r"}, [](const In& in) { return bounds::lemma1_lower(in.at("p"), as_uint(in, "r")); },
          "closed-form survival estimate; exceeds majority for small odd r"}},
        {"lemma2",
         {{"p", "r"}, [](const In& in) { return bounds::lemma2_lower(in.at("p"), as_uint(in, "r")); },
          "lower bound on the source being the local center"}},
        {"lhop-escape",
         {{"L", "d"}, [](const In& in) { return bounds::lhop_escape_upper(as_uint(in, "L"), as_uint(in, "d")); },
          "upper bound on the source lying beyond L hops of the center"}},
        {"h-d",
         {{"K", "r", "d"}, [](const In& in) { return bounds::h_d(in.at("K"), in.at("r"), as_uint(in, "d")); },
          "depth term of the batch detection bound"}},
        {"prop1",
         {{"K", "r", "p", "d"},
          [](const In& in) { return bounds::prop1_lower(in.at("K"), in.at("r"), in.at("p"), as_uint(in, "d")); },
          "batch detection lower bound"}},
        {"g-d",
         {{"r", "q", "d"}, [](const In& in) { return bounds::g_d(in.at("r"), in.at("q"), as_uint(in, "d")); },
          "P(true parent wins the designation vote) lower bound"}},
        {"prop2",
         {{"K", "r", "q", "d"},
          [](const In& in) { return bounds::prop2_lower(in.at("K"), in.at("r"), in.at("q"), as_uint(in, "d")); },
          "interactive detection lower bound"}},
        {"phi",
         {{"k", "d"}, [](const In& in) { return bounds::phi_suspect_lower(as_uint(in, "k"), as_uint(in, "d")); },
          "MAP detection lower bound with k connected suspects"}},
        {"reg-inc-beta",
         {{"x", "a", "b"}, [](const In& in) { return bounds::reg_inc_beta(in.at("x"), in.at("a"), in.at("b")); },
          "regularized incomplete beta I_x(a, b)"}},
        {"r-star-batch",
         {{"K", "p", "d"},
          [](const In& in) {
              return static_cast<double>(r_star_batch(as_uint(in, "K"), in.at("p"), as_uint(in, "d")));
          },
          "repetition count used by batch querying"}},
        {"r-star-interactive",
         {{"K", "q", "d"},
          [](const In& in) {
              return static_cast<double>(r_star_interactive(as_uint(in, "K"), in.at("q"), as_uint(in, "d")));
          },
          "repetition count used by interactive querying"}},
    };
    return table;
}

std::string canonical_key(std::string key) {
    if (key == "δ" || key == "Δ") return "delta";
    return key;
}

double parse_value(const std::string& key, const std::string& text) {
    double v{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw UsageError("invalid value for " + key + ": '" + text + "'");
    return v;
}

// Accepts "--key value", "--key=value" and "key=value".
std::map<std::string, double> parse_params(const std::vector<std::string>& tokens) {
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::string tok = tokens[i];
        std::string key;
        std::string value;
        const bool dashed = tok.rfind("--", 0) == 0;
        if (dashed) tok = tok.substr(2);
        const auto eq = tok.find('=');
        if (eq != std::string::npos) {
            key = tok.substr(0, eq);
            value = tok.substr(eq + 1);
        } else if (dashed && i + 1 < tokens.size()) {
            key = tok;
            value = tokens[++i];
        } else {
            throw UsageError("expected key=value or --key value, got '" + tokens[i] + "'");
        }
        key = canonical_key(key);
        out[key] = parse_value(key, value);
    }
    return out;
}

int cmd_bounds(const std::vector<std::string>& args, std::ostream& out) {
    if (args.empty()) throw UsageError("bounds: missing formula name");
    const auto& table = formulas();
    if (args.front() == "list") {
        for (const auto& [name, f] : table) {
            out << name;
            for (const auto& p : f.params) out << ' ' << p << "=";
            out << '\t' << f.help << '\n';
        }
        return 0;
    }
    const auto it = table.find(args.front());
    if (it == table.end()) throw UsageError("bounds: unknown formula '" + args.front() + "' (try 'bounds list')");
    const auto params = parse_params({args.begin() + 1, args.end()});
    std::string inputs;
    for (const auto& name : it->second.params) {
        const auto p = params.find(name);
        if (p == params.end()) throw UsageError("bounds " + it->first + ": missing parameter " + name);
        if (!inputs.empty()) inputs += ',';
        inputs += name + "=" + format_double(p->second);
    }
    for (const auto& [name, v] : params)
        if (std::find(it->second.params.begin(), it->second.params.end(), name) == it->second.params.end())
            throw UsageError("bounds " + it->first + ": unknown parameter " + name);
    const double value = it->second.eval(params);
    out << "formula\tinputs\tvalue\n" << it->first << '\t' << inputs << '\t' << format_double(value) << '\n';
    return 0;
}

struct RunOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<unsigned> workers;
    std::string out;
    std::string svg;
    bool timing = false;
};

int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
    ExperimentConfig cfg = parse_config_file(opt.config);
    if (opt.seed) cfg.master_seed = *opt.seed;
    if (opt.trials) cfg.trials = *opt.trials;
    if (opt.workers) cfg.workers = *opt.workers;
    if (opt.timing) cfg.timing = true;
    cfg.validate();

    const auto report = run_experiment(cfg);
    for (const auto& e : report.errors)
        err << "error: " << e.estimator << " at " << to_string(cfg.axis) << "=" << format_double(e.grid_value) << ": "
            << e.message << '\n';
    if (report.rows.empty()) {
        err << "error: no grid point could be evaluated\n";
        return 1;
    }
    if (opt.out.empty() || opt.out == "-")
        write_csv(report.rows, out);
    else
        emit_csv(report.rows, opt.out);
    if (!opt.svg.empty()) emit_svg_plot(report.rows, cfg.axis, opt.svg);
    return report.errors.empty() ? 0 : 1;
}

int cmd_centrality(const std::string& snapshot, const std::string& graph_path, std::size_t top, std::ostream& out) {
    std::ifstream in(snapshot);
    if (!in) throw std::runtime_error("cannot open snapshot: " + snapshot);
    std::optional<DiffusionSnapshot> snap;
    if (graph_path.empty()) {
        snap.emplace(restore_snapshot(in));
    } else {
        const Graph g = load_edge_list_file(graph_path);
        snap.emplace(restore_snapshot(in, g));
    }
    const auto scores = source_scores(*snap);
    const LocalId estimate = snap->infected_is_tree() ? rumor_center(rumor_centrality_all(*snap), 0)
                                                      : bfs_heuristic_estimate(*snap, 0);
    std::vector<LocalId> order(scores.size());
    for (LocalId i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](LocalId a, LocalId b) { return scores[a] > scores[b]; });
    if (top > 0 && top < order.size()) order.resize(top);

    out << "# infected " << snap->size() << ", " << (snap->infected_is_tree() ? "tree" : "loopy")
        << ", score " << (snap->infected_is_tree() ? "log rumor centrality" : "bfs heuristic") << '\n';
    out << "# estimate " << snap->node(estimate) << ", true source " << snap->source() << '\n';
    out << "node\tscore\n";
    for (LocalId i : order) out << snap->node(i) << '\t' << format_double(scores[i]) << '\n';
    return 0;
}

struct GenOptions {
    std::string topology;
    std::string out_path;
    unsigned d = 3;
    unsigned hops = 8;
    std::size_t n = 2000;
    double avg_degree = 4.0;
    double ratio = 1.5;
    std::uint64_t seed = 1;
    bool lcc = false;
};

Graph generate(const GenOptions& opt) {
    if (opt.topology == "regular-tree") {
        LazyRegularTree tree(opt.d);
        tree.materialize_ball(opt.hops);
        return tree.to_graph();
    }
    if (opt.topology == "er") return opt.lcc ? gen_er(opt.n, opt.avg_degree, opt.seed)
                                             : gen_er_raw(opt.n, opt.avg_degree, opt.seed);
    if (opt.topology == "scale-free") return gen_scale_free(opt.n, opt.ratio, opt.seed);
    throw UsageError("gen: unknown topology '" + opt.topology + "' (regular-tree, er, scale-free)");
}

int cmd_gen(const GenOptions& opt, std::ostream& out) {
    const Graph g = generate(opt);
    std::ofstream file(opt.out_path);
    if (!file) throw std::runtime_error("cannot write " + opt.out_path);
    write_edge_list(g, file);
    out << "wrote " << opt.out_path << ": " << g.node_count() << " nodes, " << g.edge_count() << " edges\n";
    return 0;
}

struct SimulateOptions {
    std::string out_path;
    std::string graph;
    unsigned d = 3;
    std::size_t infected = 400;
    std::uint64_t seed = 1;
};

int cmd_simulate(const SimulateOptions& opt, std::ostream& out) {
    const auto source_seed = derive_seed({opt.seed, stream::source});
    const auto spread_seed = derive_seed({opt.seed, stream::diffusion});
    std::optional<DiffusionSnapshot> snap;
    if (opt.graph.empty()) {
        LazyRegularTree tree(opt.d);
        snap.emplace(simulate_si(tree, pick_random_source(tree, source_seed), opt.infected, spread_seed));
    } else {
        const Graph g = load_edge_list_file(opt.graph);
        snap.emplace(simulate_si(g, pick_random_source(g, source_seed), opt.infected, spread_seed));
    }
    std::ofstream file(opt.out_path);
    if (!file) throw std::runtime_error("cannot write " + opt.out_path);
    dump_snapshot(*snap, file);
    out << "wrote " << opt.out_path << ": " << snap->size() << " infected, source " << snap->source() << '\n';
    return 0;
}

}  // namespace

int cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rumor source detection with batch and interactive querying", "rumor"};
    app.require_subcommand(1);

    RunOptions run_opt;
    auto* run = app.add_subcommand("run", "Run an experiment config and write CSV results");
    run->add_option("config", run_opt.config, "Experiment config file")->required();
    run->add_option("--seed", run_opt.seed, "Override master_seed");
    run->add_option("--trials", run_opt.trials, "Override trials per grid point");
    run->add_option("--workers", run_opt.workers, "Worker threads (0: hardware threads)");
    run->add_option("--out,-o", run_opt.out, "CSV output path (default: stdout)");
    run->add_option("--svg", run_opt.svg, "Also write an SVG plot");
    run->add_flag("--timing", run_opt.timing, "Record wall_ms per row");

    auto* bnd = app.add_subcommand("bounds", "Evaluate a closed-form bound: bounds <formula> key=value ...");
    bnd->allow_extras();

    std::string snapshot_path;
    std::string snapshot_graph;
    std::size_t top = 0;
    auto* cen = app.add_subcommand("centrality", "Score every infected node of a snapshot");
    cen->add_option("snapshot", snapshot_path, "Snapshot file written by 'simulate'")->required();
    cen->add_option("--graph", snapshot_graph, "Edge list the snapshot came from (for loopy graphs)");
    cen->add_option("--top", top, "Print only the best N nodes");

    GenOptions gen_opt;
    auto* gen = app.add_subcommand("gen", "Generate a topology as an edge list");
    gen->add_option("topology", gen_opt.topology, "regular-tree | er | scale-free")->required();
    gen->add_option("out", gen_opt.out_path, "Output edge-list path")->required();
    gen->add_option("--d", gen_opt.d, "Regular-tree degree");
    gen->add_option("--hops", gen_opt.hops, "Regular-tree radius");
    gen->add_option("--n", gen_opt.n, "Node count");
    gen->add_option("--avg-degree", gen_opt.avg_degree, "ER mean degree");
    gen->add_option("--ratio", gen_opt.ratio, "Scale-free edge/node ratio");
    gen->add_option("--seed", gen_opt.seed, "Generator seed");
    gen->add_flag("--lcc", gen_opt.lcc, "Keep only the largest component (er)");

    SimulateOptions sim_opt;
    auto* sim = app.add_subcommand("simulate", "Spread a rumor and dump the snapshot");
    sim->add_option("out", sim_opt.out_path, "Snapshot output path")->required();
    sim->add_option("--graph", sim_opt.graph, "Edge list to spread on (default: lazy regular tree)");
    sim->add_option("--d", sim_opt.d, "Regular-tree degree");
    sim->add_option("--infected,-N", sim_opt.infected, "Number of infected nodes");
    sim->add_option("--seed", sim_opt.seed, "Seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return 2;
    }

    try {
        if (run->parsed()) return cmd_run(run_opt, out, err);
        if (bnd->parsed()) return cmd_bounds(bnd->remaining(), out);
        if (cen->parsed()) return cmd_centrality(snapshot_path, snapshot_graph, top, out);
        if (gen->parsed()) return cmd_gen(gen_opt, out);
        if (sim->parsed()) return cmd_simulate(sim_opt, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace rumor::harness

#include "rumor/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace rumor::harness {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) throw ConfigError("invalid value for '" + key + "': " + value);
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("invalid boolean for '" + key + "': " + value);
}

TopologyKind parse_topology(const std::string& value) {
    if (value == "regular-tree") return TopologyKind::regular_tree;
    if (value == "er") return TopologyKind::er;
    if (value == "scale-free") return TopologyKind::scale_free;
    if (value == "edge-list") return TopologyKind::edge_list;
    throw ConfigError("unknown topology kind: " + value);
}

SweepAxis parse_axis(const std::string& value) {
    if (value == "p") return SweepAxis::p;
    if (value == "q") return SweepAxis::q;
    if (value == "K") return SweepAxis::K;
    throw ConfigError("unknown sweep axis: " + value);
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

std::string TopologySpec::label() const {
    switch (kind) {
        case TopologyKind::regular_tree: return "regular-tree(d=" + std::to_string(degree) + ")";
        case TopologyKind::er:
            return "er(n=" + std::to_string(n) + ",deg=" + format_double(avg_degree) + ")";
        case TopologyKind::scale_free:
            return "scale-free(n=" + std::to_string(n) + ",ratio=" + format_double(ratio) + ")";
        case TopologyKind::edge_list:
            return "edge-list(" + std::filesystem::path(path).filename().string() + ")";
    }
    return "unknown";
}

std::string EstimatorSpec::label() const {
    std::string base;
    switch (kind) {
        case EstimatorKind::no_query: return "no-query";
        case EstimatorKind::sbq: base = "sbq"; break;
        case EstimatorKind::sbq_mle: base = "sbq-mle"; break;
        case EstimatorKind::idq: base = "idq"; break;
        case EstimatorKind::idq_mle: base = "idq-mle"; break;
    }
    return base + ":" + (fixed_r ? std::to_string(*fixed_r) : std::string("r-star"));
}

EstimatorSpec EstimatorSpec::parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string name = trim(text.substr(0, colon));
    EstimatorSpec spec;
    if (name == "no-query")
        spec.kind = EstimatorKind::no_query;
    else if (name == "sbq")
        spec.kind = EstimatorKind::sbq;
    else if (name == "sbq-mle")
        spec.kind = EstimatorKind::sbq_mle;
    else if (name == "idq")
        spec.kind = EstimatorKind::idq;
    else if (name == "idq-mle")
        spec.kind = EstimatorKind::idq_mle;
    else
        throw ConfigError("unknown estimator: " + name);
    if (colon == std::string::npos) return spec;
    const std::string r = trim(text.substr(colon + 1));
    if (r == "r-star") return spec;
    const auto value = parse_number<unsigned>("estimator r", r);
    if (value < 1) throw ConfigError("estimator repetition count must be >= 1");
    if (spec.kind != EstimatorKind::no_query) spec.fixed_r = value;
    return spec;
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::p: return "p";
        case SweepAxis::q: return "q";
        case SweepAxis::K: return "K";
    }
    return "?";
}

void ExperimentConfig::validate() const {
    if (n_infected < 1) throw ConfigError("n_infected must be >= 1");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (estimators.empty()) throw ConfigError("estimator list is empty");
    if (grid.empty()) throw ConfigError("sweep grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw ConfigError("sweep grid must be strictly increasing");
    if (topology.kind == TopologyKind::regular_tree && topology.degree < 3)
        throw ConfigError("regular-tree degree must be >= 3");
    if (topology.kind == TopologyKind::edge_list && topology.path.empty())
        throw ConfigError("edge-list topology needs a path");

    const auto check_p = [](double v) {
        if (!(v > 0.5 && v <= 1.0)) throw ConfigError("p must lie in (1/2, 1]");
    };
    const auto check_q = [](double v) {
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("q must lie in [0, 1]");
    };
    const auto check_K = [](double v) {
        if (!(v >= 1.0) || v != static_cast<double>(static_cast<std::size_t>(v)))
            throw ConfigError("K grid values must be positive integers");
    };
    if (axis != SweepAxis::p) check_p(p);
    if (axis != SweepAxis::q) check_q(q);
    if (axis != SweepAxis::K && K < 1) throw ConfigError("K must be >= 1");
    for (double v : grid) {
        if (axis == SweepAxis::p) check_p(v);
        if (axis == SweepAxis::q) check_q(v);
        if (axis == SweepAxis::K) check_K(v);
    }
}

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string section;
    std::string raw;
    std::size_t lineno = 0;
    bool estimators_set = false;
    while (std::getline(in, raw)) {
        ++lineno;
        // A '#' or ';' after whitespace starts a trailing comment.
        for (std::size_t i = 1; i < raw.size(); ++i)
            if ((raw[i] == '#' || raw[i] == ';') && std::isspace(static_cast<unsigned char>(raw[i - 1]))) {
                raw.resize(i);
                break;
            }
        std::string line = trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            static const std::vector<std::string> known{"experiment", "topology", "query", "sweep", "estimators"};
            if (std::find(known.begin(), known.end(), section) == known.end())
                throw ConfigError("line " + std::to_string(lineno) + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string where = section + "." + key;

        if (section == "experiment") {
            if (key == "name") cfg.name = value;
            else if (key == "n_infected" || key == "N") cfg.n_infected = parse_number<std::size_t>(where, value);
            else if (key == "trials") cfg.trials = parse_number<std::size_t>(where, value);
            else if (key == "master_seed") cfg.master_seed = parse_number<std::uint64_t>(where, value);
            else if (key == "workers") cfg.workers = parse_number<unsigned>(where, value);
            else if (key == "timing") cfg.timing = parse_bool(where, value);
            else throw ConfigError("line " + std::to_string(lineno) + ": unknown key " + where);
        } else if (section == "topology") {
            if (key == "kind") cfg.topology.kind = parse_topology(value);
            else if (key == "degree") cfg.topology.degree = parse_number<unsigned>(where, value);
            else if (key == "n") cfg.topology.n = parse_number<std::size_t>(where, value);
            else if (key == "avg_degree") cfg.topology.avg_degree = parse_number<double>(where, value);
            else if (key == "ratio") cfg.topology.ratio = parse_number<double>(where, value);
            else if (key == "seed") cfg.topology.seed = parse_number<std::uint64_t>(where, value);
            else if (key == "path") cfg.topology.path = value;
            else throw ConfigError("line " + std::to_string(lineno) + ": unknown key " + where);
        } else if (section == "query") {
            if (key == "K") cfg.K = parse_number<std::size_t>(where, value);
            else if (key == "p") cfg.p = parse_number<double>(where, value);
            else if (key == "q") cfg.q = parse_number<double>(where, value);
            else throw ConfigError("line " + std::to_string(lineno) + ": unknown key " + where);
        } else if (section == "sweep") {
            if (key == "axis") {
                cfg.axis = parse_axis(value);
            } else if (key == "values") {
                cfg.grid.clear();
                for (const auto& item : split_list(value)) cfg.grid.push_back(parse_number<double>(where, item));
            } else {
                throw ConfigError("line " + std::to_string(lineno) + ": unknown key " + where);
            }
        } else if (section == "estimators") {
            if (key != "list") throw ConfigError("line " + std::to_string(lineno) + ": unknown key " + where);
            if (!estimators_set) cfg.estimators.clear();
            estimators_set = true;
            for (const auto& item : split_list(value)) cfg.estimators.push_back(EstimatorSpec::parse(item));
        } else {
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    auto cfg = parse_config(in);
    if (cfg.topology.kind == TopologyKind::edge_list) {
        std::filesystem::path edges(cfg.topology.path);
        if (edges.is_relative()) cfg.topology.path = (std::filesystem::path(path).parent_path() / edges).string();
    }
    return cfg;
}

}  // namespace rumor::harness

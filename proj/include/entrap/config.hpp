#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "entrap/errors.hpp"

namespace entrap {

/**
 * Benchmark sweep configuration. The on-disk format is a sectioned
 * key = value file; unknown sections or keys are rejected by name rather
 * than ignored.
 */
struct ExperimentConfig {
    // [attacker]
    double kappa = 5.0;
    double tolerance = 1e-6;
    // [budget]
    int cap = 15;
    // [sim]
    int episodes = 10000;
    int horizon = 0;  // 0 = derive from gamma and the solver tolerance
    std::uint64_t seed = 42;
    // [bench]
    std::vector<std::string> domains = {"gridworld", "four_rooms", "rock_sampling", "puddle"};
    std::vector<int> grid_sizes = {4, 6, 8, 9};
    std::vector<int> rooms_sizes = {4, 6, 8, 9};
    std::vector<int> rock_sizes = {4, 6};
    std::vector<double> puddle_deltas = {0.2, 0.3, 0.4, 0.5};
    double slip = 0.5;
    int traps = 2;
    int rocks = 3;
    std::uint64_t layout_seed = 7;
    // trap seed 15 places the puddle traps on both cells the defender can
    // force from the start, the guaranteed-entrapment layout
    std::vector<std::uint64_t> trap_seeds = {15, 202, 303, 404, 505};
    double timeout_minutes = 30.0;
    int parallel = 1;
    bool write_traces = false;
    std::string out_dir;

    void validate() const {
        if (!(kappa >= 0.0)) throw ConfigError("attacker.kappa must be >= 0");
        if (!(tolerance > 0.0)) throw ConfigError("attacker.tolerance must be > 0");
        if (cap < 1) throw ConfigError("budget.cap must be >= 1");
        if (episodes < 1) throw ConfigError("sim.episodes must be >= 1");
        if (horizon < 0) throw ConfigError("sim.horizon must be >= 0");
        if (domains.empty()) throw ConfigError("bench.domains must not be empty");
        for (const std::string& d : domains)
            if (d != "gridworld" && d != "four_rooms" && d != "rock_sampling" && d != "puddle" &&
                d != "showroom")
                throw ConfigError("bench.domains contains unknown domain: " + d);
        if (!(slip >= 0.0 && slip < 1.0)) throw ConfigError("bench.slip must lie in [0, 1)");
        if (traps < 1) throw ConfigError("bench.traps must be >= 1");
        if (rocks < 0) throw ConfigError("bench.rocks must be >= 0");
        if (trap_seeds.empty()) throw ConfigError("bench.trap_seeds must not be empty");
        if (!(timeout_minutes >= 0.0)) throw ConfigError("bench.timeout_minutes must be >= 0");
        if (parallel < 1) throw ConfigError("bench.parallel must be >= 1");
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

inline std::vector<std::string> parse_list(const std::string& value, const std::string& where) {
    if (value.size() < 2 || value.front() != '[' || value.back() != ']')
        throw ConfigError(where + ": expected a [list]");
    std::vector<std::string> items;
    std::string body = value.substr(1, value.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(unquote(item));
    }
    return items;
}

template <typename T>
inline T parse_number(const std::string& value, const std::string& where) {
    std::stringstream ss(unquote(value));
    T out;
    std::string rest;
    ss >> out;
    if (ss.fail() || (ss >> rest, !rest.empty()))
        throw ConfigError(where + ": cannot parse number from '" + value + "'");
    return out;
}

inline bool parse_bool(const std::string& value, const std::string& where) {
    const std::string v = unquote(value);
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError(where + ": expected true or false, got '" + value + "'");
}

}  // namespace detail

/// Parses the sectioned key = value format. Unknown keys are fatal and
/// reported by name.
inline ExperimentConfig parse_experiment_config(const std::string& text) {
    ExperimentConfig cfg;
    std::string section;
    std::stringstream ss(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(ss, raw)) {
        ++lineno;
        std::string line = raw;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section != "attacker" && section != "budget" && section != "sim" &&
                section != "bench")
                throw ConfigError("unknown section [" + section + "]");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        const std::string where = section.empty() ? key : section + "." + key;

        const auto as_ints = [&] {
            std::vector<int> out;
            for (const std::string& s : detail::parse_list(value, where))
                out.push_back(detail::parse_number<int>(s, where));
            return out;
        };
        const auto as_doubles = [&] {
            std::vector<double> out;
            for (const std::string& s : detail::parse_list(value, where))
                out.push_back(detail::parse_number<double>(s, where));
            return out;
        };
        const auto as_u64s = [&] {
            std::vector<std::uint64_t> out;
            for (const std::string& s : detail::parse_list(value, where))
                out.push_back(detail::parse_number<std::uint64_t>(s, where));
            return out;
        };

        if (where == "attacker.kappa") cfg.kappa = detail::parse_number<double>(value, where);
        else if (where == "attacker.tolerance") cfg.tolerance = detail::parse_number<double>(value, where);
        else if (where == "budget.cap") cfg.cap = detail::parse_number<int>(value, where);
        else if (where == "sim.episodes") cfg.episodes = detail::parse_number<int>(value, where);
        else if (where == "sim.horizon") cfg.horizon = detail::parse_number<int>(value, where);
        else if (where == "sim.seed") cfg.seed = detail::parse_number<std::uint64_t>(value, where);
        else if (where == "bench.domains") cfg.domains = detail::parse_list(value, where);
        else if (where == "bench.grid_sizes") cfg.grid_sizes = as_ints();
        else if (where == "bench.rooms_sizes") cfg.rooms_sizes = as_ints();
        else if (where == "bench.rock_sizes") cfg.rock_sizes = as_ints();
        else if (where == "bench.puddle_deltas") cfg.puddle_deltas = as_doubles();
        else if (where == "bench.slip") cfg.slip = detail::parse_number<double>(value, where);
        else if (where == "bench.traps") cfg.traps = detail::parse_number<int>(value, where);
        else if (where == "bench.rocks") cfg.rocks = detail::parse_number<int>(value, where);
        else if (where == "bench.layout_seed") cfg.layout_seed = detail::parse_number<std::uint64_t>(value, where);
        else if (where == "bench.trap_seeds") cfg.trap_seeds = as_u64s();
        else if (where == "bench.timeout_minutes") cfg.timeout_minutes = detail::parse_number<double>(value, where);
        else if (where == "bench.parallel") cfg.parallel = detail::parse_number<int>(value, where);
        else if (where == "bench.write_traces") cfg.write_traces = detail::parse_bool(value, where);
        else if (where == "bench.out_dir") cfg.out_dir = detail::unquote(value);
        else throw ConfigError("unknown key: " + where);
    }
    cfg.validate();
    return cfg;
}

/// Renders a config in the accepted format (the default instance reproduces
/// the full desk-scale sweep).
inline std::string experiment_config_to_string(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    const auto list_str = [](const auto& v) {
        std::ostringstream s;
        s.precision(17);
        s << "[";
        for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v[i];
        s << "]";
        return s.str();
    };
    out << "[attacker]\n"
        << "kappa = " << cfg.kappa << "\n"
        << "tolerance = " << cfg.tolerance << "\n\n"
        << "[budget]\n"
        << "cap = " << cfg.cap << "\n\n"
        << "[sim]\n"
        << "episodes = " << cfg.episodes << "\n"
        << "horizon = " << cfg.horizon << "\n"
        << "seed = " << cfg.seed << "\n\n"
        << "[bench]\n"
        << "domains = " << list_str(cfg.domains) << "\n"
        << "grid_sizes = " << list_str(cfg.grid_sizes) << "\n"
        << "rooms_sizes = " << list_str(cfg.rooms_sizes) << "\n"
        << "rock_sizes = " << list_str(cfg.rock_sizes) << "\n"
        << "puddle_deltas = " << list_str(cfg.puddle_deltas) << "\n"
        << "slip = " << cfg.slip << "\n"
        << "traps = " << cfg.traps << "\n"
        << "rocks = " << cfg.rocks << "\n"
        << "layout_seed = " << cfg.layout_seed << "\n"
        << "trap_seeds = " << list_str(cfg.trap_seeds) << "\n"
        << "timeout_minutes = " << cfg.timeout_minutes << "\n"
        << "parallel = " << cfg.parallel << "\n"
        << "write_traces = " << (cfg.write_traces ? "true" : "false") << "\n"
        << "out_dir = \"" << cfg.out_dir << "\"\n";
    return out.str();
}

}  // namespace entrap

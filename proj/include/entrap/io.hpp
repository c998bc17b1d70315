#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "entrap/defender.hpp"
#include "entrap/domains.hpp"
#include "entrap/mdp.hpp"

namespace entrap {

using nlohmann::json;

// ---------------------------------------------------------------------------
// tabular MDP <-> JSON
// ---------------------------------------------------------------------------

inline json mdp_to_json(const TabularMdp& m) {
    json j;
    j["states"] = m.state_labels;
    j["actions"] = m.action_labels;
    json ts = json::array();
    for (int s = 0; s < m.n_states(); ++s)
        for (int a = 0; a < m.n_actions(); ++a)
            for (const Outcome& o : m.row(s, a))
                ts.push_back({{"state", s}, {"action", a}, {"successor", o.next}, {"prob", o.prob}});
    j["transitions"] = std::move(ts);
    j["rewards"] = m.rewards;
    json terminals = json::array();
    for (int s = 0; s < m.n_states(); ++s)
        if (m.is_terminal(s)) terminals.push_back(s);
    j["terminals"] = std::move(terminals);
    j["gamma"] = m.gamma;
    j["initial"] = m.initial_state;
    return j;
}

/// Parses and validates; the first invariant violation is reported with its
/// state/action indices via ModelError.
inline TabularMdp mdp_from_json(const json& j, bool require_nonnegative_rewards = true) {
    TabularMdp m;
    try {
        m.state_labels = j.at("states").get<std::vector<std::string>>();
        m.action_labels = j.at("actions").get<std::vector<std::string>>();
        m.resize_transitions();
        m.rewards = j.at("rewards").get<std::vector<double>>();
        for (int t : j.at("terminals").get<std::vector<int>>()) {
            if (t < 0 || t >= m.n_states()) throw ModelError("terminal index out of range", t);
            m.terminal[t] = 1;
        }
        m.gamma = j.at("gamma").get<double>();
        m.initial_state = j.at("initial").get<int>();
        for (const json& e : j.at("transitions")) {
            const int s = e.at("state").get<int>();
            const int a = e.at("action").get<int>();
            if (s < 0 || s >= m.n_states() || a < 0 || a >= m.n_actions())
                throw ModelError("transition indices out of range", s, a);
            m.row(s, a).push_back({e.at("successor").get<int>(), e.at("prob").get<double>()});
        }
    } catch (const json::exception& ex) {
        throw IoError(std::string("malformed MDP document: ") + ex.what());
    }
    if (m.rewards.size() != m.state_labels.size()) throw ModelError("reward vector size mismatch");
    m.validate(require_nonnegative_rewards);
    return m;
}

// ---------------------------------------------------------------------------
// domain instance files
// ---------------------------------------------------------------------------

inline json instance_to_json(const DomainInstance& inst) {
    json j;
    j["believed"] = mdp_to_json(inst.believed);
    j["truth"] = mdp_to_json(inst.truth);
    j["traps"] = inst.traps;
    j["metadata"] = {{"domain", inst.metadata.domain},
                     {"size", inst.metadata.size},
                     {"slip", inst.metadata.slip},
                     {"delta", inst.metadata.delta},
                     {"n_traps", inst.metadata.n_traps},
                     {"n_rocks", inst.metadata.n_rocks},
                     {"seed", inst.metadata.seed},
                     {"trap_seed", inst.metadata.trap_seed},
                     {"goal_reachable", inst.metadata.goal_reachable},
                     {"goal_state", inst.metadata.goal_state}};
    return j;
}

inline DomainInstance instance_from_json(const json& j) {
    DomainInstance inst;
    try {
        inst.believed = mdp_from_json(j.at("believed"));
        inst.truth = mdp_from_json(j.at("truth"));
        inst.traps = j.at("traps").get<std::vector<int>>();
        const json& md = j.at("metadata");
        inst.metadata.domain = md.at("domain").get<std::string>();
        inst.metadata.size = md.at("size").get<int>();
        inst.metadata.slip = md.at("slip").get<double>();
        inst.metadata.delta = md.at("delta").get<double>();
        inst.metadata.n_traps = md.at("n_traps").get<int>();
        inst.metadata.n_rocks = md.at("n_rocks").get<int>();
        inst.metadata.seed = md.at("seed").get<std::uint64_t>();
        inst.metadata.trap_seed = md.at("trap_seed").get<std::uint64_t>();
        inst.metadata.goal_reachable = md.at("goal_reachable").get<bool>();
        inst.metadata.goal_state = md.at("goal_state").get<int>();
    } catch (const json::exception& ex) {
        throw IoError(std::string("malformed instance document: ") + ex.what());
    }
    for (int t : inst.traps) {
        if (t < 0 || t >= inst.believed.n_states()) throw ModelError("trap index out of range", t);
        if (inst.believed.is_terminal(t))
            throw ModelError("trap is terminal in the believed model", t);
        if (!inst.truth.is_terminal(t)) throw ModelError("trap is not terminal in the truth model", t);
    }
    return inst;
}

/// Stable 64-bit FNV-1a over the canonical serialized instance; ties policy
/// files to the exact instance they were planned for.
inline std::string instance_fingerprint(const DomainInstance& inst) {
    const std::string bytes = instance_to_json(inst).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// defender policy files
// ---------------------------------------------------------------------------

/// The execution-time view of a defender solution: the chosen action per
/// reachable (state, action, budget) triple. Loadable without recompiling.
struct DefenderPolicyTable {
    std::string fingerprint;
    int budget = 0;  // K
    int n_attacker_states = 0;
    int n_attacker_actions = 0;
    double kappa = 5.0;
    double tolerance = 1e-6;
    double initial_value = 0.0;
    std::unordered_map<std::int64_t, DefenderAction> choice;

    std::int64_t key(int s, int a, int k) const {
        return (static_cast<std::int64_t>(s) * (n_attacker_actions + 1) + (a + 1)) * (budget + 1) + k;
    }
    std::optional<DefenderAction> lookup(int s, int a, int k) const {
        const auto it = choice.find(key(s, a, k));
        if (it == choice.end()) return std::nullopt;
        return it->second;
    }
};

inline DefenderPolicyTable make_policy_table(const DefenderMdp& d, const DefenderSolution& sol,
                                             const std::string& fingerprint, double kappa,
                                             double tolerance) {
    DefenderPolicyTable t;
    t.fingerprint = fingerprint;
    t.budget = d.budget;
    t.n_attacker_states = d.n_attacker_states;
    t.n_attacker_actions = d.n_attacker_actions;
    t.kappa = kappa;
    t.tolerance = tolerance;
    t.initial_value = sol.initial_value;
    for (int id = 0; id < d.n_states(); ++id) {
        if (d.absorbing[id]) continue;
        const DefenderState& ds = d.states[id];
        t.choice[t.key(ds.attacker_state, ds.attacker_action, ds.budget)] =
            d.actions[id][sol.policy[id]];
    }
    return t;
}

inline json policy_to_json(const DefenderMdp& d, const DefenderSolution& sol,
                           const std::string& fingerprint, double kappa, double tolerance) {
    json j;
    j["fingerprint"] = fingerprint;
    j["budget"] = d.budget;
    j["n_states"] = d.n_attacker_states;
    j["n_actions"] = d.n_attacker_actions;
    j["kappa"] = kappa;
    j["tolerance"] = tolerance;
    j["gamma"] = d.gamma;
    j["traps"] = d.traps;
    j["empty_trap_set"] = d.empty_trap_set;
    j["initial_value"] = sol.initial_value;
    json entries = json::array();
    for (int id = 0; id < d.n_states(); ++id) {
        if (d.absorbing[id]) continue;
        const DefenderState& ds = d.states[id];
        const DefenderAction& act = d.actions[id][sol.policy[id]];
        json e = {{"s", ds.attacker_state},
                  {"a", ds.attacker_action},
                  {"k", ds.budget},
                  {"value", sol.values[id]}};
        if (act.kind == DefenderActionKind::noop)
            e["do"] = "noop";
        else
            e["do"] = json{{"select", act.target}};
        entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    return j;
}

inline DefenderPolicyTable policy_table_from_json(const json& j) {
    DefenderPolicyTable t;
    try {
        t.fingerprint = j.at("fingerprint").get<std::string>();
        t.budget = j.at("budget").get<int>();
        t.n_attacker_states = j.at("n_states").get<int>();
        t.n_attacker_actions = j.at("n_actions").get<int>();
        t.kappa = j.at("kappa").get<double>();
        t.tolerance = j.at("tolerance").get<double>();
        t.initial_value = j.at("initial_value").get<double>();
        for (const json& e : j.at("entries")) {
            DefenderAction act;
            if (e.at("do").is_string()) {
                act.kind = DefenderActionKind::noop;
            } else {
                act.kind = DefenderActionKind::select_outcome;
                act.target = e.at("do").at("select").get<int>();
            }
            t.choice[t.key(e.at("s").get<int>(), e.at("a").get<int>(), e.at("k").get<int>())] = act;
        }
    } catch (const json::exception& ex) {
        throw IoError(std::string("malformed policy document: ") + ex.what());
    }
    return t;
}

// ---------------------------------------------------------------------------
// file helpers
// ---------------------------------------------------------------------------

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json load_json_file(const std::string& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const json::exception& ex) {
        throw IoError("cannot parse " + path + ": " + ex.what());
    }
}

}  // namespace entrap

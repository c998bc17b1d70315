#pragma once

#include <cmath>
#include <deque>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "entrap/attacker.hpp"
#include "entrap/mdp.hpp"
#include "entrap/solve.hpp"

namespace entrap {

/**
 * One state of the compiled defender problem: the attacker's current state,
 * the action the attacker has committed to this step, and the remaining
 * intervention budget. attacker_action is -1 for arrivals where no further
 * attacker action exists (trap states and believed-terminal states).
 */
struct DefenderState {
    int attacker_state = 0;
    int attacker_action = -1;
    int budget = 0;
};

enum class DefenderActionKind { noop, select_outcome };

/// noop lets the environment resolve the attacker's action; select_outcome
/// forces one successor from the support of the attacker's believed row.
struct DefenderAction {
    DefenderActionKind kind = DefenderActionKind::noop;
    int target = -1;  // forced successor state for select_outcome

    bool operator==(const DefenderAction&) const = default;
};

/**
 * The compiled defender MDP over (state, committed action, budget) triples.
 *
 * Rewards are state-entry payments in the attacker's negated currency:
 * entering a non-absorbing triple pays minus the attacker's entry reward,
 * entering a trap pays 0, and entering a budget-zero non-trap triple pays
 * minus the attacker's optimal Q value there, a one-time proxy for everything
 * the attacker can still collect once interventions stop. Every transition
 * decrements the budget; trap-bearing and budget-zero triples are absorbing.
 */
struct DefenderMdp {
    // snapshot of the attacker quantities the solver and accessors need
    int n_attacker_states = 0;
    int n_attacker_actions = 0;
    double gamma = 0.9;
    std::vector<double> attacker_rewards;
    QFunction q_star;
    std::vector<char> believed_terminal;
    std::vector<char> trap_mask;
    std::vector<int> traps;
    int budget = 0;  // K
    bool empty_trap_set = false;
    bool pruned = true;
    bool degenerate_initial = false;  // initial state already trapped/terminal

    std::vector<DefenderState> states;
    std::vector<char> absorbing;
    std::vector<double> entry_payment;
    std::vector<std::vector<DefenderAction>> actions;       // empty for absorbing states
    std::vector<std::vector<std::vector<Outcome>>> rows;    // [state][action] -> defender successors
    std::vector<std::pair<int, double>> initial;            // layer-K arrival distribution

    int n_states() const { return static_cast<int>(states.size()); }

    /// Product-space size |S| * |A| * (K+1) before any reachability pruning.
    static long long enumerable_state_count(int n_states, int n_actions, int K) {
        return static_cast<long long>(n_states) * n_actions * (K + 1);
    }

    /// Dense lookup; -1 when the triple was never materialized.
    int id_of(int s, int a, int k) const {
        return id_table_[(static_cast<std::size_t>(s) * (n_attacker_actions + 1) + (a + 1)) *
                             (budget + 1) +
                         k];
    }

    bool is_trap(int s) const { return trap_mask[s] != 0; }

    // compile-time internals
    std::vector<int> id_table_;
};

/// Optimal defender values and the greedy execution policy. Values at
/// absorbing triples equal their terminal payment (0 at traps, -Q* at the
/// exhausted-budget layer); elsewhere they are continuation values.
struct DefenderSolution {
    std::vector<double> values;
    std::vector<int> policy;  // index into DefenderMdp::actions, -1 at absorbing states
    double initial_value = 0.0;
    int vi_iterations = 0;
    double vi_induction_gap = 0.0;  // max disagreement between the two solve routes
};

namespace detail {

inline int defender_make_state(DefenderMdp& d, int s, int a, int k) {
    const bool trap = d.is_trap(s);
    const bool term = d.believed_terminal[s] != 0;
    const int key_a = (trap || term) ? -1 : a;
    const std::size_t slot =
        (static_cast<std::size_t>(s) * (d.n_attacker_actions + 1) + (key_a + 1)) * (d.budget + 1) + k;
    int& id = d.id_table_[slot];
    if (id >= 0) return id;
    id = d.n_states();
    d.states.push_back({s, key_a, k});
    if (trap) {
        d.absorbing.push_back(1);
        d.entry_payment.push_back(0.0);
    } else if (term) {
        d.absorbing.push_back(1);
        d.entry_payment.push_back(-d.attacker_rewards[s]);
    } else if (k == 0) {
        d.absorbing.push_back(1);
        d.entry_payment.push_back(-d.q_star.at(s, a));
    } else {
        d.absorbing.push_back(0);
        d.entry_payment.push_back(-d.attacker_rewards[s]);
    }
    d.actions.emplace_back();
    d.rows.emplace_back();
    return id;
}

/// Defender-state arrivals for the attacker landing in s' with budget k':
/// the next attacker action is drawn from the behavior distribution unless
/// the landing state has none (trap or believed-terminal).
inline void defender_arrivals(DefenderMdp& d, const AttackerModel& attacker, int s_next, int k_next,
                              double prob, std::vector<Outcome>& out) {
    if (d.is_trap(s_next) || d.believed_terminal[s_next]) {
        out.push_back({defender_make_state(d, s_next, -1, k_next), prob});
        return;
    }
    const auto& behavior = attacker.behavior.rows[s_next];
    for (int a = 0; a < d.n_attacker_actions; ++a) {
        if (behavior[a] <= 0.0) continue;
        out.push_back({defender_make_state(d, s_next, a, k_next), prob * behavior[a]});
    }
}

}  // namespace detail

/**
 * Compiles the defender MDP for a built attacker, a trap set, and budget K.
 *
 * noop resolves the attacker's committed action through the believed
 * transition row and then draws the next attacker action; select_outcome
 * forces one successor from that row's support (so every realized sequence
 * stays possible under the attacker's model) and draws the next attacker
 * action the same way. With prune=true only triples reachable from the
 * initial arrival distribution are materialized.
 *
 * An empty trap set is allowed (pure value-suppression mode) and flagged via
 * empty_trap_set. K = 0 compiles the degenerate no-intervention problem.
 */
inline DefenderMdp compile_defender_mdp(const AttackerModel& attacker, const std::vector<int>& traps,
                                        int K, bool prune = true) {
    const TabularMdp& mdp = attacker.mdp;
    if (K < 0) throw ModelError("budget must be >= 0");
    DefenderMdp d;
    d.n_attacker_states = mdp.n_states();
    d.n_attacker_actions = mdp.n_actions();
    d.gamma = mdp.gamma;
    d.attacker_rewards = mdp.rewards;
    d.q_star = attacker.q_star;
    d.believed_terminal = mdp.terminal;
    d.trap_mask.assign(mdp.n_states(), 0);
    for (int t : traps) {
        if (t < 0 || t >= mdp.n_states())
            throw ModelError("trap state out of range", t);
        if (mdp.is_terminal(t))
            throw ModelError("trap state is terminal in the believed model", t);
        d.trap_mask[t] = 1;
    }
    d.traps = traps;
    std::sort(d.traps.begin(), d.traps.end());
    d.traps.erase(std::unique(d.traps.begin(), d.traps.end()), d.traps.end());
    d.budget = K;
    d.empty_trap_set = d.traps.empty();
    d.pruned = prune;
    d.id_table_.assign(static_cast<std::size_t>(mdp.n_states()) * (mdp.n_actions() + 1) * (K + 1),
                       -1);

    const int s0 = mdp.initial_state;
    if (d.is_trap(s0) || mdp.is_terminal(s0)) {
        d.degenerate_initial = true;
    } else {
        std::vector<Outcome> init;
        detail::defender_arrivals(d, attacker, s0, K, 1.0, init);
        for (const Outcome& o : init) d.initial.emplace_back(o.next, o.prob);
    }

    if (!prune) {
        // materialize the full product space (valid pairs only)
        for (int k = 0; k <= K; ++k) {
            for (int s = 0; s < mdp.n_states(); ++s) {
                if (d.is_trap(s) || mdp.is_terminal(s)) {
                    detail::defender_make_state(d, s, -1, k);
                    continue;
                }
                for (int a = 0; a < mdp.n_actions(); ++a)
                    if (mdp.valid(s, a)) detail::defender_make_state(d, s, a, k);
            }
        }
    }

    // breadth-first expansion; new targets created by defender_arrivals are
    // appended to d.states and visited in id order. Actions and rows are
    // built into locals because creating target states grows d.actions and
    // d.rows underneath any reference into them.
    for (int id = 0; id < d.n_states(); ++id) {
        if (d.absorbing[id]) continue;
        const DefenderState ds = d.states[id];
        const auto& believed_row = mdp.row(ds.attacker_state, ds.attacker_action);
        std::vector<DefenderAction> acts;
        std::vector<std::vector<Outcome>> rows;

        acts.push_back({DefenderActionKind::noop, -1});
        rows.emplace_back();
        for (const Outcome& o : believed_row)
            detail::defender_arrivals(d, attacker, o.next, ds.budget - 1, o.prob, rows.back());

        for (const Outcome& o : believed_row) {
            acts.push_back({DefenderActionKind::select_outcome, o.next});
            rows.emplace_back();
            detail::defender_arrivals(d, attacker, o.next, ds.budget - 1, 1.0, rows.back());
        }
        d.actions[id] = std::move(acts);
        d.rows[id] = std::move(rows);
    }
    return d;
}

namespace detail {

/// One optimal backup at a non-absorbing defender state given continuation
/// values `w`; returns (best value, chosen action index with lowest-index
/// tie-breaking).
inline std::pair<double, int> defender_backup(const DefenderMdp& d, int id,
                                              const std::vector<double>& w) {
    double best = kNegInf;
    const auto& rows = d.rows[id];
    for (std::size_t u = 0; u < rows.size(); ++u) {
        double v = 0.0;
        for (const Outcome& o : rows[u])
            v += o.prob * (d.entry_payment[o.next] + d.gamma * w[o.next]);
        if (v > best) best = v;
    }
    int choice = -1;
    for (std::size_t u = 0; u < rows.size(); ++u) {
        double v = 0.0;
        for (const Outcome& o : rows[u])
            v += o.prob * (d.entry_payment[o.next] + d.gamma * w[o.next]);
        if (v >= best - kTieTol) {
            choice = static_cast<int>(u);
            break;
        }
    }
    return {best, choice};
}

}  // namespace detail

/**
 * Solves the compiled defender MDP.
 *
 * Primary route: exact backward induction over budget layers (every
 * transition strictly decrements the budget, so layer k depends only on
 * layer k-1). Verification route: generic Jacobi value iteration over the
 * same states, which must agree within 10x tolerance; disagreement indicates
 * a compilation bug and raises an error.
 */
inline DefenderSolution solve_defender(const DefenderMdp& d, const SolveOptions& opt = {}) {
    const int n = d.n_states();
    std::vector<double> w(n, 0.0);  // continuation values; absorbing stay 0
    DefenderSolution sol;
    sol.policy.assign(n, -1);

    // layered backward induction, budget ascending
    std::vector<std::vector<int>> layer(static_cast<std::size_t>(d.budget) + 1);
    for (int id = 0; id < n; ++id)
        if (!d.absorbing[id]) layer[d.states[id].budget].push_back(id);
    for (int k = 1; k <= d.budget; ++k) {
        for (int id : layer[k]) {
            auto [value, choice] = detail::defender_backup(d, id, w);
            w[id] = value;
            sol.policy[id] = choice;
        }
    }

    // generic value iteration cross-check
    {
        std::vector<double> v(n, 0.0), next(n, 0.0);
        const double target = detail::sweep_target(opt.tolerance, d.gamma);
        double residual = 0.0;
        int iter = 0;
        for (; iter < opt.max_iterations; ++iter) {
            residual = 0.0;
            for (int id = 0; id < n; ++id) {
                if (d.absorbing[id]) continue;
                next[id] = detail::defender_backup(d, id, v).first;
                residual = std::max(residual, std::abs(next[id] - v[id]));
            }
            v.swap(next);
            if (residual <= target) break;
        }
        if (residual > target) throw ConvergenceError(residual, iter);
        double gap = 0.0;
        for (int id = 0; id < n; ++id) gap = std::max(gap, std::abs(v[id] - w[id]));
        if (gap > 10.0 * opt.tolerance)
            throw Error("defender solve self-check failed: layered induction and value iteration "
                        "disagree by " + std::to_string(gap));
        sol.vi_iterations = iter + 1;
        sol.vi_induction_gap = gap;
    }

    sol.values.resize(n);
    for (int id = 0; id < n; ++id)
        sol.values[id] = d.absorbing[id] ? d.entry_payment[id] : w[id];

    sol.initial_value = 0.0;
    for (const auto& [id, p] : d.initial) sol.initial_value += p * sol.values[id];
    return sol;
}

/// The number reported as "defender value": the expectation of V^D at the
/// budget-K layer over the attacker's first action.
inline double defender_initial_value(const DefenderSolution& sol) { return sol.initial_value; }

/**
 * Value of one (attacker state, committed action, remaining budget) triple.
 * Trap-bearing, believed-terminal, and budget-zero triples have closed-form
 * values even when pruning skipped them; other unmaterialized triples return
 * nullopt.
 */
inline std::optional<double> defender_value_at(const DefenderMdp& d, const DefenderSolution& sol,
                                               int s, int a, int k) {
    if (d.is_trap(s)) return 0.0;
    if (d.believed_terminal[s]) return -d.attacker_rewards[s];
    const int id = d.id_of(s, a, k);
    if (id >= 0) return sol.values[id];
    if (k == 0 && a >= 0 && d.q_star.defined(s, a)) return -d.q_star.at(s, a);
    return std::nullopt;
}

/// Evaluates a fixed defender policy (action index per state; absorbing
/// states ignored) by one exact layered pass. Used to check that the optimal
/// policy dominates never-intervening.
inline std::vector<double> evaluate_defender_policy(const DefenderMdp& d,
                                                    const std::function<int(int)>& choose) {
    const int n = d.n_states();
    std::vector<double> w(n, 0.0);
    std::vector<std::vector<int>> layer(static_cast<std::size_t>(d.budget) + 1);
    for (int id = 0; id < n; ++id)
        if (!d.absorbing[id]) layer[d.states[id].budget].push_back(id);
    for (int k = 1; k <= d.budget; ++k) {
        for (int id : layer[k]) {
            const int u = choose(id);
            double v = 0.0;
            for (const Outcome& o : d.rows[id][u])
                v += o.prob * (d.entry_payment[o.next] + d.gamma * w[o.next]);
            w[id] = v;
        }
    }
    for (int id = 0; id < n; ++id)
        if (d.absorbing[id]) w[id] = d.entry_payment[id];
    return w;
}

}  // namespace entrap

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "entrap/attacker.hpp"
#include "entrap/mdp.hpp"

namespace entrap {

/// The attacker's "I understand nothing" hypothesis: uniform transitions
/// 1/|S| to every state for every action.
struct HighEntropyModel {
    int state_count = 1;
    double log_step() const { return -std::log(static_cast<double>(state_count)); }
};

// Tipping demands P(tau|believed) strictly below P(tau|uniform); ties do not
// tip. Accumulated log terms drift from the multiplied threshold by ulps, so
// strictness is enforced with a slack far above rounding noise and far below
// any real probability gap.
inline constexpr double kTipSlack = 1e-9;

/**
 * Result of the budget search. When not capped, `witness` is a shortest
 * trajectory with positive believed probability that the high-entropy model
 * explains strictly better; its length is k and no shorter trajectory
 * qualifies (guaranteed by the depth-layered search order).
 */
struct BudgetResult {
    int k = 0;
    bool capped = false;
    std::optional<Trajectory> witness;
};

/// Budget the defender actually consumes: one less than a found tipping
/// depth (interventions stay strictly shorter than the tipping trajectory),
/// or the full cap when the search was capped.
inline int usable_defender_budget(const BudgetResult& r, int cap) {
    return r.capped ? cap : std::min(r.k - 1, cap);
}

/**
 * Pessimistic tipping depth: the smallest d such that some trajectory of d
 * transitions from the initial state has 0 < P(tau | believed) < (1/|S|)^d.
 * Equality does not tip.
 *
 * Layered dynamic program equivalent to uniform-cost search with unit edge
 * costs: per depth, keep for every end state the minimum log-probability over
 * all positive-probability trajectories reaching it. Only that minimum
 * matters for the strict-less-than test at each depth, because extending a
 * trajectory adds the same edge terms regardless of its prefix, so dominated
 * prefixes can never produce a smaller continuation.
 */
inline BudgetResult compute_budget(const TabularMdp& believed, int cap) {
    believed.validate();
    if (cap < 1) throw ModelError("budget cap must be >= 1");
    const int ns = believed.n_states();
    const int na = believed.n_actions();
    const double log_uniform = HighEntropyModel{ns}.log_step();
    const double inf = std::numeric_limits<double>::infinity();

    struct Parent {
        int state = -1;
        int action = -1;
    };
    std::vector<double> cur(ns, inf), next(ns, inf);
    std::vector<std::vector<Parent>> parents;  // per depth >= 1
    cur[believed.initial_state] = 0.0;

    for (int depth = 1; depth <= cap; ++depth) {
        std::fill(next.begin(), next.end(), inf);
        parents.emplace_back(ns);
        auto& par = parents.back();
        for (int s = 0; s < ns; ++s) {
            if (cur[s] == inf || believed.is_terminal(s)) continue;
            for (int a = 0; a < na; ++a) {
                for (const Outcome& o : believed.row(s, a)) {
                    const double lp = cur[s] + std::log(o.prob);
                    if (lp < next[o.next]) {
                        next[o.next] = lp;
                        par[o.next] = {s, a};
                    }
                }
            }
        }
        const double threshold = depth * log_uniform - kTipSlack;
        int hit = -1;
        for (int s = 0; s < ns; ++s) {
            if (next[s] < threshold) {
                hit = s;
                break;  // lowest end-state index wins
            }
        }
        if (hit >= 0) {
            Trajectory tau;
            std::vector<int> rev_states{hit};
            std::vector<int> rev_actions;
            int s = hit;
            for (int dpt = depth; dpt >= 1; --dpt) {
                const Parent& p = parents[dpt - 1][s];
                rev_actions.push_back(p.action);
                rev_states.push_back(p.state);
                s = p.state;
            }
            std::reverse(rev_states.begin(), rev_states.end());
            std::reverse(rev_actions.begin(), rev_actions.end());
            tau.states = std::move(rev_states);
            tau.actions = std::move(rev_actions);
            return {depth, false, std::move(tau)};
        }
        cur.swap(next);
    }
    return {cap, true, std::nullopt};
}

/**
 * Literal enumeration oracle for the tipping definition: walks every
 * positive-probability trajectory from the initial state up to max_len
 * transitions and applies the two conditions directly. Guarded to tiny
 * models; intended for tests only.
 */
inline BudgetResult brute_force_budget_oracle(const TabularMdp& believed, int max_len) {
    believed.validate();
    if (believed.n_states() > 6 || max_len > 6)
        throw StateSpaceError("brute-force budget oracle is limited to |S| <= 6, max_len <= 6");
    if (max_len < 1) throw ModelError("max_len must be >= 1");
    const double log_uniform = HighEntropyModel{believed.n_states()}.log_step();

    std::optional<Trajectory> found;
    int found_depth = max_len + 1;
    Trajectory walk;
    walk.states.push_back(believed.initial_state);

    auto dfs = [&](auto&& self, int s, int depth, double logp) -> void {
        if (depth >= found_depth - 1) return;  // deeper wins are never shorter
        if (believed.is_terminal(s)) return;
        for (int a = 0; a < believed.n_actions(); ++a) {
            for (const Outcome& o : believed.row(s, a)) {
                const double lp = logp + std::log(o.prob);
                walk.push(a, o.next);
                const int d = depth + 1;
                if (lp < d * log_uniform - kTipSlack && d < found_depth) {
                    found = walk;
                    found_depth = d;
                } else if (d < max_len) {
                    self(self, o.next, d, lp);
                }
                walk.states.pop_back();
                walk.actions.pop_back();
            }
        }
    };
    dfs(dfs, believed.initial_state, 0, 0.0);

    if (found) return {found_depth, false, std::move(found)};
    return {max_len, true, std::nullopt};
}

enum class CapDiscounting {
    automatic,           // gamma = 1 when every relevant state can reach a trap, else the model's gamma
    force_undiscounted,  // gamma = 1, NoTrapReachableError when reachability fails
    discounted,          // always the model's gamma
};

/**
 * Task-specific budget cap from planning: solves the unbudgeted defender
 * problem with every arrival costing one step and traps absorbing, and
 * returns the expected number of steps the defender needs from the initial
 * distribution. Undiscounted counting is used when every non-terminal state
 * can reach some trap through the believed transition graph.
 */
inline double budget_cap_from_planning(const AttackerModel& attacker, const std::vector<int>& traps,
                                       const SolveOptions& opt = {},
                                       CapDiscounting mode = CapDiscounting::automatic) {
    const TabularMdp& mdp = attacker.mdp;
    if (traps.empty()) throw ModelError("budget cap planning requires a nonempty trap set");
    std::vector<char> trap_mask(mdp.n_states(), 0);
    for (int t : traps) {
        if (t < 0 || t >= mdp.n_states()) throw ModelError("trap state out of range", t);
        trap_mask[t] = 1;
    }
    if (trap_mask[mdp.initial_state]) return 0.0;
    if (mdp.is_terminal(mdp.initial_state)) return 0.0;

    // backward reachability to a trap over edges s -> s' with any T(s,a,s') > 0
    std::vector<char> reaches(mdp.n_states(), 0);
    {
        std::vector<std::vector<int>> preds(mdp.n_states());
        for (int s = 0; s < mdp.n_states(); ++s) {
            if (mdp.is_terminal(s)) continue;
            for (int a = 0; a < mdp.n_actions(); ++a)
                for (const Outcome& o : mdp.row(s, a)) preds[o.next].push_back(s);
        }
        std::vector<int> stack;
        for (int t = 0; t < mdp.n_states(); ++t)
            if (trap_mask[t]) {
                reaches[t] = 1;
                stack.push_back(t);
            }
        while (!stack.empty()) {
            const int s = stack.back();
            stack.pop_back();
            for (int p : preds[s])
                if (!reaches[p]) {
                    reaches[p] = 1;
                    stack.push_back(p);
                }
        }
    }
    bool all_reach = true;
    for (int s = 0; s < mdp.n_states(); ++s)
        if (!mdp.is_terminal(s) && !reaches[s]) all_reach = false;

    double gamma;
    switch (mode) {
        case CapDiscounting::automatic:
            gamma = all_reach ? 1.0 : mdp.gamma;
            break;
        case CapDiscounting::force_undiscounted:
            if (!all_reach)
                throw NoTrapReachableError("some state cannot reach any trap; undiscounted step "
                                           "counting is not well-defined");
            gamma = 1.0;
            break;
        case CapDiscounting::discounted:
            gamma = mdp.gamma;
            break;
        default:
            gamma = mdp.gamma;
    }

    // unbudgeted defender problem over (state, committed action) pairs;
    // pair index s * n_actions + a, absorbing pairs folded into the backup
    const int na = mdp.n_actions();
    const auto pair_id = [na](int s, int a) { return s * na + a; };
    std::vector<double> w(static_cast<std::size_t>(mdp.n_states()) * na, 0.0);
    std::vector<double> next_w(w.size(), 0.0);

    // arrival cost of landing in s': one step, plus the continuation when the
    // walk goes on (absorbing at traps and believed-terminal states)
    const auto arrival = [&](int s_next, const std::vector<double>& values) {
        if (trap_mask[s_next] || mdp.is_terminal(s_next)) return -1.0;
        double v = -1.0;
        const auto& behavior = attacker.behavior.rows[s_next];
        for (int a2 = 0; a2 < na; ++a2)
            if (behavior[a2] > 0.0) v += gamma * behavior[a2] * values[pair_id(s_next, a2)];
        return v;
    };

    double residual = 0.0;
    const double target = opt.tolerance * (gamma < 1.0 ? (1.0 - gamma) : 1.0);
    int iter = 0;
    for (; iter < opt.max_iterations; ++iter) {
        residual = 0.0;
        for (int s = 0; s < mdp.n_states(); ++s) {
            if (trap_mask[s] || mdp.is_terminal(s)) continue;
            for (int a = 0; a < na; ++a) {
                if (!mdp.valid(s, a)) continue;
                double best = kNegInf;
                double noop = 0.0;
                for (const Outcome& o : mdp.row(s, a)) {
                    const double arr = arrival(o.next, w);
                    noop += o.prob * arr;
                    best = std::max(best, arr);  // forcing this outcome
                }
                best = std::max(best, noop);
                next_w[pair_id(s, a)] = best;
                residual = std::max(residual, std::abs(best - w[pair_id(s, a)]));
            }
        }
        w.swap(next_w);
        if (residual <= target) break;
    }
    if (residual > target) throw ConvergenceError(residual, iter);

    double expected = 0.0;
    const auto& behavior = attacker.behavior.rows[mdp.initial_state];
    for (int a = 0; a < na; ++a)
        if (behavior[a] > 0.0) expected += behavior[a] * w[pair_id(mdp.initial_state, a)];
    return -expected;
}

}  // namespace entrap

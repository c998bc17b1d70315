#pragma once

#include <utility>
#include <vector>

#include "entrap/mdp.hpp"
#include "entrap/rng.hpp"
#include "entrap/solve.hpp"

namespace entrap {

/**
 * The attacker's side of the problem: its believed model (trap states are
 * ordinary, non-terminal states here), the optimal value/Q functions solved
 * on it, and the noisy-rational behavior distribution
 * P(a|s) proportional to exp(kappa * Q*(s,a)).
 *
 * Everything is computed once at build time and frozen; the attacker never
 * re-plans during episodes.
 */
struct AttackerModel {
    TabularMdp mdp;  // believed model
    double kappa = 5.0;
    ValueFunction v_star;
    QFunction q_star;
    StochasticPolicy behavior;
    double solve_tolerance = 1e-6;
};

/// Solves the believed model and derives the softmax behavior per state.
/// Deterministic and idempotent for fixed inputs.
inline AttackerModel build_attacker(TabularMdp mdp, double kappa, const SolveOptions& opt = {}) {
    if (!(kappa >= 0.0)) throw ModelError("kappa must be >= 0");
    AttackerModel model;
    Solution sol = value_iteration(mdp, opt);
    model.mdp = std::move(mdp);
    model.kappa = kappa;
    model.v_star = std::move(sol.value);
    model.q_star = std::move(sol.q);
    model.solve_tolerance = opt.tolerance;

    const int ns = model.mdp.n_states();
    const int na = model.mdp.n_actions();
    model.behavior.rows.resize(ns);
    std::vector<double> valid_q;
    std::vector<int> valid_a;
    for (int s = 0; s < ns; ++s) {
        if (model.mdp.is_terminal(s)) continue;
        valid_q.clear();
        valid_a.clear();
        for (int a = 0; a < na; ++a) {
            if (model.q_star.defined(s, a)) {
                valid_q.push_back(model.q_star.at(s, a));
                valid_a.push_back(a);
            }
        }
        std::vector<double> p = softmax_distribution(valid_q, kappa);
        model.behavior.rows[s].assign(na, 0.0);
        for (std::size_t i = 0; i < valid_a.size(); ++i)
            model.behavior.rows[s][valid_a[i]] = p[i];
    }
    return model;
}

/**
 * Expected discounted return of the unopposed noisy-rational attacker in its
 * believed model, evaluated at the initial state. This is the analytic
 * "attacker value" baseline that defender values are compared against.
 */
inline double attacker_baseline_value(const AttackerModel& model, const SolveOptions& opt = {}) {
    if (model.mdp.is_terminal(model.mdp.initial_state)) return 0.0;
    ValueFunction v = policy_evaluation(model.mdp, model.behavior, opt);
    return v[model.mdp.initial_state];
}

/// Draws one action from the behavior distribution at `state`.
inline int sample_attacker_action(const AttackerModel& model, int state, RngStream& rng) {
    if (state < 0 || state >= model.mdp.n_states())
        throw ModelError("state out of range", state);
    if (model.mdp.is_terminal(state))
        throw ModelError("cannot sample an action at a terminal state", state);
    return rng.sample(model.behavior.rows[state]);
}

}  // namespace entrap

#pragma once

#include <cmath>
#include <vector>

#include "entrap/mdp.hpp"

namespace entrap {

struct SolveOptions {
    double tolerance = 1e-6;      // sup-norm accuracy target for the returned values
    int max_iterations = 200000;  // Jacobi sweeps before ConvergenceError
};

struct Solution {
    ValueFunction value;
    QFunction q;
    int iterations = 0;
    double residual = 0.0;  // last sweep's max-norm update
};

namespace detail {

// Stop once successive Jacobi iterates differ by at most tolerance*(1-gamma):
// the contraction bound then puts the returned values within tolerance of the
// fixed point, which the library's cross-checks (oracle comparisons, layered
// induction agreement) rely on.
inline double sweep_target(double tolerance, double gamma) {
    return tolerance * (1.0 - gamma);
}

inline double backup(const TabularMdp& mdp, int s, int a, const ValueFunction& v) {
    double q = 0.0;
    for (const Outcome& o : mdp.row(s, a))
        q += o.prob * (mdp.rewards[o.next] + mdp.gamma * v[o.next]);
    return q;
}

}  // namespace detail

/**
 * Bellman-optimal values via synchronous (Jacobi) value iteration.
 *
 * Terminal states are pinned at V = 0; their entry reward is paid by the
 * predecessor's backup. Throws ConvergenceError when max_iterations sweeps
 * do not reach the accuracy target, ModelError on an invalid model.
 */
inline Solution value_iteration(const TabularMdp& mdp, const SolveOptions& opt = {}) {
    mdp.validate();
    if (!(opt.tolerance > 0.0)) throw ModelError("tolerance must be positive");
    const int ns = mdp.n_states();
    const int na = mdp.n_actions();
    const double target = detail::sweep_target(opt.tolerance, mdp.gamma);

    Solution sol;
    sol.value.assign(ns, 0.0);
    sol.q = QFunction::undefined(ns, na);
    ValueFunction next(ns, 0.0);

    double residual = 0.0;
    int iter = 0;
    for (; iter < opt.max_iterations; ++iter) {
        residual = 0.0;
        for (int s = 0; s < ns; ++s) {
            if (mdp.is_terminal(s)) {
                next[s] = 0.0;
                continue;
            }
            double best = kNegInf;
            for (int a = 0; a < na; ++a) {
                if (mdp.row(s, a).empty()) continue;
                best = std::max(best, detail::backup(mdp, s, a, sol.value));
            }
            next[s] = best;
            residual = std::max(residual, std::abs(next[s] - sol.value[s]));
        }
        sol.value.swap(next);
        if (residual <= target) {
            ++iter;
            break;
        }
    }
    if (residual > target) throw ConvergenceError(residual, iter);

    for (int s = 0; s < ns; ++s) {
        if (mdp.is_terminal(s)) continue;
        for (int a = 0; a < na; ++a)
            if (!mdp.row(s, a).empty()) sol.q.at(s, a) = detail::backup(mdp, s, a, sol.value);
    }
    sol.iterations = iter;
    sol.residual = residual;
    return sol;
}

/**
 * Deterministic greedy policy: for each state with defined Q entries, the
 * lowest-indexed action within kTieTol of the row maximum. States without
 * defined entries (terminals) map to -1.
 */
inline std::vector<int> extract_greedy_policy(const QFunction& q) {
    const int ns = q.n_states();
    std::vector<int> policy(ns, -1);
    for (int s = 0; s < ns; ++s) {
        double best = kNegInf;
        for (int a = 0; a < q.action_count; ++a)
            if (q.defined(s, a)) best = std::max(best, q.at(s, a));
        if (best == kNegInf) continue;
        for (int a = 0; a < q.action_count; ++a) {
            if (q.defined(s, a) && q.at(s, a) >= best - kTieTol) {
                policy[s] = a;
                break;
            }
        }
    }
    return policy;
}

/// Fixed point of V(s) = sum_a pi(a|s) Q(s,a) under entry-reward semantics.
inline ValueFunction policy_evaluation(const TabularMdp& mdp, const StochasticPolicy& policy,
                                       const SolveOptions& opt = {}) {
    mdp.validate();
    policy.validate_against(mdp);
    if (!(opt.tolerance > 0.0)) throw ModelError("tolerance must be positive");
    const int ns = mdp.n_states();
    const double target = detail::sweep_target(opt.tolerance, mdp.gamma);

    ValueFunction value(ns, 0.0), next(ns, 0.0);
    double residual = 0.0;
    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        residual = 0.0;
        for (int s = 0; s < ns; ++s) {
            if (mdp.is_terminal(s)) {
                next[s] = 0.0;
                continue;
            }
            double v = 0.0;
            for (int a = 0; a < mdp.n_actions(); ++a) {
                const double w = policy.rows[s][a];
                if (w > 0.0) v += w * detail::backup(mdp, s, a, value);
            }
            next[s] = v;
            residual = std::max(residual, std::abs(next[s] - value[s]));
        }
        value.swap(next);
        if (residual <= target) return value;
    }
    throw ConvergenceError(residual, opt.max_iterations);
}

}  // namespace entrap

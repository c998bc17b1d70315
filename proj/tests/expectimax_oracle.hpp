#pragma once

// Independent oracle for the defender planner: exhaustive expectimax
// enumeration over all defender action sequences and stochastic outcomes.
// Plain tree recursion, no memoization, no shared code with the compiled
// defender MDP or its solvers; the attacker model (Q*, behavior) is input
// data common to both routes.

#include <vector>

#include "entrap/attacker.hpp"

namespace test_helpers {

inline double oracle_defender_value(const entrap::AttackerModel& attacker,
                                    const std::vector<char>& trap_mask, int s, int a, int k);

inline double oracle_arrival(const entrap::AttackerModel& attacker,
                             const std::vector<char>& trap_mask, int s_next, int k_next) {
    const entrap::TabularMdp& m = attacker.mdp;
    if (trap_mask[s_next]) return 0.0;
    if (m.is_terminal(s_next)) return -m.rewards[s_next];
    double v = 0.0;
    for (int a2 = 0; a2 < m.n_actions(); ++a2) {
        const double w = attacker.behavior.rows[s_next][a2];
        if (w <= 0.0) continue;
        if (k_next == 0)
            v += w * -attacker.q_star.at(s_next, a2);
        else
            v += w * (-m.rewards[s_next] +
                      m.gamma * oracle_defender_value(attacker, trap_mask, s_next, a2, k_next));
    }
    return v;
}

inline double oracle_defender_value(const entrap::AttackerModel& attacker,
                                    const std::vector<char>& trap_mask, int s, int a, int k) {
    const entrap::TabularMdp& m = attacker.mdp;
    if (trap_mask[s]) return 0.0;
    if (m.is_terminal(s)) return -m.rewards[s];
    if (k == 0) return -attacker.q_star.at(s, a);
    const auto& row = m.row(s, a);
    double noop = 0.0;
    double best_force = -std::numeric_limits<double>::infinity();
    for (const entrap::Outcome& o : row) {
        const double arr = oracle_arrival(attacker, trap_mask, o.next, k - 1);
        noop += o.prob * arr;
        best_force = std::max(best_force, arr);
    }
    return std::max(noop, best_force);
}

/// Expectation over the attacker's first action, mirroring how the initial
/// defender state distribution is defined.
inline double oracle_initial_value(const entrap::AttackerModel& attacker,
                                   const std::vector<int>& traps, int K) {
    const entrap::TabularMdp& m = attacker.mdp;
    std::vector<char> trap_mask(m.n_states(), 0);
    for (int t : traps) trap_mask[t] = 1;
    const int s0 = m.initial_state;
    if (trap_mask[s0] || m.is_terminal(s0)) return 0.0;
    double v = 0.0;
    for (int a = 0; a < m.n_actions(); ++a) {
        const double w = attacker.behavior.rows[s0][a];
        if (w <= 0.0) continue;
        if (K == 0)
            v += w * -attacker.q_star.at(s0, a);
        else
            v += w * oracle_defender_value(attacker, trap_mask, s0, a, K);
    }
    return v;
}

}  // namespace test_helpers

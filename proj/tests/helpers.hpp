#pragma once

// Shared fixtures and generators for the test suites.

#include <cstdint>
#include <vector>

#include "entrap/mdp.hpp"
#include "entrap/rng.hpp"

namespace test_helpers {

using entrap::Outcome;
using entrap::RngStream;
using entrap::TabularMdp;

/// s0 -> s1 -> s2 (terminal, entry reward 1), deterministic single action,
/// gamma 0.9. Hand-unrolled optimum: V(s0) = 0.9, V(s1) = 1.0.
inline TabularMdp chain3() {
    TabularMdp m;
    m.state_labels = {"s0", "s1", "goal"};
    m.action_labels = {"advance"};
    m.resize_transitions();
    m.gamma = 0.9;
    m.initial_state = 0;
    m.rewards = {0.0, 0.0, 1.0};
    m.terminal = {0, 0, 1};
    m.row(0, 0) = {{1, 1.0}};
    m.row(1, 0) = {{2, 1.0}};
    return m;
}

/// chain3 plus an "abort" action from every non-terminal state into a dead
/// absorbing state with zero reward. Q gaps are hand-computable:
/// Q(s0) = [0.9, 0.0], Q(s1) = [1.0, 0.0].
inline TabularMdp chain_fork() {
    TabularMdp m;
    m.state_labels = {"s0", "s1", "goal", "dead"};
    m.action_labels = {"advance", "abort"};
    m.resize_transitions();
    m.gamma = 0.9;
    m.initial_state = 0;
    m.rewards = {0.0, 0.0, 1.0, 0.0};
    m.terminal = {0, 0, 1, 1};
    m.row(0, 0) = {{1, 1.0}};
    m.row(1, 0) = {{2, 1.0}};
    m.row(0, 1) = {{3, 1.0}};
    m.row(1, 1) = {{3, 1.0}};
    return m;
}

/// Deterministic corridor of `len` transitions from the start into a final
/// state, single action, all rewards zero by default.
inline TabularMdp corridor(int len, double gamma = 0.9) {
    TabularMdp m;
    for (int i = 0; i <= len; ++i) m.state_labels.push_back("c" + std::to_string(i));
    m.action_labels = {"go"};
    m.resize_transitions();
    m.gamma = gamma;
    m.initial_state = 0;
    for (int i = 0; i < len; ++i) m.row(i, 0) = {{i + 1, 1.0}};
    m.row(len, 0) = {{len, 1.0}};  // final state self-loops; mark terminal in callers as needed
    return m;
}

struct RandomMdpParams {
    int min_states = 2;
    int max_states = 4;
    int min_actions = 1;
    int max_actions = 2;
    double terminal_prob = 0.25;  // chance that one extra state is terminal
    double gamma_lo = 0.5;
    double gamma_hi = 0.95;
};

/// Random sparse MDP for property and oracle tests. State 0 is always the
/// non-terminal initial state; every row is normalized to sum to exactly 1.
inline TabularMdp random_mdp(RngStream& rng, const RandomMdpParams& p = {}) {
    TabularMdp m;
    const int ns = p.min_states + static_cast<int>(rng.raw() % (p.max_states - p.min_states + 1));
    const int na = p.min_actions + static_cast<int>(rng.raw() % (p.max_actions - p.min_actions + 1));
    for (int s = 0; s < ns; ++s) m.state_labels.push_back("s" + std::to_string(s));
    for (int a = 0; a < na; ++a) m.action_labels.push_back("a" + std::to_string(a));
    m.resize_transitions();
    m.gamma = p.gamma_lo + (p.gamma_hi - p.gamma_lo) * rng.uniform();
    m.initial_state = 0;
    for (int s = 0; s < ns; ++s) m.rewards[s] = rng.uniform();
    if (ns > 1 && rng.uniform() < p.terminal_prob)
        m.terminal[1 + static_cast<int>(rng.raw() % (ns - 1))] = 1;

    for (int s = 0; s < ns; ++s) {
        if (m.terminal[s]) continue;
        for (int a = 0; a < na; ++a) {
            // support: a random nonempty subset of states
            std::vector<int> support;
            for (int t = 0; t < ns; ++t)
                if (rng.uniform() < 0.5) support.push_back(t);
            if (support.empty()) support.push_back(static_cast<int>(rng.raw() % ns));
            std::vector<double> w(support.size());
            double sum = 0.0;
            for (double& x : w) {
                x = 0.05 + rng.uniform();
                sum += x;
            }
            double acc = 0.0;
            auto& row = m.row(s, a);
            for (std::size_t i = 0; i < support.size(); ++i) {
                double prob;
                if (i + 1 == support.size()) {
                    prob = 1.0 - acc;  // exact closure of the row sum
                } else {
                    prob = w[i] / sum;
                    acc += prob;
                }
                row.push_back({support[i], prob});
            }
        }
    }
    m.validate();
    return m;
}

/// Non-terminal, non-initial states drawn as a trap set (possibly empty).
inline std::vector<int> random_traps(const TabularMdp& m, RngStream& rng) {
    std::vector<int> traps;
    for (int s = 0; s < m.n_states(); ++s) {
        if (s == m.initial_state || m.is_terminal(s)) continue;
        if (rng.uniform() < 0.3) traps.push_back(s);
    }
    return traps;
}

}  // namespace test_helpers

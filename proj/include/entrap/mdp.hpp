#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "entrap/errors.hpp"

namespace entrap {

inline constexpr double kProbSumTol = 1e-9;   // transition/policy rows must sum to 1 within this
inline constexpr double kMinProb = 1e-12;     // smaller probabilities signal a generator bug
inline constexpr double kTieTol = 1e-12;      // argmax tie window
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// One sparse transition entry: successor state and its probability.
struct Outcome {
    int next = 0;
    double prob = 0.0;
};

/**
 * Explicit finite MDP with state-entry rewards.
 *
 * Rewards are granted upon ENTERING a state: the Bellman backup is
 * Q(s,a) = sum_{s'} T(s,a,s') * (R(s') + gamma * V(s')) with V = 0 at
 * terminal states (their entry reward is still paid by the predecessor).
 * An empty transition list marks the (state, action) pair invalid.
 */
class TabularMdp {
public:
    std::vector<std::string> state_labels;
    std::vector<std::string> action_labels;
    std::vector<std::vector<Outcome>> transitions;  // indexed state * n_actions + action
    std::vector<double> rewards;                    // per-state entry reward, >= 0
    std::vector<char> terminal;                     // per-state absorbing flag
    double gamma = 0.9;
    int initial_state = 0;

    int n_states() const { return static_cast<int>(state_labels.size()); }
    int n_actions() const { return static_cast<int>(action_labels.size()); }

    const std::vector<Outcome>& row(int s, int a) const {
        return transitions[static_cast<std::size_t>(s) * action_labels.size() + a];
    }
    std::vector<Outcome>& row(int s, int a) {
        return transitions[static_cast<std::size_t>(s) * action_labels.size() + a];
    }

    bool is_terminal(int s) const { return terminal[s] != 0; }

    /// A pair is valid when the state is non-terminal and the row is nonempty.
    bool valid(int s, int a) const { return !is_terminal(s) && !row(s, a).empty(); }

    /// Probability of reaching `next` by taking `a` in `s`; 0 when absent.
    double transition_prob(int s, int a, int next) const {
        for (const Outcome& o : row(s, a))
            if (o.next == next) return o.prob;
        return 0.0;
    }

    /// Allocates the transition table once labels are in place.
    void resize_transitions() {
        transitions.assign(state_labels.size() * action_labels.size(), {});
        if (rewards.size() != state_labels.size()) rewards.assign(state_labels.size(), 0.0);
        if (terminal.size() != state_labels.size()) terminal.assign(state_labels.size(), 0);
    }

    /// Checks every structural invariant; throws ModelError naming the first
    /// violation. `require_nonnegative_rewards` is on for attacker-side models.
    void validate(bool require_nonnegative_rewards = true) const {
        const int ns = n_states();
        const int na = n_actions();
        if (ns <= 0) throw ModelError("model has no states");
        if (na < 0) throw ModelError("negative action count");
        if (!(gamma >= 0.0 && gamma < 1.0))
            throw ModelError("gamma must lie in [0, 1), got " + std::to_string(gamma));
        if (initial_state < 0 || initial_state >= ns)
            throw ModelError("initial state out of range", initial_state);
        if (static_cast<int>(rewards.size()) != ns) throw ModelError("reward vector size mismatch");
        if (static_cast<int>(terminal.size()) != ns) throw ModelError("terminal vector size mismatch");
        if (transitions.size() != static_cast<std::size_t>(ns) * na)
            throw ModelError("transition table size mismatch");
        for (int s = 0; s < ns; ++s) {
            if (require_nonnegative_rewards && !(rewards[s] >= 0.0))
                throw ModelError("negative reward", s);
            if (!std::isfinite(rewards[s])) throw ModelError("non-finite reward", s);
            bool any_valid = false;
            for (int a = 0; a < na; ++a) {
                const auto& out = row(s, a);
                if (out.empty()) continue;
                double sum = 0.0;
                for (const Outcome& o : out) {
                    if (o.next < 0 || o.next >= ns)
                        throw ModelError("successor out of range", s, a);
                    if (!(o.prob >= kMinProb) || o.prob > 1.0 + kProbSumTol)
                        throw ModelError("transition probability outside (1e-12, 1]", s, a);
                    sum += o.prob;
                }
                if (std::abs(sum - 1.0) > kProbSumTol)
                    throw ModelError("transition row sums to " + std::to_string(sum), s, a);
                any_valid = true;
            }
            if (!any_valid && !terminal[s])
                throw ModelError("non-terminal state has no valid action", s);
        }
    }
};

/// Per-state optimal (or policy) values.
using ValueFunction = std::vector<double>;

/// Per-(state, action) values; NaN marks invalid pairs.
struct QFunction {
    int action_count = 0;
    std::vector<double> data;

    int n_states() const {
        return action_count == 0 ? 0 : static_cast<int>(data.size()) / action_count;
    }
    double at(int s, int a) const {
        return data[static_cast<std::size_t>(s) * action_count + a];
    }
    double& at(int s, int a) {
        return data[static_cast<std::size_t>(s) * action_count + a];
    }
    bool defined(int s, int a) const { return !std::isnan(at(s, a)); }

    static QFunction undefined(int n_states, int n_actions) {
        QFunction q;
        q.action_count = n_actions;
        q.data.assign(static_cast<std::size_t>(n_states) * n_actions,
                      std::numeric_limits<double>::quiet_NaN());
        return q;
    }
};

/// Per-state probability distribution over actions. Terminal states carry an
/// empty row; elsewhere the row has one entry per action (zero on invalid
/// pairs) and sums to 1.
struct StochasticPolicy {
    std::vector<std::vector<double>> rows;

    int n_states() const { return static_cast<int>(rows.size()); }

    void validate_against(const TabularMdp& mdp) const {
        if (n_states() != mdp.n_states()) throw PolicyError("policy/state count mismatch");
        for (int s = 0; s < mdp.n_states(); ++s) {
            const auto& r = rows[s];
            if (mdp.is_terminal(s)) continue;
            if (r.empty()) throw PolicyError("missing distribution for non-terminal state " + std::to_string(s));
            if (static_cast<int>(r.size()) != mdp.n_actions())
                throw PolicyError("policy row size mismatch at state " + std::to_string(s));
            double sum = 0.0;
            for (int a = 0; a < mdp.n_actions(); ++a) {
                if (r[a] < 0.0) throw PolicyError("negative policy probability at state " + std::to_string(s));
                if (r[a] > 0.0 && !mdp.valid(s, a))
                    throw PolicyError("policy puts mass on invalid action " + std::to_string(a) +
                                      " at state " + std::to_string(s));
                sum += r[a];
            }
            if (std::abs(sum - 1.0) > kProbSumTol)
                throw PolicyError("policy row at state " + std::to_string(s) + " sums to " + std::to_string(sum));
        }
    }

    /// Uniform distribution over valid actions of every non-terminal state.
    static StochasticPolicy uniform(const TabularMdp& mdp) {
        StochasticPolicy pi;
        pi.rows.resize(mdp.n_states());
        for (int s = 0; s < mdp.n_states(); ++s) {
            if (mdp.is_terminal(s)) continue;
            int count = 0;
            for (int a = 0; a < mdp.n_actions(); ++a)
                if (mdp.valid(s, a)) ++count;
            pi.rows[s].assign(mdp.n_actions(), 0.0);
            for (int a = 0; a < mdp.n_actions(); ++a)
                if (mdp.valid(s, a)) pi.rows[s][a] = 1.0 / count;
        }
        return pi;
    }
};

/// Alternating sequence s0, a0, s1, ..., s_n; length() = transition count.
struct Trajectory {
    std::vector<int> states;
    std::vector<int> actions;

    int length() const { return static_cast<int>(actions.size()); }

    void push(int action, int next_state) {
        actions.push_back(action);
        states.push_back(next_state);
    }
};

/**
 * Log-likelihood of a trajectory under a model: the sum of log transition
 * probabilities. Impossible transitions yield exactly -infinity; a
 * single-state trajectory has log-probability 0 (the recursion base case).
 */
inline double trajectory_log_probability(const TabularMdp& mdp, const Trajectory& tau) {
    if (tau.states.empty() || tau.states.size() != tau.actions.size() + 1)
        throw ModelError("malformed trajectory");
    double logp = 0.0;
    for (int i = 0; i < tau.length(); ++i) {
        const int s = tau.states[i];
        const int a = tau.actions[i];
        if (s < 0 || s >= mdp.n_states() || a < 0 || a >= mdp.n_actions())
            throw ModelError("trajectory index out of range", s, a);
        const double p = mdp.transition_prob(s, a, tau.states[i + 1]);
        if (p <= 0.0) return kNegInf;
        logp += std::log(p);
    }
    return logp;
}

/**
 * Boltzmann distribution p_i = exp(kappa*q_i) / sum_j exp(kappa*q_j),
 * computed with max-subtraction so large kappa*q never overflows.
 * kappa = 0 gives the uniform distribution.
 */
inline std::vector<double> softmax_distribution(std::span<const double> q_row, double kappa) {
    if (q_row.empty()) throw ModelError("softmax over an empty row");
    if (!(kappa >= 0.0)) throw ModelError("kappa must be >= 0");
    for (double q : q_row)
        if (!std::isfinite(q)) throw ModelError("non-finite entry in softmax row");
    const double qmax = *std::max_element(q_row.begin(), q_row.end());
    std::vector<double> p(q_row.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < q_row.size(); ++i) {
        p[i] = std::exp(kappa * (q_row[i] - qmax));
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return p;
}

}  // namespace entrap

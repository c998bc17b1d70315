#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "entrap/attacker.hpp"
#include "helpers.hpp"

using namespace entrap;
using test_helpers::chain3;
using test_helpers::chain_fork;
using test_helpers::random_mdp;

TEST_CASE("single absorbing state") {
    TabularMdp m;
    m.state_labels = {"only"};
    m.action_labels = {"noop"};
    m.resize_transitions();
    m.gamma = 0.9;
    m.terminal = {1};
    const AttackerModel model = build_attacker(m, 5.0);
    CHECK(model.v_star[0] == 0.0);
    CHECK(model.behavior.rows[0].empty());
}

TEST_CASE("kappa zero gives uniform behavior") {
    const AttackerModel model = build_attacker(chain_fork(), 0.0);
    CHECK_THAT(model.behavior.rows[0][0], Catch::Matchers::WithinAbs(0.5, 1e-12));
    CHECK_THAT(model.behavior.rows[0][1], Catch::Matchers::WithinAbs(0.5, 1e-12));
}

TEST_CASE("large kappa concentrates on the chain") {
    // hand-computed gap at s0: Q = [0.9, 0.0], so P(advance) = 1/(1+e^{-9})
    const AttackerModel model = build_attacker(chain_fork(), 10.0);
    CHECK(model.behavior.rows[0][0] >= 0.99);
    CHECK_THAT(model.behavior.rows[0][0],
               Catch::Matchers::WithinAbs(1.0 / (1.0 + std::exp(-10.0 * 0.9)), 1e-9));
    CHECK_THAT(model.behavior.rows[1][0],
               Catch::Matchers::WithinAbs(1.0 / (1.0 + std::exp(-10.0 * 1.0)), 1e-9));
}

TEST_CASE("behavior matches softmax of the Q rows") {
    RngStream rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const TabularMdp m = random_mdp(rng);
        const double kappa = 5.0 * rng.uniform();
        const AttackerModel model = build_attacker(m, kappa);
        for (int s = 0; s < m.n_states(); ++s) {
            if (m.is_terminal(s)) continue;
            std::vector<double> q;
            std::vector<int> idx;
            for (int a = 0; a < m.n_actions(); ++a)
                if (model.q_star.defined(s, a)) {
                    q.push_back(model.q_star.at(s, a));
                    idx.push_back(a);
                }
            const std::vector<double> p = softmax_distribution(q, kappa);
            double sum = 0.0;
            for (std::size_t i = 0; i < idx.size(); ++i) {
                CHECK_THAT(model.behavior.rows[s][idx[i]], Catch::Matchers::WithinAbs(p[i], 1e-12));
                sum += model.behavior.rows[s][idx[i]];
            }
            CHECK_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-9));
        }
    }
}

TEST_CASE("mass on the greedy action grows with kappa") {
    RngStream rng(8);
    for (int trial = 0; trial < 15; ++trial) {
        const TabularMdp m = random_mdp(rng);
        std::vector<double> previous;
        bool first = true;
        for (double kappa : {0.0, 1.0, 5.0, 20.0}) {
            const AttackerModel model = build_attacker(m, kappa);
            const std::vector<int> greedy = extract_greedy_policy(model.q_star);
            std::vector<double> mass(m.n_states(), 1.0);
            for (int s = 0; s < m.n_states(); ++s)
                if (greedy[s] >= 0) mass[s] = model.behavior.rows[s][greedy[s]];
            if (!first)
                for (int s = 0; s < m.n_states(); ++s) CHECK(mass[s] >= previous[s] - 1e-12);
            previous = std::move(mass);
            first = false;
        }
    }
}

TEST_CASE("baseline value of the chain") {
    TabularMdp zero = chain3();
    zero.rewards = {0.0, 0.0, 0.0};
    CHECK(attacker_baseline_value(build_attacker(zero, 5.0)) == 0.0);

    // kappa large: the noisy policy is indistinguishable from optimal
    const AttackerModel sharp = build_attacker(chain_fork(), 500.0);
    CHECK_THAT(attacker_baseline_value(sharp), Catch::Matchers::WithinAbs(0.9, 1e-6));
}

TEST_CASE("baseline never beats the optimal value") {
    RngStream rng(12);
    for (int trial = 0; trial < 25; ++trial) {
        const TabularMdp m = random_mdp(rng);
        const SolveOptions opt{1e-8, 200000};
        for (double kappa : {0.0, 2.0, 50.0}) {
            const AttackerModel model = build_attacker(m, kappa, opt);
            CHECK(attacker_baseline_value(model, opt) <=
                  model.v_star[m.initial_state] + 2 * opt.tolerance);
        }
    }
}

TEST_CASE("kappa zero baseline equals the uniform-policy value") {
    RngStream rng(13);
    for (int trial = 0; trial < 15; ++trial) {
        const TabularMdp m = random_mdp(rng);
        const AttackerModel model = build_attacker(m, 0.0);
        const ValueFunction v = policy_evaluation(m, StochasticPolicy::uniform(m));
        CHECK_THAT(attacker_baseline_value(model),
                   Catch::Matchers::WithinAbs(v[m.initial_state], 1e-6));
    }
}

TEST_CASE("kappa to infinity recovers the optimal value") {
    RngStream rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const TabularMdp m = random_mdp(rng);
        const AttackerModel model = build_attacker(m, 1e6);
        CHECK_THAT(attacker_baseline_value(model),
                   Catch::Matchers::WithinAbs(model.v_star[m.initial_state], 1e-4));
    }
}

TEST_CASE("action sampling") {
    const AttackerModel model = build_attacker(chain3(), 5.0);
    SECTION("single valid action is forced") {
        RngStream rng(1);
        for (int i = 0; i < 10; ++i) CHECK(sample_attacker_action(model, 0, rng) == 0);
    }
    SECTION("terminal states refuse to sample") {
        RngStream rng(1);
        CHECK_THROWS_AS(sample_attacker_action(model, 2, rng), ModelError);
    }
}

TEST_CASE("sampling frequencies match the distribution") {
    // behavior [0.9, 0.1] via the two-point softmax identity
    TabularMdp m = chain_fork();
    const AttackerModel model = build_attacker(m, std::log(9.0) / 0.9);
    const double p0 = model.behavior.rows[0][0];
    REQUIRE_THAT(p0, Catch::Matchers::WithinAbs(0.9, 1e-9));
    RngStream rng(42);
    int hits = 0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i)
        if (sample_attacker_action(model, 0, rng) == 0) ++hits;
    CHECK_THAT(hits / static_cast<double>(draws), Catch::Matchers::WithinAbs(0.9, 0.01));
}

TEST_CASE("sampling is reproducible for a fixed seed") {
    const AttackerModel model = build_attacker(chain_fork(), 2.0);
    std::vector<int> first, second;
    {
        RngStream rng(7);
        for (int i = 0; i < 100; ++i) first.push_back(sample_attacker_action(model, 0, rng));
    }
    {
        RngStream rng(7);
        for (int i = 0; i < 100; ++i) second.push_back(sample_attacker_action(model, 0, rng));
    }
    CHECK(first == second);
}

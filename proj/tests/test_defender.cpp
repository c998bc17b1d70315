#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "entrap/defender.hpp"
#include "expectimax_oracle.hpp"
#include "helpers.hpp"

using namespace entrap;
using test_helpers::chain_fork;
using test_helpers::corridor;
using test_helpers::oracle_initial_value;
using test_helpers::random_mdp;
using test_helpers::random_traps;

TEST_CASE("enumerable state count before pruning") {
    CHECK(DefenderMdp::enumerable_state_count(3, 2, 2) == 18);
    CHECK(DefenderMdp::enumerable_state_count(16, 4, 15) == 16 * 4 * 16);
}

TEST_CASE("compiled transition rows sum to one") {
    RngStream rng(301);
    for (int trial = 0; trial < 30; ++trial) {
        const TabularMdp m = random_mdp(rng);
        const AttackerModel attacker = build_attacker(m, 3.0);
        const std::vector<int> traps = random_traps(m, rng);
        const DefenderMdp d = compile_defender_mdp(attacker, traps, 3);
        for (int id = 0; id < d.n_states(); ++id) {
            for (const auto& row : d.rows[id]) {
                double sum = 0.0;
                for (const Outcome& o : row) sum += o.prob;
                CHECK_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-9));
            }
        }
    }
}

TEST_CASE("valid defender actions are noop plus the believed support") {
    TabularMdp m = chain_fork();
    m.row(0, 0) = {{1, 0.6}, {3, 0.4}};  // support {s1, dead}
    const AttackerModel attacker = build_attacker(m, 2.0);
    const DefenderMdp d = compile_defender_mdp(attacker, {1}, 2);
    const int id = d.id_of(0, 0, 2);
    REQUIRE(id >= 0);
    REQUIRE(d.actions[id].size() == 3);
    CHECK(d.actions[id][0].kind == DefenderActionKind::noop);
    CHECK(d.actions[id][1] == DefenderAction{DefenderActionKind::select_outcome, 1});
    CHECK(d.actions[id][2] == DefenderAction{DefenderActionKind::select_outcome, 3});
}

TEST_CASE("initial state in the trap set yields value zero") {
    TabularMdp m = chain_fork();
    const AttackerModel attacker = build_attacker(m, 2.0);
    const DefenderMdp d = compile_defender_mdp(attacker, {0}, 3);
    CHECK(d.degenerate_initial);
    const DefenderSolution sol = solve_defender(d);
    CHECK(sol.initial_value == 0.0);
}

TEST_CASE("exhausted-budget layer equals minus Q*") {
    RngStream rng(302);
    for (int trial = 0; trial < 20; ++trial) {
        const TabularMdp m = random_mdp(rng);
        const AttackerModel attacker = build_attacker(m, 4.0);
        const std::vector<int> traps = random_traps(m, rng);
        const DefenderMdp d = compile_defender_mdp(attacker, traps, 3, /*prune=*/false);
        const DefenderSolution sol = solve_defender(d);
        CHECK(sol.vi_induction_gap <= 10.0 * 1e-6);  // the two solve routes agree
        for (int s = 0; s < m.n_states(); ++s) {
            if (d.is_trap(s) || m.is_terminal(s)) continue;
            for (int a = 0; a < m.n_actions(); ++a) {
                if (!m.valid(s, a)) continue;
                const int id = d.id_of(s, a, 0);
                REQUIRE(id >= 0);
                CHECK(sol.values[id] == -attacker.q_star.at(s, a));  // set, not iterated
            }
        }
    }
}

TEST_CASE("trap-bearing triples are exactly zero and values never positive") {
    RngStream rng(303);
    for (int trial = 0; trial < 20; ++trial) {
        const TabularMdp m = random_mdp(rng);
        const AttackerModel attacker = build_attacker(m, 4.0);
        const std::vector<int> traps = random_traps(m, rng);
        const DefenderMdp d = compile_defender_mdp(attacker, traps, 3, /*prune=*/false);
        const DefenderSolution sol = solve_defender(d);
        for (int id = 0; id < d.n_states(); ++id) {
            CHECK(sol.values[id] <= 1e-12);
            if (d.is_trap(d.states[id].attacker_state)) CHECK(sol.values[id] == 0.0);
        }
        for (int t : traps)
            for (int k = 0; k <= 3; ++k)
                CHECK(defender_value_at(d, sol, t, 0, k).value() == 0.0);
    }
}

TEST_CASE("solver matches exhaustive expectimax enumeration") {
    RngStream rng(304);
    for (int trial = 0; trial < 200; ++trial) {
        const TabularMdp m = random_mdp(rng);  // |S| <= 4, |A| <= 2
        const double kappa = (trial % 3) * 2.5;
        const AttackerModel attacker = build_attacker(m, kappa, {1e-9, 200000});
        const std::vector<int> traps = random_traps(m, rng);
        const int K = 1 + static_cast<int>(rng.raw() % 3);
        const DefenderMdp d = compile_defender_mdp(attacker, traps, K);
        const DefenderSolution sol = solve_defender(d, {1e-9, 200000});
        const double expected = oracle_initial_value(attacker, traps, K);
        CHECK_THAT(sol.initial_value, Catch::Matchers::WithinAbs(expected, 1e-6));
    }
}

TEST_CASE("optimal defender dominates never intervening") {
    RngStream rng(305);
    for (int trial = 0; trial < 40; ++trial) {
        const TabularMdp m = random_mdp(rng);
        const AttackerModel attacker = build_attacker(m, 3.0);
        const std::vector<int> traps = random_traps(m, rng);
        const DefenderMdp d = compile_defender_mdp(attacker, traps, 4);
        const SolveOptions opt{1e-8, 200000};
        const DefenderSolution sol = solve_defender(d, opt);
        const std::vector<double> noop_values =
            evaluate_defender_policy(d, [](int) { return 0; });  // action 0 is always noop
        for (int id = 0; id < d.n_states(); ++id)
            CHECK(sol.values[id] >= noop_values[id] - 2 * opt.tolerance);
    }
}

TEST_CASE("pruned and unpruned solves agree on reachable triples") {
    RngStream rng(306);
    for (int trial = 0; trial < 25; ++trial) {
        const TabularMdp m = random_mdp(rng);
        const AttackerModel attacker = build_attacker(m, 2.0);
        const std::vector<int> traps = random_traps(m, rng);
        const DefenderMdp pruned = compile_defender_mdp(attacker, traps, 3, true);
        const DefenderMdp full = compile_defender_mdp(attacker, traps, 3, false);
        CHECK(full.n_states() >= pruned.n_states());
        const DefenderSolution psol = solve_defender(pruned);
        const DefenderSolution fsol = solve_defender(full);
        CHECK_THAT(psol.initial_value, Catch::Matchers::WithinAbs(fsol.initial_value, 1e-9));
        for (int id = 0; id < pruned.n_states(); ++id) {
            const DefenderState& ds = pruned.states[id];
            const int fid = full.id_of(ds.attacker_state, ds.attacker_action, ds.budget);
            REQUIRE(fid >= 0);
            CHECK_THAT(psol.values[id], Catch::Matchers::WithinAbs(fsol.values[fid], 1e-9));
        }
    }
}

TEST_CASE("empty trap set is allowed and flagged") {
    const AttackerModel attacker = build_attacker(chain_fork(), 2.0);
    const DefenderMdp d = compile_defender_mdp(attacker, {}, 2);
    CHECK(d.empty_trap_set);
    const DefenderSolution sol = solve_defender(d);
    CHECK(sol.initial_value <= 0.0);
}

TEST_CASE("invalid traps are rejected") {
    const AttackerModel attacker = build_attacker(chain_fork(), 2.0);
    CHECK_THROWS_AS(compile_defender_mdp(attacker, {99}, 2), ModelError);
    CHECK_THROWS_AS(compile_defender_mdp(attacker, {2}, 2), ModelError);  // believed-terminal
}

TEST_CASE("zero-budget compile degenerates to the Q* expectation") {
    const AttackerModel attacker = build_attacker(chain_fork(), 2.0);
    const DefenderMdp d = compile_defender_mdp(attacker, {1}, 0);
    const DefenderSolution sol = solve_defender(d);
    double expected = 0.0;
    for (int a = 0; a < 2; ++a)
        expected += attacker.behavior.rows[0][a] * -attacker.q_star.at(0, a);
    CHECK_THAT(sol.initial_value, Catch::Matchers::WithinAbs(expected, 1e-12));
}

TEST_CASE("corridor into a trap is worth exactly zero") {
    // deterministic zero-reward corridor ending in a trap: the defender's
    // optimal value and the realized return are both 0
    TabularMdp m = corridor(3, 0.9);
    const AttackerModel attacker = build_attacker(m, 5.0);
    const DefenderMdp d = compile_defender_mdp(attacker, {3}, 5);
    const DefenderSolution sol = solve_defender(d);
    CHECK(sol.initial_value == 0.0);
}

TEST_CASE("defender value accessor covers pruned closed forms") {
    const AttackerModel attacker = build_attacker(chain_fork(), 2.0);
    const DefenderMdp d = compile_defender_mdp(attacker, {1}, 2, true);
    const DefenderSolution sol = solve_defender(d);
    CHECK(defender_value_at(d, sol, 1, 0, 2).value() == 0.0);        // trap
    CHECK(defender_value_at(d, sol, 2, -1, 1).value() == -1.0);      // believed-terminal goal
    CHECK(defender_value_at(d, sol, 0, 1, 0).value() ==
          -attacker.q_star.at(0, 1));                                // closed-form layer 0
}

#include <catch2/catch_amalgamated.hpp>

#include "entrap/config.hpp"
#include "entrap/entrap.hpp"
#include "helpers.hpp"

using namespace entrap;

TEST_CASE("mdp json round-trip is lossless") {
    RngStream rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const TabularMdp m = test_helpers::random_mdp(rng);
        const json j = mdp_to_json(m);
        const TabularMdp back = mdp_from_json(j);
        CHECK(mdp_to_json(back).dump() == j.dump());
    }
}

TEST_CASE("mdp loader reports the first violation with indices") {
    const TabularMdp m = test_helpers::chain3();
    json j = mdp_to_json(m);

    SECTION("bad row sum") {
        j["transitions"][0]["prob"] = 0.5;
        try {
            mdp_from_json(j);
            FAIL("expected ModelError");
        } catch (const ModelError& e) {
            CHECK(e.state_index == 0);
            CHECK(e.action_index == 0);
        }
    }
    SECTION("successor out of range") {
        j["transitions"][0]["successor"] = 12;
        CHECK_THROWS_AS(mdp_from_json(j), ModelError);
    }
    SECTION("negative reward") {
        j["rewards"][1] = -1.0;
        CHECK_THROWS_AS(mdp_from_json(j), ModelError);
    }
    SECTION("gamma out of range") {
        j["gamma"] = 1.0;
        CHECK_THROWS_AS(mdp_from_json(j), ModelError);
    }
    SECTION("missing field") {
        j.erase("rewards");
        CHECK_THROWS_AS(mdp_from_json(j), IoError);
    }
}

TEST_CASE("instance json round-trip") {
    const DomainInstance inst = generate_gridworld(4, 0.5, 2, 7, 101);
    const json j = instance_to_json(inst);
    const DomainInstance back = instance_from_json(j);
    CHECK(instance_to_json(back).dump() == j.dump());
    CHECK(instance_fingerprint(back) == instance_fingerprint(inst));

    json corrupted = j;
    corrupted["traps"] = {inst.believed.initial_state + 1000};
    CHECK_THROWS_AS(instance_from_json(corrupted), ModelError);
}

TEST_CASE("fingerprints differ across instances") {
    const DomainInstance a = generate_gridworld(4, 0.5, 2, 7, 101);
    const DomainInstance b = generate_gridworld(4, 0.5, 2, 7, 102);
    CHECK(instance_fingerprint(a) != instance_fingerprint(b));
}

TEST_CASE("policy file round-trip preserves the decision table") {
    const DomainInstance inst = generate_gridworld(4, 0.5, 2, 7, 101);
    const AttackerModel attacker = build_attacker(inst.believed, 5.0);
    const DefenderMdp d = compile_defender_mdp(attacker, inst.traps, 6);
    const DefenderSolution sol = solve_defender(d);
    const std::string fp = instance_fingerprint(inst);
    const json j = policy_to_json(d, sol, fp, attacker.kappa, attacker.solve_tolerance);
    const DefenderPolicyTable direct = make_policy_table(d, sol, fp, attacker.kappa,
                                                         attacker.solve_tolerance);
    const DefenderPolicyTable loaded = policy_table_from_json(j);
    CHECK(loaded.fingerprint == direct.fingerprint);
    CHECK(loaded.budget == direct.budget);
    CHECK(loaded.kappa == direct.kappa);
    REQUIRE(loaded.choice.size() == direct.choice.size());
    for (const auto& [key, act] : direct.choice) {
        const auto it = loaded.choice.find(key);
        REQUIRE(it != loaded.choice.end());
        CHECK(it->second == act);
    }
    // serialization itself is deterministic
    CHECK(policy_to_json(d, sol, fp, attacker.kappa, attacker.solve_tolerance).dump() == j.dump());
}

TEST_CASE("episode records serialize") {
    const DomainInstance inst = showroom_demo();
    const AttackerModel attacker = build_attacker(inst.believed, 5.0);
    RngStream rng(3);
    const EpisodeRecord rec = run_episode(inst, attacker, nullptr, 50, rng);
    const json j = episode_to_json(rec);
    CHECK(j.contains("states"));
    CHECK(j.contains("return"));
    CHECK(j["states"].size() == j["actions"].size() + 1);
}

TEST_CASE("config defaults reproduce the full sweep shape") {
    const ExperimentConfig cfg;
    CHECK(cfg.cap == 15);
    CHECK(cfg.episodes == 10000);
    CHECK(cfg.slip == 0.5);
    CHECK(cfg.trap_seeds.size() == 5);
    CHECK(cfg.grid_sizes == std::vector<int>{4, 6, 8, 9});
    CHECK(cfg.puddle_deltas == std::vector<double>{0.2, 0.3, 0.4, 0.5});
    CHECK(cfg.timeout_minutes == 30.0);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config round-trip through its text form") {
    ExperimentConfig cfg;
    cfg.kappa = 2.5;
    cfg.domains = {"puddle", "gridworld"};
    cfg.puddle_deltas = {0.4};
    cfg.trap_seeds = {9, 8};
    cfg.episodes = 123;
    cfg.write_traces = true;
    const ExperimentConfig back = parse_experiment_config(experiment_config_to_string(cfg));
    CHECK(back.kappa == cfg.kappa);
    CHECK(back.domains == cfg.domains);
    CHECK(back.puddle_deltas == cfg.puddle_deltas);
    CHECK(back.trap_seeds == cfg.trap_seeds);
    CHECK(back.episodes == cfg.episodes);
    CHECK(back.write_traces == cfg.write_traces);
}

TEST_CASE("config parser rejects junk by name") {
    CHECK_THROWS_WITH(parse_experiment_config("[bench]\nwibble = 3\n"),
                      Catch::Matchers::ContainsSubstring("bench.wibble"));
    CHECK_THROWS_AS(parse_experiment_config("[nope]\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config("[sim]\nepisodes = banana\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config("[sim]\nepisodes 12\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config("[bench]\ndomains = []\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config("[bench]\ndomains = [mars]\n"), ConfigError);
    CHECK_NOTHROW(parse_experiment_config("# comment only\n\n"));
}

TEST_CASE("config accepts comments and spacing") {
    const ExperimentConfig cfg = parse_experiment_config(
        "# sweep\n[attacker]\nkappa = 7.5   # sharp\n\n[bench]\n  domains = [ gridworld ]\n"
        "grid_sizes=[4,6]\n");
    CHECK(cfg.kappa == 7.5);
    CHECK(cfg.domains == std::vector<std::string>{"gridworld"});
    CHECK(cfg.grid_sizes == std::vector<int>{4, 6});
}

// Command-line front end: generate benchmark domains, compute intervention
// budgets, plan covert-defender policies, simulate episodes, and run the
// full benchmark sweep.
//
// Exit codes: 0 success, 2 usage/input error, 3 solver non-convergence,
// 4 state-space guard, 5 instance/policy fingerprint mismatch.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entrap/entrap.hpp"

namespace {

using namespace entrap;

int run_generate(const std::string& domain, int n, double slip, int traps, int rocks, double delta,
                 std::uint64_t seed, std::uint64_t trap_seed, bool no_doors,
                 bool fail_on_infeasible, const std::string& out_path) {
    DomainInstance inst;
    if (domain == "gridworld") {
        GridworldParams params;
        params.regenerate_on_infeasible = !fail_on_infeasible;
        inst = generate_gridworld(n, slip, traps, seed, trap_seed, params);
    } else if (domain == "four_rooms") {
        FourRoomsParams params;
        params.omit_doors = no_doors;
        inst = generate_four_rooms(n, slip, traps, seed, trap_seed, params);
    } else if (domain == "rock_sampling") {
        inst = generate_rock_sampling(n, slip, rocks, traps, seed, trap_seed);
    } else if (domain == "puddle") {
        inst = generate_puddle(delta, slip, traps, seed, trap_seed);
    } else if (domain == "showroom") {
        inst = showroom_demo();
    } else {
        throw DomainError("unknown domain: " + domain);
    }
    write_text_file(out_path, instance_to_json(inst).dump(2) + "\n");
    std::printf("%s: |S| = %d, |A| = %d, traps = %zu, goal_reachable = %s\n",
                inst.metadata.domain.c_str(), inst.believed.n_states(), inst.believed.n_actions(),
                inst.traps.size(), inst.metadata.goal_reachable ? "yes" : "no");
    std::printf("wrote %s (fingerprint %s)\n", out_path.c_str(),
                instance_fingerprint(inst).c_str());
    return 0;
}

int run_budget(const std::string& instance_path, int cap, bool planning_cap, double kappa,
               const std::string& out_path) {
    const DomainInstance inst = instance_from_json(load_json_file(instance_path));
    const BudgetResult result = compute_budget(inst.believed, cap);
    if (result.capped) {
        std::printf("budget search capped at %d\n", result.k);
    } else {
        std::printf("K = %d\n", result.k);
        std::printf("witness:");
        for (int i = 0; i < result.witness->length(); ++i)
            std::printf(" %s --%s-->",
                        inst.believed.state_labels[result.witness->states[i]].c_str(),
                        inst.believed.action_labels[result.witness->actions[i]].c_str());
        std::printf(" %s\n", inst.believed.state_labels[result.witness->states.back()].c_str());
    }
    std::printf("usable defender budget: %d\n", usable_defender_budget(result, cap));

    json out = {{"k", result.k},
                {"capped", result.capped},
                {"usable_budget", usable_defender_budget(result, cap)}};
    if (result.witness) {
        out["witness"] = {{"states", result.witness->states}, {"actions", result.witness->actions}};
    }
    if (planning_cap) {
        const AttackerModel attacker = build_attacker(inst.believed, kappa);
        const double steps = budget_cap_from_planning(attacker, inst.traps);
        std::printf("planning-derived cap: %.6f expected steps\n", steps);
        out["planning_cap"] = steps;
    }
    if (!out_path.empty()) write_text_file(out_path, out.dump(2) + "\n");
    return 0;
}

int run_plan(const std::string& instance_path, double kappa, double tolerance, int max_iterations,
             int budget_override, int cap, const std::string& traps_override, long long guard,
             const std::string& out_path) {
    using clock = std::chrono::steady_clock;
    const DomainInstance inst = instance_from_json(load_json_file(instance_path));

    std::vector<int> traps = inst.traps;
    if (traps_override == "none") {
        traps.clear();
    } else if (!traps_override.empty()) {
        traps.clear();
        std::stringstream ss(traps_override);
        std::string tok;
        while (std::getline(ss, tok, ',')) traps.push_back(std::stoi(tok));
    }

    const SolveOptions opt{tolerance, max_iterations};
    const auto t0 = clock::now();
    const AttackerModel attacker = build_attacker(inst.believed, kappa, opt);
    int K;
    BudgetResult budget{0, true, std::nullopt};
    if (budget_override >= 0) {
        K = budget_override;
    } else {
        budget = compute_budget(inst.believed, cap);
        K = usable_defender_budget(budget, cap);
    }
    if (DefenderMdp::enumerable_state_count(inst.believed.n_states(), inst.believed.n_actions(),
                                            K) > guard)
        throw StateSpaceError("defender state space would exceed the guard of " +
                              std::to_string(guard));
    const DefenderMdp dmdp = compile_defender_mdp(attacker, traps, K);
    const double construct_s = std::chrono::duration<double>(clock::now() - t0).count();

    const auto t1 = clock::now();
    const DefenderSolution sol = solve_defender(dmdp, opt);
    const double plan_s = std::chrono::duration<double>(clock::now() - t1).count();

    // construction identities on the solved states
    double layer0_err = 0.0;
    bool traps_zero = true;
    for (int id = 0; id < dmdp.n_states(); ++id) {
        const DefenderState& ds = dmdp.states[id];
        if (dmdp.is_trap(ds.attacker_state) && sol.values[id] != 0.0) traps_zero = false;
        if (!dmdp.is_trap(ds.attacker_state) && ds.budget == 0 && ds.attacker_action >= 0)
            layer0_err = std::max(layer0_err, std::abs(sol.values[id] +
                                                       attacker.q_star.at(ds.attacker_state,
                                                                          ds.attacker_action)));
    }

    const std::string fp = instance_fingerprint(inst);
    write_text_file(out_path, policy_to_json(dmdp, sol, fp, kappa, tolerance).dump() + "\n");

    std::printf("kappa = %g, budget K = %d%s\n", kappa, K,
                budget_override >= 0 ? " (override)" : (budget.capped ? " (capped)" : ""));
    if (dmdp.empty_trap_set) std::printf("empty trap set: pure value-suppression mode\n");
    std::printf("defender states: %d (of %lld enumerable)\n", dmdp.n_states(),
                DefenderMdp::enumerable_state_count(inst.believed.n_states(),
                                                    inst.believed.n_actions(), K));
    std::printf("defender_initial_value = %.10g\n", sol.initial_value);
    std::printf("construction: %.3fs, planning: %.3fs\n", construct_s, plan_s);
    std::printf("terminal-layer identity: max |V + Q*| = %.3g; trap states zero: %s\n", layer0_err,
                traps_zero ? "yes" : "NO");
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

int run_simulate(const std::string& instance_path, const std::string& policy_path, int episodes,
                 std::uint64_t seed, int horizon_override, double kappa, double tolerance,
                 const std::string& traces_path, const std::string& csv_path) {
    const DomainInstance inst = instance_from_json(load_json_file(instance_path));
    std::optional<DefenderPolicyTable> table;
    if (!policy_path.empty()) {
        table = policy_table_from_json(load_json_file(policy_path));
        if (table->fingerprint != instance_fingerprint(inst))
            throw FingerprintError("policy " + policy_path + " was planned for a different instance");
        kappa = table->kappa;
        tolerance = table->tolerance;
    }
    const SolveOptions opt{tolerance, 200000};
    const AttackerModel attacker = build_attacker(inst.believed, kappa, opt);
    const int horizon =
        horizon_override > 0 ? horizon_override : default_horizon(inst.truth.gamma, tolerance);

    const double analytic = attacker_baseline_value(attacker, opt);
    const MonteCarlo base = estimate_return(inst, attacker, nullptr, episodes, horizon, seed);
    std::printf("kappa = %g, episodes = %d, horizon = %d\n", kappa, episodes, horizon);
    std::printf("attacker baseline (analytic) = %.10g\n", analytic);
    std::printf("attacker baseline (monte carlo) = %.10g +/- %.3g\n", base.mean, base.stderr_);

    MonteCarlo defended;
    bool bound_ok = true;
    if (table) {
        defended = estimate_return(inst, attacker, &*table, episodes, horizon, seed + 1);
        bound_ok = defended.mean <= std::abs(table->initial_value) + 3.0 * defended.stderr_;
        std::printf("defender value (analytic) = %.10g\n", table->initial_value);
        std::printf("attacker under defense (monte carlo) = %.10g +/- %.3g\n", defended.mean,
                    defended.stderr_);
        std::printf("bound check: realized %.10g vs |V^D| %.10g + 3se -> %s\n", defended.mean,
                    std::abs(table->initial_value), bound_ok ? "ok" : "VIOLATED");
    }

    if (!traces_path.empty()) {
        std::string lines;
        for (int i = 0; i < std::min(episodes, 1000); ++i) {
            RngStream rng(derive_seed(seed + (table ? 1 : 0), static_cast<std::uint64_t>(i)));
            lines += episode_to_json(run_episode(inst, attacker, table ? &*table : nullptr, horizon,
                                                 rng, false))
                         .dump() +
                     "\n";
        }
        write_text_file(traces_path, lines);
        std::printf("wrote %s\n", traces_path.c_str());
    }
    if (!csv_path.empty()) {
        std::ostringstream csv;
        csv << "metric,mean,stderr\n";
        csv << "attacker_analytic," << analytic << ",0\n";
        csv << "attacker_mc," << base.mean << "," << base.stderr_ << "\n";
        if (table) {
            csv << "defender_value," << table->initial_value << ",0\n";
            csv << "defended_mc," << defended.mean << "," << defended.stderr_ << "\n";
        }
        write_text_file(csv_path, csv.str());
        std::printf("wrote %s\n", csv_path.c_str());
    }
    return bound_ok ? 0 : 0;  // violations are reported, not fatal
}

int run_bench(const std::string& config_path, const std::string& out_dir) {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = parse_experiment_config(read_text_file(config_path));
    cfg.validate();
    std::printf("benchmark sweep: kappa = %g, slip = %g, cap = %d, episodes = %d, seeds = %zu\n",
                cfg.kappa, cfg.slip, cfg.cap, cfg.episodes, cfg.trap_seeds.size());
    const BenchmarkReport report = run_benchmark(cfg);
    const std::string csv = benchmark_csv(report);
    std::fputs(csv.c_str(), stdout);

    std::string dir = !out_dir.empty() ? out_dir : cfg.out_dir;
    if (!dir.empty()) {
        std::filesystem::create_directories(dir);
        write_text_file(dir + "/metrics.csv", csv);
        write_text_file(dir + "/manifest.json", report.manifest.dump(2) + "\n");
        std::printf("wrote %s/metrics.csv and %s/manifest.json\n", dir.c_str(), dir.c_str());
    }
    for (const auto& warning : report.manifest["warnings"])
        std::printf("warning: %s\n", warning.get<std::string>().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"attacker entrapment planning toolkit"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "generate a benchmark domain instance");
    std::string gen_domain, gen_out = "instance.json";
    int gen_n = 4, gen_traps = 2, gen_rocks = 3;
    double gen_slip = 0.5, gen_delta = 0.5;
    std::uint64_t gen_seed = 7, gen_trap_seed = 101;
    bool gen_no_doors = false, gen_fail_infeasible = false;
    gen->add_option("domain", gen_domain,
                    "gridworld | four_rooms | rock_sampling | puddle | showroom")
        ->required();
    gen->add_option("--n", gen_n, "grid side length");
    gen->add_option("--slip", gen_slip, "slip probability");
    gen->add_option("--traps", gen_traps, "number of trap cells");
    gen->add_option("--rocks", gen_rocks, "number of rocks (rock_sampling)");
    gen->add_option("--delta", gen_delta, "step size (puddle)");
    gen->add_option("--seed", gen_seed, "layout seed");
    gen->add_option("--trap-seed", gen_trap_seed, "trap placement seed");
    gen->add_flag("--no-doors", gen_no_doors, "seal the four-rooms doors");
    gen->add_flag("--fail-on-infeasible", gen_fail_infeasible,
                  "report an infeasible layout instead of regenerating");
    gen->add_option("--out", gen_out, "output instance file");

    // budget
    auto* bud = app.add_subcommand("budget", "compute the safe intervention budget");
    std::string bud_instance, bud_out;
    int bud_cap = 15;
    bool bud_planning = false;
    double bud_kappa = 5.0;
    bud->add_option("--instance", bud_instance, "instance file")->required();
    bud->add_option("--cap", bud_cap, "search cap (default 15)");
    bud->add_flag("--planning-cap", bud_planning, "also compute the planning-derived cap");
    bud->add_option("--kappa", bud_kappa, "rationality for the planning-derived cap");
    bud->add_option("--out", bud_out, "machine-readable result file");

    // plan
    auto* plan = app.add_subcommand("plan", "compile and solve the defender problem");
    std::string plan_instance, plan_out = "policy.json", plan_traps;
    double plan_kappa = 5.0, plan_tolerance = 1e-6;
    int plan_budget = -1, plan_cap = 15, plan_max_iterations = 200000;
    long long plan_guard = 20000000;
    plan->add_option("--instance", plan_instance, "instance file")->required();
    plan->add_option("--kappa", plan_kappa, "attacker rationality");
    plan->add_option("--tolerance", plan_tolerance, "solver tolerance");
    plan->add_option("--max-iterations", plan_max_iterations, "solver sweep cap");
    plan->add_option("--budget", plan_budget, "budget override (skips the search)");
    plan->add_option("--cap", plan_cap, "budget search cap");
    plan->add_option("--traps", plan_traps, "override trap list, or 'none'");
    plan->add_option("--guard", plan_guard, "defender state-space guard");
    plan->add_option("--out", plan_out, "output policy file");

    // simulate
    auto* sim = app.add_subcommand("simulate", "estimate attacker returns by simulation");
    std::string sim_instance, sim_policy, sim_traces, sim_csv;
    int sim_episodes = 10000, sim_horizon = 0;
    std::uint64_t sim_seed = 42;
    double sim_kappa = 5.0, sim_tolerance = 1e-6;
    sim->add_option("--instance", sim_instance, "instance file")->required();
    sim->add_option("--policy", sim_policy, "defender policy file (optional)");
    sim->add_option("--episodes", sim_episodes, "episode count");
    sim->add_option("--seed", sim_seed, "master seed");
    sim->add_option("--horizon", sim_horizon, "horizon override");
    sim->add_option("--kappa", sim_kappa, "attacker rationality (no-policy runs)");
    sim->add_option("--tolerance", sim_tolerance, "solver tolerance (no-policy runs)");
    sim->add_option("--traces", sim_traces, "write JSON-lines episode traces here");
    sim->add_option("--csv", sim_csv, "write summary metrics here");

    // bench
    auto* bench = app.add_subcommand("bench", "run the benchmark sweep");
    std::string bench_config, bench_out_dir, bench_emit;
    bench->add_option("--config", bench_config, "experiment config file");
    bench->add_option("--out-dir", bench_out_dir, "directory for metrics.csv and manifest.json");
    bench->add_option("--emit-default-config", bench_emit,
                      "write the default desk-scale config and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed())
            return run_generate(gen_domain, gen_n, gen_slip, gen_traps, gen_rocks, gen_delta,
                                gen_seed, gen_trap_seed, gen_no_doors, gen_fail_infeasible, gen_out);
        if (bud->parsed()) return run_budget(bud_instance, bud_cap, bud_planning, bud_kappa, bud_out);
        if (plan->parsed())
            return run_plan(plan_instance, plan_kappa, plan_tolerance, plan_max_iterations,
                            plan_budget, plan_cap, plan_traps, plan_guard, plan_out);
        if (sim->parsed())
            return run_simulate(sim_instance, sim_policy, sim_episodes, sim_seed, sim_horizon,
                                sim_kappa, sim_tolerance, sim_traces, sim_csv);
        if (bench->parsed()) {
            if (!bench_emit.empty()) {
                write_text_file(bench_emit, experiment_config_to_string(ExperimentConfig{}));
                std::printf("wrote %s\n", bench_emit.c_str());
                return 0;
            }
            return run_bench(bench_config, bench_out_dir);
        }
    } catch (const ConvergenceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const StateSpaceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const FingerprintError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 5;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}

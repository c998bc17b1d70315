#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <cstdint>
#include <future>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include "entrap/attacker.hpp"
#include "entrap/budget.hpp"
#include "entrap/config.hpp"
#include "entrap/defender.hpp"
#include "entrap/domains.hpp"
#include "entrap/io.hpp"
#include "entrap/rng.hpp"

namespace entrap {

/// Horizon at which the discounted tail drops below the solver tolerance.
inline int default_horizon(double gamma, double tolerance = 1e-6) {
    if (gamma <= 0.0) return 1;
    return std::max(1, static_cast<int>(std::ceil(std::log(tolerance) / std::log(gamma))));
}

/**
 * One simulated attacker-vs-defender episode on the ground-truth dynamics.
 * defender_choices holds one entry per transition: -2 no defender decision
 * (no policy or budget exhausted), -1 noop, >= 0 the forced successor state.
 */
struct EpisodeRecord {
    Trajectory trajectory;
    std::vector<int> defender_choices;
    double attacker_return = 0.0;
    bool trapped = false;
    std::optional<int> steps_to_trap;
    std::optional<int> budget_exhausted_at;
};

namespace detail {

inline int sample_outcome(const std::vector<Outcome>& row, RngStream& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (const Outcome& o : row) {
        acc += o.prob;
        if (u < acc) return o.next;
    }
    return row.back().next;
}

inline std::vector<char> trap_mask_of(const DomainInstance& inst) {
    std::vector<char> mask(inst.truth.n_states(), 0);
    for (int t : inst.traps) mask[t] = 1;
    return mask;
}

}  // namespace detail

/**
 * Runs one episode. Each step: the attacker draws an action from its frozen
 * noisy-rational behavior; while a defender policy is present and budget
 * remains, the defender either noops (the environment resolves the action
 * through the ground-truth row) or forces one believed-support successor.
 * Budget decrements every defended step. After exhaustion the attacker
 * continues under truth dynamics alone. Rewards accrue on state entry with
 * discount gamma^t for the t-th transition.
 *
 * With verify_fingerprint set, a policy planned for a different instance
 * raises FingerprintError; batch callers check once and skip the per-episode
 * cost.
 */
inline EpisodeRecord run_episode(const DomainInstance& inst, const AttackerModel& attacker,
                                 const DefenderPolicyTable* defense, int horizon, RngStream& rng,
                                 bool verify_fingerprint = true) {
    if (defense && verify_fingerprint && defense->fingerprint != instance_fingerprint(inst))
        throw FingerprintError("policy was planned for a different instance");
    const TabularMdp& truth = inst.truth;
    const std::vector<char> trap_mask = detail::trap_mask_of(inst);

    EpisodeRecord rec;
    int s = truth.initial_state;
    rec.trajectory.states.push_back(s);
    if (trap_mask[s]) {
        rec.trapped = true;
        rec.steps_to_trap = 0;
    }
    int k = defense ? defense->budget : 0;
    if (defense && k == 0) rec.budget_exhausted_at = 0;
    double ret = 0.0, disc = 1.0;

    for (int t = 0; t < horizon; ++t) {
        if (truth.is_terminal(s)) break;
        const int a = sample_attacker_action(attacker, s, rng);
        int next;
        int choice = -2;
        if (defense && k > 0) {
            const auto act = defense->lookup(s, a, k);
            if (!act)
                throw Error("defender policy has no entry for reachable triple (" +
                            std::to_string(s) + ", " + std::to_string(a) + ", " +
                            std::to_string(k) + ")");
            if (act->kind == DefenderActionKind::noop) {
                choice = -1;
                next = detail::sample_outcome(truth.row(s, a), rng);
            } else {
                choice = act->target;
                next = act->target;
            }
            if (--k == 0) rec.budget_exhausted_at = t;
        } else {
            next = detail::sample_outcome(truth.row(s, a), rng);
        }
        rec.trajectory.push(a, next);
        rec.defender_choices.push_back(choice);
        ret += disc * truth.rewards[next];
        disc *= truth.gamma;
        if (trap_mask[next] && !rec.trapped) {
            rec.trapped = true;
            rec.steps_to_trap = t + 1;
        }
        s = next;
    }
    rec.attacker_return = ret;
    return rec;
}

struct MonteCarlo {
    double mean = 0.0;
    double stderr_ = 0.0;
    int episodes = 0;
};

/**
 * Sample mean and standard error of the attacker's realized discounted
 * return over independent per-episode streams split from the master seed;
 * episode i is reproducible in isolation.
 */
inline MonteCarlo estimate_return(const DomainInstance& inst, const AttackerModel& attacker,
                                  const DefenderPolicyTable* defense, int episodes, int horizon,
                                  std::uint64_t seed) {
    if (episodes < 1) throw ModelError("episodes must be >= 1");
    if (defense && defense->fingerprint != instance_fingerprint(inst))
        throw FingerprintError("policy was planned for a different instance");
    double mean = 0.0, m2 = 0.0;
    for (int i = 0; i < episodes; ++i) {
        RngStream rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        const EpisodeRecord rec = run_episode(inst, attacker, defense, horizon, rng, false);
        const double x = rec.attacker_return;
        const double d = x - mean;
        mean += d / (i + 1);
        m2 += d * (x - mean);
    }
    MonteCarlo mc;
    mc.mean = mean;
    mc.episodes = episodes;
    mc.stderr_ = episodes > 1 ? std::sqrt(m2 / (episodes - 1) / episodes) : 0.0;
    return mc;
}

/// Monte-Carlo check of the planning-time guarantee: the attacker's realized
/// value under the defender policy should not exceed |V^D| at the initial
/// distribution. Violations are reported, never thrown.
struct BoundReport {
    double bound = 0.0;
    MonteCarlo realized;
    bool violated = false;
};

inline BoundReport verify_value_bound(const DomainInstance& inst, const AttackerModel& attacker,
                                      const DefenderMdp& dmdp, const DefenderSolution& sol,
                                      int episodes, std::uint64_t seed, int horizon = 0) {
    if (episodes < 1000) throw ModelError("bound verification needs at least 1000 episodes");
    const DefenderPolicyTable table =
        make_policy_table(dmdp, sol, instance_fingerprint(inst), attacker.kappa,
                          attacker.solve_tolerance);
    if (horizon <= 0) horizon = default_horizon(inst.truth.gamma);
    BoundReport report;
    report.bound = std::abs(sol.initial_value);
    report.realized = estimate_return(inst, attacker, &table, episodes, horizon, seed);
    report.violated = report.realized.mean > report.bound + 3.0 * report.realized.stderr_;
    return report;
}

inline json episode_to_json(const EpisodeRecord& rec) {
    json j;
    j["states"] = rec.trajectory.states;
    j["actions"] = rec.trajectory.actions;
    j["defender"] = rec.defender_choices;
    j["return"] = rec.attacker_return;
    j["trapped"] = rec.trapped;
    if (rec.steps_to_trap) j["steps_to_trap"] = *rec.steps_to_trap;
    if (rec.budget_exhausted_at) j["budget_exhausted_at"] = *rec.budget_exhausted_at;
    return j;
}

// ---------------------------------------------------------------------------
// benchmark sweep
// ---------------------------------------------------------------------------

/// One Table-style row: a single (family, trap seed) instance, or the
/// per-family aggregate (trap_seed_label = "avg").
struct BenchmarkRow {
    std::string domain;
    std::string instance_label;  // e.g. 4x4 or d0.40
    std::string trap_seed_label;
    std::uint64_t layout_seed = 0;
    double kappa = 0.0;
    double slip = 0.0;
    int n_traps = 0;
    int n_states = 0;
    long long n_defender_states = 0;
    int budget_k = 0;
    bool budget_capped = false;
    int budget_used = 0;
    bool goal_reachable = true;
    std::vector<int> traps;
    double attacker_analytic = 0.0;
    double attacker_mc_mean = 0.0;
    double attacker_mc_stderr = 0.0;
    double defender_value = 0.0;
    double defended_mc_mean = 0.0;
    double defended_mc_stderr = 0.0;
    bool bound_ok = true;
    int episodes = 0;
    std::string status = "ok";
    double construct_seconds = 0.0;
    double plan_seconds = 0.0;
};

struct BenchmarkReport {
    std::vector<BenchmarkRow> rows;  // instance rows followed by their aggregate
    json manifest;
};

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline BenchmarkRow run_benchmark_instance(const ExperimentConfig& cfg, const std::string& domain,
                                           int size, double delta, std::uint64_t trap_seed,
                                           const std::string& instance_label) {
    using clock = std::chrono::steady_clock;
    const auto started = clock::now();
    const auto elapsed_s = [&] {
        return std::chrono::duration<double>(clock::now() - started).count();
    };
    const double timeout_s = cfg.timeout_minutes * 60.0;

    BenchmarkRow row;
    row.domain = domain;
    row.instance_label = instance_label;
    row.trap_seed_label = std::to_string(trap_seed);
    row.layout_seed = cfg.layout_seed;
    row.kappa = cfg.kappa;
    row.slip = cfg.slip;
    row.n_traps = cfg.traps;
    row.episodes = cfg.episodes;
    try {
        const DomainInstance inst = generate_domain(domain, size, delta, cfg.slip, cfg.traps,
                                                    cfg.rocks, cfg.layout_seed, trap_seed);
        row.traps = inst.traps;
        row.n_states = inst.believed.n_states();
        row.goal_reachable = inst.metadata.goal_reachable;
        const SolveOptions opt{cfg.tolerance, 200000};

        const auto t0 = clock::now();
        const AttackerModel attacker = build_attacker(inst.believed, cfg.kappa, opt);
        const BudgetResult budget = compute_budget(inst.believed, cfg.cap);
        const int K = usable_defender_budget(budget, cfg.cap);
        const DefenderMdp dmdp = compile_defender_mdp(attacker, inst.traps, K);
        row.construct_seconds = std::chrono::duration<double>(clock::now() - t0).count();
        row.budget_k = budget.k;
        row.budget_capped = budget.capped;
        row.budget_used = K;
        row.n_defender_states = dmdp.n_states();
        if (timeout_s > 0.0 && elapsed_s() > timeout_s) {
            row.status = "timeout";
            return row;
        }

        const auto t1 = clock::now();
        const DefenderSolution sol = solve_defender(dmdp, opt);
        row.plan_seconds = std::chrono::duration<double>(clock::now() - t1).count();
        row.defender_value = sol.initial_value;
        if (timeout_s > 0.0 && elapsed_s() > timeout_s) {
            row.status = "timeout";
            return row;
        }

        row.attacker_analytic = attacker_baseline_value(attacker, opt);
        const int horizon =
            cfg.horizon > 0 ? cfg.horizon : default_horizon(inst.truth.gamma, cfg.tolerance);
        const MonteCarlo base =
            estimate_return(inst, attacker, nullptr, cfg.episodes, horizon, cfg.seed);
        row.attacker_mc_mean = base.mean;
        row.attacker_mc_stderr = base.stderr_;
        if (timeout_s > 0.0 && elapsed_s() > timeout_s) {
            row.status = "timeout";
            return row;
        }

        const DefenderPolicyTable table = make_policy_table(
            dmdp, sol, instance_fingerprint(inst), cfg.kappa, cfg.tolerance);
        const MonteCarlo defended =
            estimate_return(inst, attacker, &table, cfg.episodes, horizon, cfg.seed + 1);
        row.defended_mc_mean = defended.mean;
        row.defended_mc_stderr = defended.stderr_;
        row.bound_ok =
            defended.mean <= std::abs(sol.initial_value) + 3.0 * defended.stderr_;
        row.status = "ok";

        if (cfg.write_traces && !cfg.out_dir.empty()) {
            // defended episodes only, capped per instance to keep files sane
            std::filesystem::create_directories(cfg.out_dir + "/traces");
            std::string lines;
            const int count = std::min(cfg.episodes, 1000);
            for (int i = 0; i < count; ++i) {
                RngStream rng(derive_seed(cfg.seed + 1, static_cast<std::uint64_t>(i)));
                lines += episode_to_json(run_episode(inst, attacker, &table, horizon, rng, false))
                             .dump() +
                         "\n";
            }
            write_text_file(cfg.out_dir + "/traces/" + domain + "-" + instance_label + "-seed" +
                                std::to_string(trap_seed) + ".jsonl",
                            lines);
        }
    } catch (const std::exception& ex) {
        row.status = std::string("error: ") + ex.what();
    }
    return row;
}

inline BenchmarkRow aggregate_rows(const std::vector<BenchmarkRow>& rows) {
    BenchmarkRow agg;
    if (rows.empty()) return agg;
    agg = rows.front();
    agg.trap_seed_label = "avg";
    int ok = 0;
    double construct = 0, plan = 0, analytic = 0, amc = 0, ase = 0, dval = 0, dmc = 0, dse = 0;
    long long dstates = 0;
    bool bound_ok = true;
    for (const BenchmarkRow& r : rows) {
        if (r.status != "ok") continue;
        ++ok;
        construct += r.construct_seconds;
        plan += r.plan_seconds;
        analytic += r.attacker_analytic;
        amc += r.attacker_mc_mean;
        ase += r.attacker_mc_stderr;
        dval += r.defender_value;
        dmc += r.defended_mc_mean;
        dse += r.defended_mc_stderr;
        dstates += r.n_defender_states;
        bound_ok = bound_ok && r.bound_ok;
    }
    if (ok == 0) {
        agg.status = "no completed instances";
        return agg;
    }
    agg.construct_seconds = construct / ok;
    agg.plan_seconds = plan / ok;
    agg.attacker_analytic = analytic / ok;
    agg.attacker_mc_mean = amc / ok;
    agg.attacker_mc_stderr = ase / ok;
    agg.defender_value = dval / ok;
    agg.defended_mc_mean = dmc / ok;
    agg.defended_mc_stderr = dse / ok;
    agg.n_defender_states = dstates / ok;
    agg.bound_ok = bound_ok;
    agg.status = ok == static_cast<int>(rows.size())
                     ? "ok"
                     : "partial (" + std::to_string(ok) + "/" + std::to_string(rows.size()) + ")";
    return agg;
}

}  // namespace detail

/**
 * Runs the full sweep: for every (domain, size) family, one instance per
 * trap seed plus the aggregate row. Per-instance failures and timeouts are
 * recorded in their rows and never abort the sweep. Rows may run concurrently
 * up to cfg.parallel; outputs are assembled in a fixed order either way.
 */
inline BenchmarkReport run_benchmark(const ExperimentConfig& cfg) {
    cfg.validate();
    struct Job {
        std::string domain;
        int size = 0;
        double delta = 0.0;
        std::uint64_t trap_seed = 0;
        std::string label;
    };
    std::vector<Job> jobs;
    std::vector<std::size_t> family_sizes;
    const auto add_family = [&](const std::string& domain, int size, double delta,
                                const std::string& label) {
        for (std::uint64_t ts : cfg.trap_seeds) jobs.push_back({domain, size, delta, ts, label});
        family_sizes.push_back(cfg.trap_seeds.size());
    };
    for (const std::string& domain : cfg.domains) {
        if (domain == "gridworld")
            for (int n : cfg.grid_sizes)
                add_family(domain, n, 0.0, std::to_string(n) + "x" + std::to_string(n));
        else if (domain == "four_rooms")
            for (int n : cfg.rooms_sizes)
                add_family(domain, n, 0.0, std::to_string(n) + "x" + std::to_string(n));
        else if (domain == "rock_sampling")
            for (int n : cfg.rock_sizes)
                add_family(domain, n, 0.0, std::to_string(n) + "x" + std::to_string(n));
        else if (domain == "puddle")
            for (double d : cfg.puddle_deltas) {
                char buf[24];
                std::snprintf(buf, sizeof buf, "d%.2f", d);
                add_family(domain, 0, d, buf);
            }
        else if (domain == "showroom")
            add_family(domain, 0, 0.0, "demo");
    }

    std::vector<BenchmarkRow> instance_rows(jobs.size());
    if (cfg.parallel <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            const Job& jb = jobs[i];
            instance_rows[i] = detail::run_benchmark_instance(cfg, jb.domain, jb.size, jb.delta,
                                                              jb.trap_seed, jb.label);
        }
    } else {
        std::counting_semaphore<256> slots(std::min(cfg.parallel, 256));
        std::vector<std::future<BenchmarkRow>> futures;
        futures.reserve(jobs.size());
        for (const Job& jb : jobs)
            futures.push_back(std::async(std::launch::async, [&cfg, jb, &slots] {
                slots.acquire();
                BenchmarkRow row = detail::run_benchmark_instance(cfg, jb.domain, jb.size, jb.delta,
                                                                  jb.trap_seed, jb.label);
                slots.release();
                return row;
            }));
        for (std::size_t i = 0; i < futures.size(); ++i) instance_rows[i] = futures[i].get();
    }

    BenchmarkReport report;
    json manifest_rows = json::array();
    json warnings = json::array();
    std::size_t cursor = 0;
    for (std::size_t fam = 0; fam < family_sizes.size(); ++fam) {
        std::vector<BenchmarkRow> family(instance_rows.begin() + cursor,
                                         instance_rows.begin() + cursor + family_sizes[fam]);
        cursor += family_sizes[fam];
        for (const BenchmarkRow& r : family) {
            report.rows.push_back(r);
            manifest_rows.push_back({{"domain", r.domain},
                                     {"instance", r.instance_label},
                                     {"trap_seed", r.trap_seed_label},
                                     {"traps", r.traps},
                                     {"budget_k", r.budget_k},
                                     {"budget_capped", r.budget_capped},
                                     {"budget_used", r.budget_used},
                                     {"defender_value", r.defender_value},
                                     {"status", r.status}});
            if (r.status == "ok" && std::abs(r.defender_value) > r.attacker_analytic + 1e-9)
                warnings.push_back("defender value magnitude exceeds attacker baseline on " +
                                   r.domain + " " + r.instance_label + " seed " +
                                   r.trap_seed_label);
        }
        report.rows.push_back(detail::aggregate_rows(family));
    }

    report.manifest["config"] = experiment_config_to_string(cfg);
    report.manifest["kappa"] = cfg.kappa;
    report.manifest["rows"] = std::move(manifest_rows);
    report.manifest["warnings"] = std::move(warnings);
    report.manifest["version"] = "entrap 0.1.0";
    return report;
}

/// CSV with one header row; doubles rendered at 10 significant digits. The
/// two wall-clock columns come last so determinism comparisons can strip
/// them by name.
inline std::string benchmark_csv(const BenchmarkReport& report) {
    std::string out =
        "domain,instance,trap_seed,layout_seed,kappa,slip,n_traps,n_states,n_defender_states,"
        "budget_k,budget_capped,budget_used,goal_reachable,attacker_analytic,attacker_mc_mean,"
        "attacker_mc_stderr,defender_value,defended_mc_mean,defended_mc_stderr,bound_ok,episodes,"
        "status,construct_seconds,plan_seconds\n";
    for (const BenchmarkRow& r : report.rows) {
        out += r.domain + ',' + r.instance_label + ',' + r.trap_seed_label + ',' +
               std::to_string(r.layout_seed) + ',' + detail::fmt_double(r.kappa) + ',' +
               detail::fmt_double(r.slip) + ',' + std::to_string(r.n_traps) + ',' +
               std::to_string(r.n_states) + ',' + std::to_string(r.n_defender_states) + ',' +
               std::to_string(r.budget_k) + ',' + (r.budget_capped ? "1" : "0") + ',' +
               std::to_string(r.budget_used) + ',' + (r.goal_reachable ? "1" : "0") + ',' +
               detail::fmt_double(r.attacker_analytic) + ',' +
               detail::fmt_double(r.attacker_mc_mean) + ',' +
               detail::fmt_double(r.attacker_mc_stderr) + ',' +
               detail::fmt_double(r.defender_value) + ',' +
               detail::fmt_double(r.defended_mc_mean) + ',' +
               detail::fmt_double(r.defended_mc_stderr) + ',' + (r.bound_ok ? "1" : "0") + ',' +
               std::to_string(r.episodes) + ',' + r.status + ',' +
               detail::fmt_double(r.construct_seconds) + ',' +
               detail::fmt_double(r.plan_seconds) + '\n';
    }
    return out;
}

}  // namespace entrap

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "entrap/mdp.hpp"
#include "entrap/rng.hpp"

namespace entrap {

/**
 * One benchmark problem: the model the attacker plans with (traps are
 * ordinary states), the ground-truth model (identical except that traps are
 * absorbing with zero reward), the trap set, and generation metadata.
 */
struct DomainMetadata {
    std::string domain;
    int size = 0;          // grid side length (grid positions per axis for puddle)
    double slip = 0.0;
    double delta = 0.0;    // puddle step size; 0 elsewhere
    int n_traps = 0;
    int n_rocks = 0;
    std::uint64_t seed = 0;
    std::uint64_t trap_seed = 0;
    bool goal_reachable = true;
    int goal_state = -1;
};

struct DomainInstance {
    TabularMdp believed;
    TabularMdp truth;
    std::vector<int> traps;
    DomainMetadata metadata;
};

struct GridworldParams {
    double wall_density = 0.12;
    double lava_density = 0.05;
    double goal_reward = 1.0;
    double gamma = 0.99;
    bool regenerate_on_infeasible = true;  // otherwise throw on the first bad layout
    int max_attempts = 64;
};

struct FourRoomsParams {
    double goal_reward = 1.0;
    double gamma = 0.99;
    bool omit_doors = false;  // seal the rooms; reproduces unreachable-goal instances
};

struct RockSamplingParams {
    double rock_reward = 350.0;
    double good_rock_prob = 2.0 / 3.0;
    double gamma = 0.99;
    int max_rocks = 4;
    long long max_states = 500000;
};

struct PuddleParams {
    double puddle_lo = 0.2;
    double puddle_hi = 0.65;
    double step_reward = 1.0;   // entering any non-puddle cell
    double goal_reward = 1.0;   // the goal is a non-puddle cell; kept separate for tests
    double gamma = 0.998;
};

namespace detail {

// grid actions: 0 = up, 1 = down, 2 = left, 3 = right
inline constexpr int kGridDirs[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
inline constexpr const char* kGridActionNames[4] = {"up", "down", "left", "right"};

/// Symmetric slip row: the chosen direction succeeds with probability
/// 1 - slip, each perpendicular direction gets slip / 2. Blocked moves stay
/// in place; duplicate targets merge so the row sums to exactly 1.
inline std::vector<Outcome> slip_row(int dir, double slip,
                                     const std::function<int(int)>& move_to) {
    const int perp_a = (dir < 2) ? 2 : 0;
    const int perp_b = (dir < 2) ? 3 : 1;
    std::vector<std::pair<int, double>> mass = {
        {move_to(dir), 1.0 - slip}, {move_to(perp_a), slip / 2.0}, {move_to(perp_b), slip / 2.0}};
    std::vector<Outcome> row;
    for (const auto& [cell, p] : mass) {
        if (p <= 0.0) continue;
        bool merged = false;
        for (Outcome& o : row)
            if (o.next == cell) {
                o.prob += p;
                merged = true;
                break;
            }
        if (!merged) row.push_back({cell, p});
    }
    std::sort(row.begin(), row.end(), [](const Outcome& x, const Outcome& y) { return x.next < y.next; });
    return row;
}

/// Derives the ground-truth model: traps become absorbing with zero entry
/// reward and no outgoing transitions. Everything else is shared.
inline TabularMdp truth_from_believed(const TabularMdp& believed, const std::vector<int>& traps) {
    TabularMdp truth = believed;
    for (int t : traps) {
        truth.terminal[t] = 1;
        truth.rewards[t] = 0.0;
        for (int a = 0; a < truth.n_actions(); ++a) truth.row(t, a).clear();
    }
    return truth;
}

/// Uniform trap placement over `candidates` (without replacement), driven by
/// the trap seed only.
inline std::vector<int> place_traps(std::vector<int> candidates, int n_traps,
                                    std::uint64_t trap_seed) {
    if (n_traps < 1) throw DomainError("need at least one trap");
    if (static_cast<std::size_t>(n_traps) > candidates.size())
        throw DomainError("not enough free cells for " + std::to_string(n_traps) + " traps");
    RngStream rng(splitmix64(trap_seed));
    for (std::size_t i = 0; i < candidates.size() - 1 && i < static_cast<std::size_t>(n_traps); ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.raw() % (candidates.size() - i));
        std::swap(candidates[i], candidates[j]);
    }
    candidates.resize(n_traps);
    std::sort(candidates.begin(), candidates.end());
    return candidates;
}

inline bool grid_goal_reachable(int n, const std::vector<char>& blocked, int start, int goal) {
    // blocked cells cannot be entered or crossed
    std::vector<char> seen(static_cast<std::size_t>(n) * n, 0);
    std::deque<int> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
        const int c = queue.front();
        queue.pop_front();
        if (c == goal) return true;
        const int r = c / n, col = c % n;
        for (const auto& d : kGridDirs) {
            const int nr = r + d[0], nc = col + d[1];
            if (nr < 0 || nr >= n || nc < 0 || nc >= n) continue;
            const int t = nr * n + nc;
            if (blocked[t] || seen[t]) continue;
            seen[t] = 1;
            queue.push_back(t);
        }
    }
    return false;
}

}  // namespace detail

/**
 * Basic gridworld: navigate from the top-left corner to the bottom-right
 * goal past seeded walls and lava pits. Lava absorbs with zero reward in
 * both models (the attacker knows about lava; only traps are secret).
 */
inline DomainInstance generate_gridworld(int n, double slip, int n_traps, std::uint64_t seed,
                                         std::uint64_t trap_seed,
                                         const GridworldParams& params = {}) {
    if (n < 3) throw DomainError("gridworld needs n >= 3");
    if (!(slip >= 0.0 && slip < 1.0)) throw DomainError("slip must lie in [0, 1)");
    const int start_cell = 0;
    const int goal_cell = n * n - 1;

    std::vector<char> wall, lava;
    for (int attempt = 0;; ++attempt) {
        if (attempt >= params.max_attempts)
            throw DomainError("gridworld layout infeasible after " +
                              std::to_string(params.max_attempts) + " attempts");
        RngStream rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
        wall.assign(static_cast<std::size_t>(n) * n, 0);
        lava.assign(static_cast<std::size_t>(n) * n, 0);
        for (int c = 0; c < n * n; ++c) {
            if (c == start_cell || c == goal_cell) continue;
            const double u = rng.uniform();
            if (u < params.wall_density)
                wall[c] = 1;
            else if (u < params.wall_density + params.lava_density)
                lava[c] = 1;
        }
        std::vector<char> blocked(wall);
        for (int c = 0; c < n * n; ++c)
            if (lava[c]) blocked[c] = 1;
        if (detail::grid_goal_reachable(n, blocked, start_cell, goal_cell)) break;
        if (!params.regenerate_on_infeasible)
            throw DomainError("gridworld layout infeasible: goal unreachable");
    }

    // states = non-wall cells
    std::vector<int> state_of_cell(static_cast<std::size_t>(n) * n, -1);
    TabularMdp m;
    for (int c = 0; c < n * n; ++c) {
        if (wall[c]) continue;
        state_of_cell[c] = m.n_states();
        m.state_labels.push_back("r" + std::to_string(c / n) + "c" + std::to_string(c % n) +
                                 (lava[c] ? ":lava" : ""));
    }
    m.action_labels.assign(std::begin(detail::kGridActionNames), std::end(detail::kGridActionNames));
    m.resize_transitions();
    m.gamma = params.gamma;
    m.initial_state = state_of_cell[start_cell];

    for (int c = 0; c < n * n; ++c) {
        const int s = state_of_cell[c];
        if (s < 0) continue;
        if (c == goal_cell) {
            m.rewards[s] = params.goal_reward;
            m.terminal[s] = 1;
            continue;
        }
        if (lava[c]) {
            m.terminal[s] = 1;
            continue;
        }
        const auto move_to = [&](int dir) {
            const int r = c / n + detail::kGridDirs[dir][0];
            const int col = c % n + detail::kGridDirs[dir][1];
            if (r < 0 || r >= n || col < 0 || col >= n) return s;
            const int t = state_of_cell[r * n + col];
            return t < 0 ? s : t;  // walls bounce back
        };
        for (int a = 0; a < 4; ++a) m.row(s, a) = detail::slip_row(a, slip, move_to);
    }

    std::vector<int> candidates;
    for (int c = 0; c < n * n; ++c) {
        const int s = state_of_cell[c];
        if (s < 0 || c == start_cell || c == goal_cell || lava[c]) continue;
        candidates.push_back(s);
    }
    DomainInstance inst;
    inst.traps = detail::place_traps(std::move(candidates), n_traps, trap_seed);
    inst.believed = std::move(m);
    inst.truth = detail::truth_from_believed(inst.believed, inst.traps);
    inst.metadata = {"gridworld", n,  slip, 0.0, n_traps, 0, seed, trap_seed,
                     true,        state_of_cell[goal_cell]};
    inst.believed.validate();
    inst.truth.validate();
    return inst;
}

/**
 * Four rooms: a gridworld split into quadrants by a wall row and column,
 * connected through one seeded door cell per wall arm. The goal-reachability
 * flag is computed honestly; sealed instances (omit_doors) are reported, not
 * rejected, and reproduce zero-value rows.
 */
inline DomainInstance generate_four_rooms(int n, double slip, int n_traps, std::uint64_t seed,
                                          std::uint64_t trap_seed,
                                          const FourRoomsParams& params = {}) {
    if (n < 4) throw DomainError("four rooms needs n >= 4");
    if (!(slip >= 0.0 && slip < 1.0)) throw DomainError("slip must lie in [0, 1)");
    const int h = n / 2, w = n / 2;
    const int start_cell = 0;
    const int goal_cell = n * n - 1;

    std::vector<char> wall(static_cast<std::size_t>(n) * n, 0);
    for (int c = 0; c < n; ++c) wall[h * n + c] = 1;
    for (int r = 0; r < n; ++r) wall[r * n + w] = 1;
    if (!params.omit_doors) {
        RngStream rng(splitmix64(seed));
        const auto open_arm = [&](std::vector<int> cells) {
            if (!cells.empty()) wall[cells[rng.raw() % cells.size()]] = 0;
        };
        std::vector<int> left, right, top, bottom;
        for (int c = 0; c < w; ++c) left.push_back(h * n + c);
        for (int c = w + 1; c < n; ++c) right.push_back(h * n + c);
        for (int r = 0; r < h; ++r) top.push_back(r * n + w);
        for (int r = h + 1; r < n; ++r) bottom.push_back(r * n + w);
        open_arm(left);
        open_arm(right);
        open_arm(top);
        open_arm(bottom);
    }

    std::vector<int> state_of_cell(static_cast<std::size_t>(n) * n, -1);
    TabularMdp m;
    for (int c = 0; c < n * n; ++c) {
        if (wall[c]) continue;
        state_of_cell[c] = m.n_states();
        m.state_labels.push_back("r" + std::to_string(c / n) + "c" + std::to_string(c % n));
    }
    m.action_labels.assign(std::begin(detail::kGridActionNames), std::end(detail::kGridActionNames));
    m.resize_transitions();
    m.gamma = params.gamma;
    m.initial_state = state_of_cell[start_cell];

    for (int c = 0; c < n * n; ++c) {
        const int s = state_of_cell[c];
        if (s < 0) continue;
        if (c == goal_cell) {
            m.rewards[s] = params.goal_reward;
            m.terminal[s] = 1;
            continue;
        }
        const auto move_to = [&](int dir) {
            const int r = c / n + detail::kGridDirs[dir][0];
            const int col = c % n + detail::kGridDirs[dir][1];
            if (r < 0 || r >= n || col < 0 || col >= n) return s;
            const int t = state_of_cell[r * n + col];
            return t < 0 ? s : t;
        };
        for (int a = 0; a < 4; ++a) m.row(s, a) = detail::slip_row(a, slip, move_to);
    }

    std::vector<int> candidates;
    for (int c = 0; c < n * n; ++c) {
        const int s = state_of_cell[c];
        if (s < 0 || c == start_cell || c == goal_cell) continue;
        candidates.push_back(s);
    }
    DomainInstance inst;
    inst.traps = detail::place_traps(std::move(candidates), n_traps, trap_seed);
    inst.believed = std::move(m);
    inst.truth = detail::truth_from_believed(inst.believed, inst.traps);
    inst.metadata = {"four_rooms", n,  slip, 0.0, n_traps, 0, seed, trap_seed,
                     detail::grid_goal_reachable(n, wall, start_cell, goal_cell),
                     state_of_cell[goal_cell]};
    inst.believed.validate();
    inst.truth.validate();
    return inst;
}

/**
 * MDP version of rock sampling: a rover moves over the grid and can sample
 * the rock (if any) at its cell. Good rocks pay a positive reward once; bad
 * rocks pay nothing; there are no negative rewards. Collected status is part
 * of the state, and the one-step "just sampled" flag routes the entry reward
 * to the sampling transition only. Unreachable (cell, mask, flag) combinations
 * are pruned.
 */
inline DomainInstance generate_rock_sampling(int n, double slip, int n_rocks, int n_traps,
                                             std::uint64_t seed, std::uint64_t trap_seed,
                                             const RockSamplingParams& params = {}) {
    if (n < 3) throw DomainError("rock sampling needs n >= 3");
    if (!(slip >= 0.0 && slip < 1.0)) throw DomainError("slip must lie in [0, 1)");
    if (n_rocks < 0 || n_rocks > params.max_rocks)
        throw DomainError("rock count must lie in [0, " + std::to_string(params.max_rocks) + "]");
    const long long pre_prune =
        static_cast<long long>(n) * n * (1LL << n_rocks) * 2;
    if (pre_prune > params.max_states)
        throw StateSpaceError("rock sampling state space " + std::to_string(pre_prune) +
                              " exceeds the limit " + std::to_string(params.max_states));

    const int start_cell = 0;
    RngStream rng(splitmix64(seed));
    std::vector<int> cells;
    for (int c = 1; c < n * n; ++c) cells.push_back(c);
    for (int i = 0; i < n_rocks; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.raw() % (cells.size() - i));
        std::swap(cells[i], cells[j]);
    }
    std::vector<int> rock_cell(cells.begin(), cells.begin() + n_rocks);
    std::sort(rock_cell.begin(), rock_cell.end());
    std::vector<char> rock_good(n_rocks, 0);
    for (int i = 0; i < n_rocks; ++i) rock_good[i] = rng.uniform() < params.good_rock_prob ? 1 : 0;
    const auto rock_at = [&](int cell) {
        for (int i = 0; i < n_rocks; ++i)
            if (rock_cell[i] == cell) return i;
        return -1;
    };

    // full (cell, mask, flag) space first, then reachability pruning
    const int n_masks = 1 << n_rocks;
    const auto raw_id = [&](int cell, int mask, int flag) {
        return (cell * n_masks + mask) * 2 + flag;
    };
    const int n_raw = n * n * n_masks * 2;
    const int n_act = 5;  // four moves + sample
    std::vector<std::vector<Outcome>> raw_rows(static_cast<std::size_t>(n_raw) * n_act);
    for (int cell = 0; cell < n * n; ++cell) {
        for (int mask = 0; mask < n_masks; ++mask) {
            for (int flag = 0; flag < 2; ++flag) {
                const int id = raw_id(cell, mask, flag);
                const auto move_to = [&](int dir) {
                    const int r = cell / n + detail::kGridDirs[dir][0];
                    const int col = cell % n + detail::kGridDirs[dir][1];
                    if (r < 0 || r >= n || col < 0 || col >= n) return raw_id(cell, mask, 0);
                    return raw_id((r * n + col), mask, 0);
                };
                for (int a = 0; a < 4; ++a)
                    raw_rows[static_cast<std::size_t>(id) * n_act + a] =
                        detail::slip_row(a, slip, move_to);
                const int r = rock_at(cell);
                if (r >= 0 && !(mask & (1 << r)))
                    raw_rows[static_cast<std::size_t>(id) * n_act + 4] = {
                        {raw_id(cell, mask | (1 << r), 1), 1.0}};
                else
                    raw_rows[static_cast<std::size_t>(id) * n_act + 4] = {{raw_id(cell, mask, 0), 1.0}};
            }
        }
    }

    // BFS over reachable raw states, keeping discovery order stable
    std::vector<int> state_of_raw(n_raw, -1);
    std::vector<int> order;
    std::deque<int> queue{raw_id(start_cell, 0, 0)};
    state_of_raw[queue.front()] = 0;
    order.push_back(queue.front());
    while (!queue.empty()) {
        const int id = queue.front();
        queue.pop_front();
        for (int a = 0; a < n_act; ++a) {
            for (const Outcome& o : raw_rows[static_cast<std::size_t>(id) * n_act + a]) {
                if (state_of_raw[o.next] >= 0) continue;
                state_of_raw[o.next] = static_cast<int>(order.size());
                order.push_back(o.next);
                queue.push_back(o.next);
            }
        }
    }

    TabularMdp m;
    for (int id : order) {
        const int flag = id % 2;
        const int mask = (id / 2) % n_masks;
        const int cell = id / (2 * n_masks);
        std::string label = "r" + std::to_string(cell / n) + "c" + std::to_string(cell % n) + ":m" +
                            std::to_string(mask);
        if (flag) label += ":sampled";
        m.state_labels.push_back(label);
    }
    m.action_labels = {"up", "down", "left", "right", "sample"};
    m.resize_transitions();
    m.gamma = params.gamma;
    m.initial_state = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const int id = order[i];
        const int flag = id % 2;
        const int mask = (id / 2) % n_masks;
        const int cell = id / (2 * n_masks);
        if (flag) {
            const int r = rock_at(cell);
            m.rewards[i] = (r >= 0 && rock_good[r]) ? params.rock_reward : 0.0;
        }
        for (int a = 0; a < n_act; ++a) {
            auto& row = m.row(static_cast<int>(i), a);
            for (const Outcome& o : raw_rows[static_cast<std::size_t>(id) * n_act + a])
                row.push_back({state_of_raw[o.next], o.prob});
            std::sort(row.begin(), row.end(),
                      [](const Outcome& x, const Outcome& y) { return x.next < y.next; });
        }
        (void)mask;
    }

    // traps are cells: every (cell, mask, flag) state at a trap cell is a trap
    std::vector<int> cell_candidates;
    for (int c = 1; c < n * n; ++c) cell_candidates.push_back(c);
    std::vector<int> trap_cells = detail::place_traps(std::move(cell_candidates), n_traps, trap_seed);
    std::vector<int> traps;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const int cell = order[i] / (2 * n_masks);
        if (std::find(trap_cells.begin(), trap_cells.end(), cell) != trap_cells.end())
            traps.push_back(static_cast<int>(i));
    }

    DomainInstance inst;
    inst.traps = std::move(traps);
    inst.believed = std::move(m);
    inst.truth = detail::truth_from_believed(inst.believed, inst.traps);
    inst.metadata = {"rock_sampling", n, slip, 0.0, n_traps, n_rocks, seed, trap_seed, true, -1};
    inst.believed.validate();
    inst.truth.validate();
    return inst;
}

/**
 * Puddle world on a fixed 1x1 map discretized at step size delta. Entering
 * any cell outside the puddle pays a fixed positive reward; puddle cells pay
 * zero, a non-negative reshaping of the classic puddle penalties. The grid
 * has floor(1/delta) + 1 positions per axis, so delta = 0.4 and 0.5 produce
 * the same 3x3 problem.
 */
inline DomainInstance generate_puddle(double delta, double slip, int n_traps, std::uint64_t seed,
                                      std::uint64_t trap_seed, const PuddleParams& params = {}) {
    if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("invalid delta: must lie in (0, 1]");
    const int m = static_cast<int>(std::floor(1.0 / delta + 1e-9));
    if (m < 2)
        throw DomainError("invalid delta: " + std::to_string(delta) +
                          " leaves fewer than 3 grid positions per axis");
    if (!(slip >= 0.0 && slip < 1.0)) throw DomainError("slip must lie in [0, 1)");
    const int n = m + 1;  // positions per axis: 0, delta, ..., m*delta
    const int start_cell = 0;
    const int goal_cell = n * n - 1;
    const auto in_puddle = [&](int cell) {
        const double x = (cell % n) * delta;
        const double y = (cell / n) * delta;
        return x >= params.puddle_lo - 1e-9 && x <= params.puddle_hi + 1e-9 &&
               y >= params.puddle_lo - 1e-9 && y <= params.puddle_hi + 1e-9;
    };

    TabularMdp mdl;
    for (int c = 0; c < n * n; ++c) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "x%.2fy%.2f%s", (c % n) * delta, (c / n) * delta,
                      in_puddle(c) ? ":puddle" : "");
        mdl.state_labels.push_back(buf);
    }
    mdl.action_labels.assign(std::begin(detail::kGridActionNames),
                             std::end(detail::kGridActionNames));
    mdl.resize_transitions();
    mdl.gamma = params.gamma;
    mdl.initial_state = start_cell;
    for (int c = 0; c < n * n; ++c) {
        if (c == goal_cell) {
            mdl.rewards[c] = in_puddle(c) ? 0.0 : params.goal_reward;
            mdl.terminal[c] = 1;
            continue;
        }
        mdl.rewards[c] = in_puddle(c) ? 0.0 : params.step_reward;
        const auto move_to = [&](int dir) {
            const int r = c / n + detail::kGridDirs[dir][0];
            const int col = c % n + detail::kGridDirs[dir][1];
            if (r < 0 || r >= n || col < 0 || col >= n) return c;
            return r * n + col;
        };
        for (int a = 0; a < 4; ++a) mdl.row(c, a) = detail::slip_row(a, slip, move_to);
    }

    std::vector<int> candidates;
    for (int c = 0; c < n * n; ++c)
        if (c != start_cell && c != goal_cell) candidates.push_back(c);
    DomainInstance inst;
    inst.traps = detail::place_traps(std::move(candidates), n_traps, trap_seed);
    inst.believed = std::move(mdl);
    inst.truth = detail::truth_from_believed(inst.believed, inst.traps);
    inst.metadata = {"puddle", n, slip, delta, n_traps, 0, seed, trap_seed, true, goal_cell};
    inst.believed.validate();
    inst.truth.validate();
    return inst;
}

/**
 * Hand-authored showroom demo: a thief crosses automatic-door corridors
 * toward the diamond vault. The believed model opens one of each room's
 * doors uniformly; the covert defender picks which. Two grey corridor rooms
 * are traps.
 */
inline DomainInstance showroom_demo() {
    TabularMdp m;
    m.state_labels = {"start",   "hall_a1", "hall_a2", "hall_b1",
                      "hall_b2", "trap_a",  "trap_b",  "vault"};
    m.action_labels = {"advance", "retreat"};
    m.resize_transitions();
    m.gamma = 0.95;
    m.initial_state = 0;
    const int start = 0, a1 = 1, a2 = 2, b1 = 3, b2 = 4, ta = 5, tb = 6, vault = 7;
    m.rewards[vault] = 1.0;
    m.terminal[vault] = 1;

    const auto doors = [&](int s, std::vector<int> targets) {
        auto& row = m.row(s, 0);
        std::sort(targets.begin(), targets.end());
        for (int t : targets) row.push_back({t, 1.0 / targets.size()});
    };
    doors(start, {a1, b1});
    doors(a1, {a2, ta});
    doors(a2, {vault, ta});
    doors(b1, {b2, tb});
    doors(b2, {vault, tb});
    doors(ta, {a1, a2});  // believed: an ordinary room with two doors
    doors(tb, {b1, b2});
    const auto retreat = [&](int s, int back) { m.row(s, 1) = {{back, 1.0}}; };
    retreat(start, start);
    retreat(a1, start);
    retreat(a2, a1);
    retreat(b1, start);
    retreat(b2, b1);
    retreat(ta, a1);
    retreat(tb, b1);

    DomainInstance inst;
    inst.traps = {ta, tb};
    inst.believed = std::move(m);
    inst.truth = detail::truth_from_believed(inst.believed, inst.traps);
    inst.metadata = {"showroom", 8, 0.0, 0.0, 2, 0, 0, 0, true, vault};
    inst.believed.validate();
    inst.truth.validate();
    return inst;
}

/// Dispatch by name; used by the CLI and the benchmark runner.
inline DomainInstance generate_domain(const std::string& name, int size, double delta, double slip,
                                      int n_traps, int n_rocks, std::uint64_t seed,
                                      std::uint64_t trap_seed) {
    if (name == "gridworld") return generate_gridworld(size, slip, n_traps, seed, trap_seed);
    if (name == "four_rooms") return generate_four_rooms(size, slip, n_traps, seed, trap_seed);
    if (name == "rock_sampling")
        return generate_rock_sampling(size, slip, n_rocks, n_traps, seed, trap_seed);
    if (name == "puddle") return generate_puddle(delta, slip, n_traps, seed, trap_seed);
    if (name == "showroom") return showroom_demo();
    throw DomainError("unknown domain: " + name);
}

}  // namespace entrap

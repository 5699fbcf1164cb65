#include <cmath>

#include "ca3d/baselines.hpp"
#include "ca3d/optimizer.hpp"
#include "ca3d/random.hpp"
#include "doctest.h"

using namespace ca3d;

namespace {

const Region kRegion{4000.0, 4000.0, {-2000.0, -2000.0}};
const Task kTask{4e7, 1e9, 1.0};

ChannelParams strong_channel() {
    ChannelParams p;
    p.beta0 = 2e-3;
    p.p_user = 0.2;
    p.p_uav = 1.0;
    return p;
}

DeploymentConstraints constraints(double d_min = 50.0) {
    DeploymentConstraints c;
    c.region = kRegion;
    c.h_min = 100.0;
    c.h_max = 300.0;
    c.d_min = d_min;
    return c;
}

Scenario small_scenario(std::uint64_t seed, int users = 10, int nodes = 6) {
    Scenario s;
    s.region = kRegion;
    s.users = generate_hotspot_gus(kRegion, users, {0, 0}, 800.0, kTask, mix_seed(seed, 1));
    s.nodes = generate_cns_uniform(kRegion, nodes, 2e9, 10e9, mix_seed(seed, 2));
    return s;
}

bool same_deployment(const Deployment& a, const Deployment& b) {
    if (a.size() != b.size()) return false;
    for (int m = 0; m < a.size(); ++m) {
        const auto& qa = a.positions[static_cast<std::size_t>(m)];
        const auto& qb = b.positions[static_cast<std::size_t>(m)];
        if (qa.x != qb.x || qa.y != qb.y || qa.h != qb.h) return false;
    }
    return true;
}

} // namespace

TEST_CASE("project_feasible: idempotent on feasible input, clamps bounds") {
    const auto c = constraints();
    const Deployment ok{{{100.0, -200.0, 150.0}, {500.0, 300.0, 250.0}}};
    CHECK(same_deployment(project_feasible(ok, c), ok));

    const Deployment high{{{0.0, 0.0, 350.0}}};
    CHECK(project_feasible(high, c).positions[0].h == 300.0);

    const Deployment outside{{{-3000.0, 5000.0, 50.0}}};
    const auto fixed = project_feasible(outside, c);
    CHECK(fixed.positions[0].x == -2000.0);
    CHECK(fixed.positions[0].y == 2000.0);
    CHECK(fixed.positions[0].h == 100.0);
}

TEST_CASE("project_feasible: separation repair, coincident split, unsatisfiable") {
    const auto c = constraints(50.0);
    const Deployment coincident{{{0.0, 0.0, 200.0}, {0.0, 0.0, 200.0}}};
    const auto repaired = project_feasible(coincident, c);
    CHECK(feasible(repaired, c));
    CHECK(uav_distance(repaired.positions[0], repaired.positions[1]) >= 50.0);

    // dense cluster still repairable
    Deployment cluster;
    for (int i = 0; i < 6; ++i)
        cluster.positions.push_back({static_cast<double>(i), 0.0, 200.0});
    CHECK(feasible(project_feasible(cluster, c), c));

    // 9 UAVs cannot keep 10 km apart inside a 4 km box
    auto impossible = constraints(10000.0);
    Deployment crowd;
    for (int i = 0; i < 9; ++i)
        crowd.positions.push_back({static_cast<double>(100 * i), 0.0, 200.0});
    CHECK_THROWS_AS(project_feasible(crowd, impossible), projection_error);
}

TEST_CASE("local actions: seven, zero first, symmetric, order stable") {
    BeamParams b;
    b.step_xy = 100.0;
    b.step_h = 20.0;
    const auto actions = local_actions(b);
    CHECK(actions.size() == 7);
    CHECK(actions[0].dx == 0.0);
    CHECK(actions[0].dy == 0.0);
    CHECK(actions[0].dh == 0.0);
    double sx = 0.0, sy = 0.0, sh = 0.0;
    int zero_count = 0;
    for (const auto& a : actions) {
        sx += a.dx;
        sy += a.dy;
        sh += a.dh;
        if (a.dx == 0.0 && a.dy == 0.0 && a.dh == 0.0) ++zero_count;
    }
    CHECK(zero_count == 1);
    CHECK(sx == 0.0);
    CHECK(sy == 0.0);
    CHECK(sh == 0.0);
    const auto again = local_actions(b);
    for (std::size_t i = 0; i < actions.size(); ++i) {
        CHECK(actions[i].dx == again[i].dx);
        CHECK(actions[i].dh == again[i].dh);
    }
}

TEST_CASE("apply_action: clamping and single-UAV separation repair") {
    const auto c = constraints(50.0);
    Deployment d{{{1950.0, 0.0, 295.0}, {0.0, 0.0, 200.0}}};

    // +x move clamps at the region edge, +h at the ceiling
    Deployment moved = d;
    CHECK(apply_action(moved, 0, {100.0, 0.0, 0.0}, c));
    CHECK(moved.positions[0].x == 2000.0);
    moved = d;
    CHECK(apply_action(moved, 0, {0.0, 0.0, 20.0}, c));
    CHECK(moved.positions[0].h == 300.0);

    // moving into the neighbour pushes the mover back out beyond d_min
    Deployment close{{{0.0, 0.0, 200.0}, {120.0, 0.0, 200.0}}};
    CHECK(apply_action(close, 0, {100.0, 0.0, 0.0}, c));
    CHECK(feasible(close, c));
    CHECK(close.positions[1].x == 120.0); // the other UAV never moves
}

TEST_CASE("rollout score: single step, zero sequence, discount collapse") {
    const ChannelParams p = strong_channel();
    const auto c = constraints(0.0);
    const Scenario s = small_scenario(5);
    const UtilityWeights w;
    BeamParams b;

    const Deployment d = random_deploy(s, c, 2, 77);
    UtilityEvaluator evaluator(s, p, w);
    const double f0 = evaluator.value(d);

    // H = 1: J is the one-step utility change
    const Displacement step{b.step_xy, 0.0, 0.0};
    Deployment after = d;
    REQUIRE(apply_action(after, 0, step, c));
    const double f1 = evaluator.value(after);
    const std::vector<Displacement> one{step};
    CHECK(rollout_score(0, one, d, s, p, w, c, b) == doctest::Approx(f1 - f0).epsilon(1e-12));

    // all-zero sequence scores exactly zero
    const std::vector<Displacement> zeros(3);
    CHECK(rollout_score(0, zeros, d, s, p, w, c, b) == 0.0);

    // rho = 0 with the 0^0 = 1 convention: only the first step counts
    BeamParams myopic = b;
    myopic.discount = 0.0;
    const std::vector<Displacement> two{step, Displacement{0.0, b.step_xy, 0.0}};
    CHECK(rollout_score(0, two, d, s, p, w, c, myopic) == doctest::Approx(f1 - f0).epsilon(1e-12));

    CHECK_THROWS_AS(rollout_score(0, std::vector<Displacement>{}, d, s, p, w, c, b),
                    std::invalid_argument);
}

TEST_CASE("pso: zero-iteration degenerate loop and random-search dominance") {
    const ChannelParams p = strong_channel();
    const auto c = constraints();
    const Scenario s = small_scenario(11, 20, 8);
    const UtilityWeights w;

    PsoParams base;
    base.num_particles = 40;
    base.iterations = 0;
    base.seed = 2024;
    UtilityEvaluator ev0(s, p, w);
    const auto [d0, t0] = pso_init(ev0, c, base, 4);
    CHECK(feasible(d0, c));
    CHECK(t0.points.size() == 1);
    CHECK(ev0.evaluations() == 40);

    PsoParams full = base;
    full.iterations = 60;
    UtilityEvaluator ev1(s, p, w);
    const auto [d1, t1] = pso_init(ev1, c, full, 4);
    // the search shares the initial stream with the 40-layout random baseline
    UtilityEvaluator check(s, p, w);
    CHECK(check.value(d1) >= check.value(d0));
    CHECK(t1.points.size() == 61);
    CHECK(ev1.evaluations() == 40 * 61);
}

TEST_CASE("pso: best-so-far utility is non-decreasing and deterministic") {
    const ChannelParams p = strong_channel();
    const auto c = constraints();
    const Scenario s = small_scenario(21, 15, 6);
    PsoParams params;
    params.num_particles = 12;
    params.iterations = 25;
    params.seed = 7;

    const auto [d, trace] = pso_init(s, p, UtilityWeights{}, c, params, 3);
    CHECK(feasible(d, c));
    for (std::size_t i = 1; i < trace.points.size(); ++i)
        CHECK(trace.points[i].best_utility >= trace.points[i - 1].best_utility);

    const auto [d2, trace2] = pso_init(s, p, UtilityWeights{}, c, params, 3);
    CHECK(same_deployment(d, d2));
}

TEST_CASE("beam refinement: monotone, feasible, converged input returned unchanged") {
    const ChannelParams p = strong_channel();
    const auto c = constraints();
    const Scenario s = small_scenario(31, 15, 6);
    const UtilityWeights w;
    BeamParams b;
    b.max_passes = 20;

    PsoParams pso;
    pso.num_particles = 15;
    pso.iterations = 30;
    pso.seed = 5;
    const auto [init, pso_trace] = pso_init(s, p, w, c, pso, 3);

    UtilityEvaluator evaluator(s, p, w);
    bool all_feasible = true;
    evaluator.set_observer([&](const Deployment& d) { all_feasible &= feasible(d, c); });
    const auto [refined, trace] = beam_refine(evaluator, init, c, b);
    CHECK(all_feasible);
    CHECK(feasible(refined, c));
    for (std::size_t i = 1; i < trace.points.size(); ++i)
        CHECK(trace.points[i].best_utility >= trace.points[i - 1].best_utility);

    UtilityEvaluator check(s, p, w);
    CHECK(check.value(refined) >= check.value(init));

    // a converged deployment is a fixed point
    const auto [again, trace2] = beam_refine(refined, s, p, w, c, b);
    CHECK(same_deployment(again, refined));
    CHECK(trace2.points.size() == 2); // the single convergence pass
}

TEST_CASE("beam evaluation accounting: 7M(1 + W(H-1)) evaluations per pass") {
    const ChannelParams p = strong_channel();
    auto c = constraints(0.0); // no separation blocking: exact counts
    const Scenario s = small_scenario(41, 8, 5);
    BeamParams b;
    b.width = 4;
    b.horizon = 3;
    b.max_passes = 6;

    const Deployment start = random_deploy(s, c, 3, 99);
    UtilityEvaluator evaluator(s, p, UtilityWeights{});
    const auto [refined, trace] = beam_refine(evaluator, start, c, b);

    const long long per_pass = 7LL * 3 * (1 + b.width * (b.horizon - 1));
    REQUIRE(trace.points.size() >= 2);
    for (std::size_t i = 1; i < trace.points.size(); ++i)
        CHECK(trace.points[i].evals - trace.points[i - 1].evals == per_pass);
}

TEST_CASE("ca3d_optimize: single-UAV convergence to a grid-certified optimum region") {
    const ChannelParams p = strong_channel();
    auto c = constraints();
    c.region = Region{2000.0, 2000.0, {-1000.0, -1000.0}};

    Scenario s;
    s.region = c.region;
    s.users = {{1, {0.0, 0.0}, kTask}};
    s.nodes = {{1, {400.0, 0.0}, 10e9}};

    // exhaustive grid oracle: some feasible position must reach P_succ = 1
    bool grid_feasible = false;
    for (int ix = 0; ix <= 20 && !grid_feasible; ++ix)
        for (int iy = 0; iy <= 20 && !grid_feasible; ++iy)
            for (int ih = 0; ih <= 5 && !grid_feasible; ++ih) {
                const UavPosition q{-1000.0 + 100.0 * ix, -1000.0 + 100.0 * iy,
                                    100.0 + 40.0 * ih};
                if (end_to_end_latency(s.users[0], q, s.nodes[0], p) <= kTask.deadline)
                    grid_feasible = true;
            }
    REQUIRE(grid_feasible);

    PsoParams pso;
    pso.num_particles = 20;
    pso.iterations = 40;
    pso.seed = 3;
    BeamParams b;
    const auto result = ca3d_optimize(s, p, UtilityWeights{}, c, pso, b, 1);
    CHECK(result.report.p_succ == 1.0);
    CHECK(feasible(result.deployment, c));
}

TEST_CASE("ca3d_optimize: determinism and stage contract") {
    const ChannelParams p = strong_channel();
    const auto c = constraints();
    const Scenario s = small_scenario(51, 12, 6);
    PsoParams pso;
    pso.num_particles = 10;
    pso.iterations = 15;
    pso.seed = 11;
    BeamParams b;
    b.max_passes = 10;

    const auto r1 = ca3d_optimize(s, p, UtilityWeights{}, c, pso, b, 3);
    const auto r2 = ca3d_optimize(s, p, UtilityWeights{}, c, pso, b, 3);
    CHECK(same_deployment(r1.deployment, r2.deployment));
    CHECK(r1.report.utility == r2.report.utility);

    // final F >= the PSO stage's best F
    double pso_best = -1e300;
    for (const auto& point : r1.trace.points)
        if (point.stage == "pso") pso_best = std::max(pso_best, point.best_utility);
    CHECK(r1.report.utility >= pso_best);
    CHECK(r1.trace.evaluations > 0);

    const std::string csv = r1.trace.to_csv();
    CHECK(csv.rfind("stage,iteration,best_utility,evals\n", 0) == 0);
}

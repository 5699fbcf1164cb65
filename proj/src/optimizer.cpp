#include "ca3d/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ca3d/format.hpp"
#include "ca3d/random.hpp"

namespace ca3d {

namespace {

double clamp(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

void clamp_position(UavPosition& q, const DeploymentConstraints& c) {
    q.x = clamp(q.x, c.region.origin.x, c.region.origin.x + c.region.width);
    q.y = clamp(q.y, c.region.origin.y, c.region.origin.y + c.region.height);
    q.h = clamp(q.h, c.h_min, c.h_max);
}

// Deterministic split direction for coincident UAVs: angle derived from the
// pair indices and the repair round.
Displacement split_direction(int m, int mp, int round) {
    const std::uint64_t h = mix_seed(0x5eedULL + static_cast<std::uint64_t>(round),
                                     (static_cast<std::uint64_t>(m) << 20) ^
                                         static_cast<std::uint64_t>(mp));
    const double angle =
        2.0 * std::numbers::pi * (static_cast<double>(h >> 11) * 0x1.0p-53);
    return {std::cos(angle), std::sin(angle), 0.0};
}

// Moves both endpoints of a violating pair apart along their connecting
// segment so their distance becomes `target`.
void repel_pair(UavPosition& a, UavPosition& b, double dist, double target, int m, int mp,
                int round) {
    double ux, uy, uh;
    if (dist > 0.0) {
        ux = (b.x - a.x) / dist;
        uy = (b.y - a.y) / dist;
        uh = (b.h - a.h) / dist;
    } else {
        const auto dir = split_direction(m, mp, round);
        ux = dir.dx;
        uy = dir.dy;
        uh = 0.0;
    }
    const double push = 0.5 * (target - dist);
    a.x -= push * ux;
    a.y -= push * uy;
    a.h -= push * uh;
    b.x += push * ux;
    b.y += push * uy;
    b.h += push * uh;
}

} // namespace

Deployment project_feasible(const Deployment& deployment,
                            const DeploymentConstraints& constraints) {
    Deployment out = deployment;
    for (auto& q : out.positions) clamp_position(q, constraints);
    if (constraints.d_min <= 0.0 || out.size() < 2) return out;

    const double target = constraints.d_min * 1.01;
    for (int round = 0; round < 100; ++round) {
        bool violated = false;
        for (int m = 0; m < out.size(); ++m) {
            for (int mp = m + 1; mp < out.size(); ++mp) {
                const double dist = uav_distance(out.positions[m], out.positions[mp]);
                if (dist >= constraints.d_min) continue;
                violated = true;
                repel_pair(out.positions[m], out.positions[mp], dist, target, m, mp, round);
            }
        }
        if (!violated) return out;
        for (auto& q : out.positions) clamp_position(q, constraints);
        if (feasible(out, constraints)) return out;
    }
    throw projection_error("separation repair did not converge (constraints unsatisfiable?)");
}

std::array<Displacement, 7> local_actions(const BeamParams& p) {
    return {Displacement{0.0, 0.0, 0.0},
            Displacement{p.step_xy, 0.0, 0.0},
            Displacement{-p.step_xy, 0.0, 0.0},
            Displacement{0.0, p.step_xy, 0.0},
            Displacement{0.0, -p.step_xy, 0.0},
            Displacement{0.0, 0.0, p.step_h},
            Displacement{0.0, 0.0, -p.step_h}};
}

bool apply_action(Deployment& deployment, int uav_index, const Displacement& action,
                  const DeploymentConstraints& constraints) {
    if (uav_index < 0 || uav_index >= deployment.size())
        throw std::invalid_argument("uav index out of range");
    UavPosition moved = deployment.positions[static_cast<std::size_t>(uav_index)];
    moved.x += action.dx;
    moved.y += action.dy;
    moved.h += action.dh;
    clamp_position(moved, constraints);
    // Repair separation by pushing only this UAV away from violated
    // neighbours; the rest of the deployment stays frozen.
    for (int round = 0; round < 20; ++round) {
        int worst = -1;
        double worst_dist = constraints.d_min;
        for (int mp = 0; mp < deployment.size(); ++mp) {
            if (mp == uav_index) continue;
            const double dist = uav_distance(moved, deployment.positions[static_cast<std::size_t>(mp)]);
            if (dist < worst_dist) {
                worst_dist = dist;
                worst = mp;
            }
        }
        if (worst < 0) {
            deployment.positions[static_cast<std::size_t>(uav_index)] = moved;
            return true;
        }
        const auto& other = deployment.positions[static_cast<std::size_t>(worst)];
        double ux = moved.x - other.x, uy = moved.y - other.y, uh = moved.h - other.h;
        const double dist = std::hypot(ux, uy, uh);
        if (dist > 0.0) {
            ux /= dist;
            uy /= dist;
            uh /= dist;
        } else {
            const auto dir = split_direction(uav_index, worst, round);
            ux = dir.dx;
            uy = dir.dy;
            uh = 0.0;
        }
        const double push = constraints.d_min * 1.01 - dist;
        moved.x += push * ux;
        moved.y += push * uy;
        moved.h += push * uh;
        clamp_position(moved, constraints);
    }
    return false;
}

namespace {

struct AppliedStep {
    Deployment state;
    bool moved = false;
};

AppliedStep try_action(const Deployment& base, int uav, const Displacement& action,
                       const DeploymentConstraints& constraints) {
    AppliedStep step{base, false};
    step.moved = apply_action(step.state, uav, action, constraints);
    if (!step.moved) step.state = base;
    return step;
}

} // namespace

double rollout_score(int uav_index, std::span<const Displacement> actions,
                     const Deployment& deployment, const Scenario& scenario,
                     const ChannelParams& channel, const UtilityWeights& weights,
                     const DeploymentConstraints& constraints, const BeamParams& params) {
    if (actions.empty()) throw std::invalid_argument("rollout requires at least one action");
    UtilityEvaluator evaluator(scenario, channel, weights);
    const double base_value = evaluator.value(deployment);
    Deployment state = deployment;
    double score = 0.0;
    double disc = 1.0;
    for (const auto& action : actions) {
        apply_action(state, uav_index, action, constraints); // blocked step: stay
        score += disc * (evaluator.value(state) - base_value);
        disc *= params.discount;
    }
    return score;
}

std::pair<Deployment, OptimizerTrace> pso_init(UtilityEvaluator& evaluator,
                                               const DeploymentConstraints& constraints,
                                               const PsoParams& params, int num_uavs) {
    if (num_uavs < 1) throw std::invalid_argument("num_uavs must be >= 1");
    if (params.num_particles < 1) throw std::invalid_argument("num_particles must be >= 1");
    const Region& region = constraints.region;
    Rng rng(params.seed);

    const int dims = 3 * num_uavs;
    const double vmax_x = params.velocity_clamp * region.width;
    const double vmax_y = params.velocity_clamp * region.height;
    const double vmax_h = params.velocity_clamp * (constraints.h_max - constraints.h_min);

    std::vector<Deployment> position(static_cast<std::size_t>(params.num_particles));
    std::vector<std::vector<double>> velocity(
        static_cast<std::size_t>(params.num_particles), std::vector<double>(dims, 0.0));
    std::vector<Deployment> best_position(static_cast<std::size_t>(params.num_particles));
    std::vector<double> best_value(static_cast<std::size_t>(params.num_particles));

    Deployment global_best;
    double global_value = -std::numeric_limits<double>::infinity();

    for (int i = 0; i < params.num_particles; ++i) {
        Deployment d;
        d.positions.reserve(static_cast<std::size_t>(num_uavs));
        for (int m = 0; m < num_uavs; ++m) {
            d.positions.push_back(
                {rng.uniform(region.origin.x, region.origin.x + region.width),
                 rng.uniform(region.origin.y, region.origin.y + region.height),
                 rng.uniform(constraints.h_min, constraints.h_max)});
        }
        d = project_feasible(d, constraints);
        const double value = evaluator.value(d);
        position[static_cast<std::size_t>(i)] = d;
        best_position[static_cast<std::size_t>(i)] = d;
        best_value[static_cast<std::size_t>(i)] = value;
        if (value > global_value) {
            global_value = value;
            global_best = d;
        }
    }

    OptimizerTrace trace;
    trace.points.push_back({"pso", 0, global_value, evaluator.evaluations()});

    for (int it = 1; it <= params.iterations; ++it) {
        for (int i = 0; i < params.num_particles; ++i) {
            auto& d = position[static_cast<std::size_t>(i)];
            auto& v = velocity[static_cast<std::size_t>(i)];
            const auto& pb = best_position[static_cast<std::size_t>(i)];
            for (int m = 0; m < num_uavs; ++m) {
                const auto& q = d.positions[static_cast<std::size_t>(m)];
                const auto& qp = pb.positions[static_cast<std::size_t>(m)];
                const auto& qg = global_best.positions[static_cast<std::size_t>(m)];
                const double cur[3] = {q.x, q.y, q.h};
                const double pbest[3] = {qp.x, qp.y, qp.h};
                const double gbest[3] = {qg.x, qg.y, qg.h};
                const double vmax[3] = {vmax_x, vmax_y, vmax_h};
                for (int axis = 0; axis < 3; ++axis) {
                    const double r1 = rng.uniform01();
                    const double r2 = rng.uniform01();
                    double& vel = v[static_cast<std::size_t>(3 * m + axis)];
                    vel = params.inertia * vel +
                          params.cognitive * r1 * (pbest[axis] - cur[axis]) +
                          params.social * r2 * (gbest[axis] - cur[axis]);
                    vel = clamp(vel, -vmax[axis], vmax[axis]);
                }
                auto& qm = d.positions[static_cast<std::size_t>(m)];
                qm.x += v[static_cast<std::size_t>(3 * m + 0)];
                qm.y += v[static_cast<std::size_t>(3 * m + 1)];
                qm.h += v[static_cast<std::size_t>(3 * m + 2)];
            }
            d = project_feasible(d, constraints);
            const double value = evaluator.value(d);
            if (value > best_value[static_cast<std::size_t>(i)]) {
                best_value[static_cast<std::size_t>(i)] = value;
                best_position[static_cast<std::size_t>(i)] = d;
            }
            if (value > global_value) {
                global_value = value;
                global_best = d;
            }
        }
        trace.points.push_back({"pso", it, global_value, evaluator.evaluations()});
    }

    trace.evaluations = evaluator.evaluations();
    return {global_best, trace};
}

namespace {

struct BeamItem {
    Deployment state;   // deployment after the whole prefix
    double score = 0.0; // discounted improvement sum
    int first_action = 0;
    double first_delta = 0.0;
    double first_value = 0.0;
};

} // namespace

std::pair<Deployment, OptimizerTrace> beam_refine(UtilityEvaluator& evaluator,
                                                  const Deployment& start,
                                                  const DeploymentConstraints& constraints,
                                                  const BeamParams& params) {
    if (params.horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (params.width < 1) throw std::invalid_argument("width must be >= 1");
    if (!feasible(start, constraints))
        throw std::invalid_argument("beam_refine requires a feasible starting deployment");

    const auto actions = local_actions(params);
    Deployment current = start;
    double current_value = evaluator.value(current);

    OptimizerTrace trace;
    trace.points.push_back({"beam", 0, current_value, evaluator.evaluations()});

    for (int pass = 1; pass <= params.max_passes; ++pass) {
        bool any_move = false;
        for (int m = 0; m < current.size(); ++m) {
            // Depth 1: expand all actions from the current deployment.
            std::vector<BeamItem> beam;
            for (int a = 0; a < static_cast<int>(actions.size()); ++a) {
                auto step = try_action(current, m, actions[static_cast<std::size_t>(a)], constraints);
                if (!step.moved && a != 0) continue; // blocked move: not a candidate
                const double value = evaluator.value(step.state);
                BeamItem item;
                item.state = std::move(step.state);
                item.score = value - current_value;
                item.first_action = a;
                item.first_delta = value - current_value;
                item.first_value = value;
                beam.push_back(std::move(item));
            }
            std::stable_sort(beam.begin(), beam.end(),
                             [](const BeamItem& a, const BeamItem& b) { return a.score > b.score; });
            if (static_cast<int>(beam.size()) > params.width)
                beam.resize(static_cast<std::size_t>(params.width));

            double disc = params.discount;
            for (int depth = 2; depth <= params.horizon; ++depth) {
                std::vector<BeamItem> next;
                next.reserve(beam.size() * actions.size());
                for (const auto& item : beam) {
                    for (int a = 0; a < static_cast<int>(actions.size()); ++a) {
                        auto step =
                            try_action(item.state, m, actions[static_cast<std::size_t>(a)], constraints);
                        if (!step.moved && a != 0) continue;
                        const double value = evaluator.value(step.state);
                        BeamItem child = item;
                        child.state = std::move(step.state);
                        child.score = item.score + disc * (value - current_value);
                        next.push_back(std::move(child));
                    }
                }
                std::stable_sort(next.begin(), next.end(),
                                 [](const BeamItem& a, const BeamItem& b) { return a.score > b.score; });
                if (static_cast<int>(next.size()) > params.width)
                    next.resize(static_cast<std::size_t>(params.width));
                beam = std::move(next);
                disc *= params.discount;
            }

            // Execute the first action of the highest-scoring sequence, but
            // only if its own one-step change does not lower the utility.
            int executed = 0;
            if (!beam.empty() && beam.front().first_action != 0 &&
                beam.front().first_delta >= 0.0) {
                const int a = beam.front().first_action;
                Deployment next_state = current;
                if (apply_action(next_state, m, actions[static_cast<std::size_t>(a)], constraints)) {
                    current = std::move(next_state);
                    current_value = beam.front().first_value;
                    executed = a;
                }
            }
            trace.executed.push_back({pass, m, executed});
            if (executed != 0) any_move = true;
        }
        trace.points.push_back({"beam", pass, current_value, evaluator.evaluations()});
        if (!any_move) break;
    }

    trace.evaluations = evaluator.evaluations();
    return {current, trace};
}

std::pair<Deployment, OptimizerTrace> pso_init(const Scenario& scenario,
                                               const ChannelParams& channel,
                                               const UtilityWeights& weights,
                                               const DeploymentConstraints& constraints,
                                               const PsoParams& params, int num_uavs) {
    UtilityEvaluator evaluator(scenario, channel, weights);
    return pso_init(evaluator, constraints, params, num_uavs);
}

std::pair<Deployment, OptimizerTrace> beam_refine(const Deployment& start,
                                                  const Scenario& scenario,
                                                  const ChannelParams& channel,
                                                  const UtilityWeights& weights,
                                                  const DeploymentConstraints& constraints,
                                                  const BeamParams& params) {
    UtilityEvaluator evaluator(scenario, channel, weights);
    return beam_refine(evaluator, start, constraints, params);
}

OptimizeResult ca3d_optimize(const Scenario& scenario, const ChannelParams& channel,
                             const UtilityWeights& weights,
                             const DeploymentConstraints& constraints,
                             const PsoParams& pso, const BeamParams& beam, int num_uavs) {
    UtilityEvaluator evaluator(scenario, channel, weights);
    auto [init, pso_trace] = pso_init(evaluator, constraints, pso, num_uavs);
    auto [refined, beam_trace] = beam_refine(evaluator, init, constraints, beam);

    OptimizeResult result;
    result.deployment = std::move(refined);
    result.report = evaluator.report(result.deployment);
    result.trace = std::move(pso_trace);
    result.trace.points.insert(result.trace.points.end(), beam_trace.points.begin(),
                               beam_trace.points.end());
    result.trace.executed = std::move(beam_trace.executed);
    result.trace.evaluations = evaluator.evaluations();
    return result;
}

std::string OptimizerTrace::csv_header() { return "stage,iteration,best_utility,evals"; }

std::string OptimizerTrace::to_csv() const {
    std::string out = csv_header() + "\n";
    for (const auto& p : points) {
        out += p.stage + "," + std::to_string(p.iteration) + "," + g9(p.best_utility) + "," +
               std::to_string(p.evals) + "\n";
    }
    return out;
}

} // namespace ca3d

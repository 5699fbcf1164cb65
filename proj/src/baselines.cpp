#include "ca3d/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ca3d/random.hpp"

namespace ca3d {

Deployment random_deploy(const Scenario& scenario, const DeploymentConstraints& constraints,
                         int num_uavs, std::uint64_t seed) {
    if (num_uavs < 1) throw std::invalid_argument("num_uavs must be >= 1");
    (void)scenario;
    const Region& region = constraints.region;
    Rng rng(seed);
    Deployment d;
    d.positions.reserve(static_cast<std::size_t>(num_uavs));
    for (int m = 0; m < num_uavs; ++m) {
        d.positions.push_back({rng.uniform(region.origin.x, region.origin.x + region.width),
                               rng.uniform(region.origin.y, region.origin.y + region.height),
                               rng.uniform(constraints.h_min, constraints.h_max)});
    }
    return project_feasible(d, constraints);
}

namespace {

std::vector<Point2> kmeans_centroids(const std::vector<Point2>& points, int k, Rng& rng) {
    std::vector<Point2> centers;
    centers.reserve(static_cast<std::size_t>(k));
    // k-means++ seeding
    centers.push_back(points[static_cast<std::size_t>(rng.next_u64() % points.size())]);
    std::vector<double> dist2(points.size());
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centers) {
                const double dx = points[i].x - c.x, dy = points[i].y - c.y;
                best = std::min(best, dx * dx + dy * dy);
            }
            dist2[i] = best;
            total += best;
        }
        if (total <= 0.0) {
            centers.push_back(points[rng.next_u64() % points.size()]);
            continue;
        }
        double pick = rng.uniform01() * total;
        std::size_t chosen = points.size() - 1;
        for (std::size_t i = 0; i < points.size(); ++i) {
            pick -= dist2[i];
            if (pick <= 0.0) {
                chosen = i;
                break;
            }
        }
        centers.push_back(points[chosen]);
    }
    // Lloyd iterations
    std::vector<int> assign(points.size(), 0);
    for (int iter = 0; iter < 50; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < points.size(); ++i) {
            int best_c = 0;
            double best = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double dx = points[i].x - centers[static_cast<std::size_t>(c)].x;
                const double dy = points[i].y - centers[static_cast<std::size_t>(c)].y;
                const double d2 = dx * dx + dy * dy;
                if (d2 < best) {
                    best = d2;
                    best_c = c;
                }
            }
            if (assign[i] != best_c) {
                assign[i] = best_c;
                changed = true;
            }
        }
        for (int c = 0; c < k; ++c) {
            double sx = 0.0, sy = 0.0;
            int count = 0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                if (assign[i] == c) {
                    sx += points[i].x;
                    sy += points[i].y;
                    ++count;
                }
            }
            if (count > 0) centers[static_cast<std::size_t>(c)] = {sx / count, sy / count};
        }
        if (!changed) break;
    }
    return centers;
}

} // namespace

Deployment fixed_placement(const Scenario& scenario, const DeploymentConstraints& constraints,
                           const FixedBaselineParams& params, int num_uavs,
                           std::uint64_t seed) {
    if (num_uavs < 1) throw std::invalid_argument("num_uavs must be >= 1");
    const double altitude =
        params.altitude > 0.0 ? params.altitude : 0.5 * (constraints.h_min + constraints.h_max);
    Rng rng(seed);
    Deployment d;
    d.positions.reserve(static_cast<std::size_t>(num_uavs));
    std::vector<Point2> user_points;
    user_points.reserve(scenario.users.size());
    for (const auto& u : scenario.users) user_points.push_back(u.position);

    if (user_points.empty() || num_uavs > static_cast<int>(user_points.size())) {
        // More gateways than users (or none): centroids for the users that
        // exist, the remainder spread uniformly at random.
        std::vector<Point2> centers;
        if (!user_points.empty())
            centers = kmeans_centroids(user_points, static_cast<int>(user_points.size()), rng);
        const Region& region = constraints.region;
        while (static_cast<int>(centers.size()) < num_uavs) {
            centers.push_back({rng.uniform(region.origin.x, region.origin.x + region.width),
                               rng.uniform(region.origin.y, region.origin.y + region.height)});
        }
        for (int m = 0; m < num_uavs; ++m)
            d.positions.push_back({centers[static_cast<std::size_t>(m)].x,
                                   centers[static_cast<std::size_t>(m)].y, altitude});
    } else {
        const auto centers = kmeans_centroids(user_points, num_uavs, rng);
        for (const auto& c : centers) d.positions.push_back({c.x, c.y, altitude});
    }
    return project_feasible(d, constraints);
}

EvaluationReport fixed_deploy_and_evaluate(const Scenario& scenario,
                                           const ChannelParams& channel,
                                           const UtilityWeights& weights,
                                           const DeploymentConstraints& constraints,
                                           const FixedBaselineParams& params, int num_uavs,
                                           std::uint64_t seed) {
    const Deployment d = fixed_placement(scenario, constraints, params, num_uavs, seed);
    EvalOptions options;
    options.cn_horizontal_range = params.local_radius;
    return utility(d, scenario, channel, weights, options);
}

std::pair<Deployment, OptimizerTrace> greedy_deploy(UtilityEvaluator& evaluator,
                                                    const DeploymentConstraints& constraints,
                                                    const BeamParams& beam, int num_uavs,
                                                    std::uint64_t seed) {
    Deployment current = random_deploy(evaluator.scenario(), constraints, num_uavs, seed);
    double current_value = evaluator.value(current);
    const auto actions = local_actions(beam);

    OptimizerTrace trace;
    trace.points.push_back({"greedy", 0, current_value, evaluator.evaluations()});

    for (int pass = 1; pass <= beam.max_passes; ++pass) {
        bool improved = false;
        for (int m = 0; m < current.size(); ++m) {
            int best_action = 0;
            double best_value = current_value; // the zero action scores DF = 0
            Deployment best_state;
            for (int a = 1; a < static_cast<int>(actions.size()); ++a) {
                Deployment candidate = current;
                if (!apply_action(candidate, m, actions[static_cast<std::size_t>(a)], constraints))
                    continue;
                const double value = evaluator.value(candidate);
                if (value > best_value) {
                    best_value = value;
                    best_action = a;
                    best_state = std::move(candidate);
                }
            }
            if (best_action != 0) {
                current = std::move(best_state);
                current_value = best_value;
                improved = true;
            }
            trace.executed.push_back({pass, m, best_action});
        }
        trace.points.push_back({"greedy", pass, current_value, evaluator.evaluations()});
        if (!improved) break;
    }

    trace.evaluations = evaluator.evaluations();
    return {current, trace};
}

std::pair<Deployment, OptimizerTrace> greedy_deploy(const Scenario& scenario,
                                                    const ChannelParams& channel,
                                                    const UtilityWeights& weights,
                                                    const DeploymentConstraints& constraints,
                                                    const BeamParams& beam, int num_uavs,
                                                    std::uint64_t seed) {
    UtilityEvaluator evaluator(scenario, channel, weights);
    return greedy_deploy(evaluator, constraints, beam, num_uavs, seed);
}

} // namespace ca3d

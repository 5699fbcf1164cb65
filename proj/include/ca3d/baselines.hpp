// Comparison deployment schemes: Random (uniform placement), Fixed (cluster
// placement with candidate CNs restricted to a small local region around each
// UAV projection), and Greedy (one-step hill climbing on the deployment
// utility with the same local action set as the beam stage).

#ifndef CA3D_BASELINES_HPP
#define CA3D_BASELINES_HPP

#include <cstdint>
#include <utility>

#include "ca3d/optimizer.hpp"

namespace ca3d {

struct FixedBaselineParams {
    double local_radius = 200.0; // max UAV-to-CN horizontal distance
    double altitude = 0.0;       // <= 0 selects (h_min + h_max) / 2
};

/// Uniform positions over region x [h_min, h_max], projected to feasibility.
Deployment random_deploy(const Scenario& scenario, const DeploymentConstraints& constraints,
                         int num_uavs, std::uint64_t seed);

/// K-means clustering of the user positions (k-means++ seeding, Lloyd
/// iterations); UAVs sit at the cluster centroids at the configured altitude,
/// projected to feasibility.
Deployment fixed_placement(const Scenario& scenario, const DeploymentConstraints& constraints,
                           const FixedBaselineParams& params, int num_uavs,
                           std::uint64_t seed);

/// Evaluates the Fixed scheme: cluster placement, with accessible sets and
/// candidate pairs filtered to CNs within local_radius of the serving UAV.
EvaluationReport fixed_deploy_and_evaluate(const Scenario& scenario,
                                           const ChannelParams& channel,
                                           const UtilityWeights& weights,
                                           const DeploymentConstraints& constraints,
                                           const FixedBaselineParams& params, int num_uavs,
                                           std::uint64_t seed);

/// Starts from random_deploy(seed) and repeatedly sweeps the UAVs in index
/// order, each time applying the single local action with the largest
/// immediate utility improvement (staying put preferred on ties); stops after
/// a sweep with no strict improvement or after beam.max_passes sweeps.
std::pair<Deployment, OptimizerTrace> greedy_deploy(const Scenario& scenario,
                                                    const ChannelParams& channel,
                                                    const UtilityWeights& weights,
                                                    const DeploymentConstraints& constraints,
                                                    const BeamParams& beam, int num_uavs,
                                                    std::uint64_t seed);

/// Instrumented variant (see optimizer.hpp).
std::pair<Deployment, OptimizerTrace> greedy_deploy(UtilityEvaluator& evaluator,
                                                    const DeploymentConstraints& constraints,
                                                    const BeamParams& beam, int num_uavs,
                                                    std::uint64_t seed);

} // namespace ca3d

#endif // CA3D_BASELINES_HPP

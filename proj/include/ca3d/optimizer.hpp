// Two-stage cooperative deployment optimizer: PSO global initialization over
// the UAV position matrix, then beam-search local refinement with discounted
// multi-step rollouts. Every candidate deployment is made feasible before it
// is evaluated, so traces are monotone and outputs always satisfy the
// deployment constraints.

#ifndef CA3D_OPTIMIZER_HPP
#define CA3D_OPTIMIZER_HPP

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ca3d/accessibility.hpp"

namespace ca3d {

struct PsoParams {
    int num_particles = 30;
    int iterations = 100;
    double inertia = 0.7;
    double cognitive = 1.5;
    double social = 1.5;
    double velocity_clamp = 0.2; // max speed as a fraction of each axis extent
    std::uint64_t seed = 0;
};

struct BeamParams {
    double step_xy = 100.0; // meters per horizontal action
    double step_h = 20.0;   // meters per vertical action
    int horizon = 3;        // rollout depth H
    double discount = 0.9;  // rho in (0,1]; 0 collapses to one-step lookahead
    int width = 4;          // beam width W
    int max_passes = 50;    // upper bound on refinement sweeps
};

/// One local move of a single UAV.
struct Displacement {
    double dx = 0.0;
    double dy = 0.0;
    double dh = 0.0;
};

struct TracePoint {
    std::string stage; // "pso", "beam" or "greedy"
    int iteration = 0;
    double best_utility = 0.0;
    long long evals = 0; // cumulative utility evaluations at this point
};

struct ExecutedAction {
    int pass = 0;
    int uav = 0;
    int action = 0; // index into local_actions(); 0 when the UAV stayed put
};

struct OptimizerTrace {
    std::vector<TracePoint> points;
    std::vector<ExecutedAction> executed;
    long long evaluations = 0;

    static std::string csv_header(); // "stage,iteration,best_utility,evals"
    std::string to_csv() const;
};

class projection_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Projection onto the feasible deployment set: altitudes and horizontal
/// coordinates are clamped to their bounds; separation violations are
/// repaired by symmetric pairwise repulsion to 1.01 * d_min (coincident pairs
/// split along a deterministic pseudo-random direction), re-clamping after
/// every round. Feasible inputs are returned unchanged. Throws
/// projection_error when the repair has not converged after 100 rounds.
Deployment project_feasible(const Deployment& deployment,
                            const DeploymentConstraints& constraints);

/// The 7-element local action set, in a fixed order: stay, +x, -x, +y, -y,
/// +h, -h. The zero action comes first so score ties prefer staying put.
std::array<Displacement, 7> local_actions(const BeamParams& params);

/// Applies one action to UAV `uav_index` only: the move is clamped to the
/// region / altitude bounds and separation conflicts are repaired by moving
/// this UAV alone. Returns false (deployment untouched) when no feasible
/// single-UAV repair exists.
bool apply_action(Deployment& deployment, int uav_index, const Displacement& action,
                  const DeploymentConstraints& constraints);

/// Discounted rollout score J = sum_l rho^(l-1) (F(Q_l) - F(Q_0)) for a
/// candidate action sequence of UAV `uav_index` (all other UAVs frozen).
/// Steps whose action cannot be applied leave the UAV in place for that step.
double rollout_score(int uav_index, std::span<const Displacement> actions,
                     const Deployment& deployment, const Scenario& scenario,
                     const ChannelParams& channel, const UtilityWeights& weights,
                     const DeploymentConstraints& constraints, const BeamParams& params);

// --- stage entry points ---

std::pair<Deployment, OptimizerTrace> pso_init(const Scenario& scenario,
                                               const ChannelParams& channel,
                                               const UtilityWeights& weights,
                                               const DeploymentConstraints& constraints,
                                               const PsoParams& params, int num_uavs);

std::pair<Deployment, OptimizerTrace> beam_refine(const Deployment& start,
                                                  const Scenario& scenario,
                                                  const ChannelParams& channel,
                                                  const UtilityWeights& weights,
                                                  const DeploymentConstraints& constraints,
                                                  const BeamParams& params);

struct OptimizeResult {
    Deployment deployment;
    EvaluationReport report;
    OptimizerTrace trace;
};

/// PSO initialization followed by beam refinement; deterministic given
/// pso.seed, final utility >= the PSO stage's best.
OptimizeResult ca3d_optimize(const Scenario& scenario, const ChannelParams& channel,
                             const UtilityWeights& weights,
                             const DeploymentConstraints& constraints,
                             const PsoParams& pso, const BeamParams& beam, int num_uavs);

// Instrumented variants sharing a caller-owned evaluator (used by tests to
// observe every evaluated deployment and by ca3d_optimize to keep one
// cumulative evaluation counter across both stages).
std::pair<Deployment, OptimizerTrace> pso_init(UtilityEvaluator& evaluator,
                                               const DeploymentConstraints& constraints,
                                               const PsoParams& params, int num_uavs);
std::pair<Deployment, OptimizerTrace> beam_refine(UtilityEvaluator& evaluator,
                                                  const Deployment& start,
                                                  const DeploymentConstraints& constraints,
                                                  const BeamParams& params);

} // namespace ca3d

#endif // CA3D_OPTIMIZER_HPP

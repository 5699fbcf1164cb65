// Deployment evaluation: accessible computing sets, unique accessible
// capacity (Psi), pairwise overlap penalty (Omega), task-level UAV-CN pair
// selection, success probability, the scalar deployment utility
// F = alpha*Psi + beta*P_succ - gamma*Omega, and feasibility checking.
//
// Capacities are stored in Hz; Psi and Omega are reported in GHz (Hz / 1e9),
// matching the scale the utility weights are calibrated for.

#ifndef CA3D_ACCESSIBILITY_HPP
#define CA3D_ACCESSIBILITY_HPP

#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ca3d/channel.hpp"
#include "ca3d/scenario.hpp"

namespace ca3d {

/// Multi-UAV deployment Q; positions_[m] is UAV m (0-based indices
/// throughout the API).
struct Deployment {
    std::vector<UavPosition> positions;

    int size() const { return static_cast<int>(positions.size()); }
};

/// 3D Euclidean distance between two UAV positions.
double uav_distance(const UavPosition& a, const UavPosition& b);

struct DeploymentConstraints {
    double h_min = 100.0;
    double h_max = 300.0;
    double d_min = 0.0; // minimum pairwise 3D separation
    Region region;      // horizontal bounds
};

/// Scale-calibration coefficients of the deployment utility.
struct UtilityWeights {
    double alpha = 0.2;  // per GHz of unique capacity
    double beta = 1.5e4; // per unit of success probability
    double gamma = 0.1;  // per GHz of pairwise overlap
};

/// Selected (UAV, CN) pair for one user; indices into the deployment /
/// scenario node list.
struct PairChoice {
    int uav = -1;
    int cn = -1;
    double latency = std::numeric_limits<double>::infinity();
};

struct EvaluationReport {
    double psi_ghz = 0.0;
    double omega_ghz = 0.0;
    double p_succ = 0.0;
    double utility = 0.0;
    std::vector<std::optional<PairChoice>> per_user_assignment;

    static std::string csv_header(); // "psi_ghz,omega_ghz,p_succ,utility"
    std::string csv_row() const;     // 9 significant digits
};

/// Evaluation variants. cn_horizontal_range restricts candidate CNs to those
/// within that horizontal distance of the serving UAV's ground projection
/// (used by the Fixed baseline); infinity means no restriction.
struct EvalOptions {
    double cn_horizontal_range = std::numeric_limits<double>::infinity();
};

/// True iff every altitude is within [h_min, h_max], every horizontal
/// position inside the region, and every UAV pair >= d_min apart in 3D.
bool feasible(const Deployment& deployment, const DeploymentConstraints& constraints);

/// CN ids n for which some user k meets its deadline via UAV `uav_index`
/// (inclusive check, latency <= deadline).
std::set<int> accessible_set(int uav_index, const Deployment& deployment,
                             const Scenario& scenario, const ChannelParams& params,
                             const EvalOptions& options = {});

/// Capacity sum (GHz) over the union of all UAVs' accessible sets.
double unique_capacity(const Deployment& deployment, const Scenario& scenario,
                       const ChannelParams& params, const EvalOptions& options = {});

/// Capacity sum (GHz) over the intersection of two UAVs' accessible sets.
/// Throws std::invalid_argument when m == m_other.
double pairwise_overlap(int m, int m_other, const Deployment& deployment,
                        const Scenario& scenario, const ChannelParams& params,
                        const EvalOptions& options = {});

/// Average pairwise duplicated capacity (GHz); exactly 0 for a single UAV.
double overlap_penalty(const Deployment& deployment, const Scenario& scenario,
                       const ChannelParams& params, const EvalOptions& options = {});

/// Minimum-latency deadline-feasible pair for one user, or nullopt. Ties are
/// broken toward the lower UAV index, then the lower CN index.
std::optional<PairChoice> select_pair(int user_index, const Deployment& deployment,
                                      const Scenario& scenario, const ChannelParams& params,
                                      const EvalOptions& options = {});

/// Fraction of users with a deadline-feasible pair. Throws for K = 0.
double success_probability(const Deployment& deployment, const Scenario& scenario,
                           const ChannelParams& params, const EvalOptions& options = {});

/// Full evaluation in a single pass (accessible sets are computed once and
/// reused across Psi, Omega and P_succ).
EvaluationReport utility(const Deployment& deployment, const Scenario& scenario,
                         const ChannelParams& params, const UtilityWeights& weights,
                         const EvalOptions& options = {});

/// Evaluation engine with reusable scratch buffers, an evaluation counter and
/// an optional per-evaluation observer. One instance is not thread-safe; use
/// one instance per thread for concurrent evaluation.
class UtilityEvaluator {
public:
    UtilityEvaluator(const Scenario& scenario, const ChannelParams& params,
                     const UtilityWeights& weights, EvalOptions options = {});

    /// Utility value only (skips the per-user assignment vector).
    double value(const Deployment& deployment);

    EvaluationReport report(const Deployment& deployment);

    long long evaluations() const { return evaluations_; }

    /// Invoked with every deployment passed to value()/report().
    void set_observer(std::function<void(const Deployment&)> observer) {
        observer_ = std::move(observer);
    }

    const Scenario& scenario() const { return *scenario_; }
    const UtilityWeights& weights() const { return weights_; }

private:
    void compute(const Deployment& deployment, EvaluationReport& out, bool want_assignment);

    const Scenario* scenario_;
    ChannelParams params_;
    UtilityWeights weights_;
    EvalOptions options_;
    long long evaluations_ = 0;
    std::function<void(const Deployment&)> observer_;

    // scratch, reused across evaluations
    std::vector<double> uplink_;      // K x M
    std::vector<std::uint8_t> access_; // M x N
    std::vector<std::uint8_t> cn_in_union_;
    EvaluationReport scratch_report_;
};

} // namespace ca3d

#endif // CA3D_ACCESSIBILITY_HPP

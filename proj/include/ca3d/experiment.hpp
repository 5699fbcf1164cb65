// Experiment harness: JSON config files, the two sweep experiments (two-UAV
// spacing sweep and per-scheme UAV-count sweep), single runs with before /
// after deployment dumps, and seed-aggregated plot data emission.
//
// All result tables are byte-deterministic for a given config; wall-clock
// measurements go to a separate timing table.

#ifndef CA3D_EXPERIMENT_HPP
#define CA3D_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "ca3d/baselines.hpp"
#include "ca3d/optimizer.hpp"

namespace ca3d {

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Scheme { ca3d, random, fixed, greedy };

Scheme scheme_from_string(const std::string& name); // throws config_error
std::string to_string(Scheme scheme);

struct ScenarioSpec {
    std::string kind = "hotspot"; // "hotspot" or "random"
    Region region;
    int num_users = 50;
    Point2 hotspot_center{0.0, 0.0};
    double hotspot_radius = 800.0;
    int num_nodes = 60;
    double capacity_min = 2e9;  // Hz
    double capacity_max = 10e9; // Hz
    // CNs closer than this to the hotspot center are resampled, modelling a
    // demand core without usable edge capacity; 0 keeps the field uniform.
    double cn_exclusion_radius = 0.0;
    Task task;
};

struct SpacingSpec {
    std::vector<double> altitudes;
    std::vector<double> values; // inter-UAV distances, meters
};

struct ExperimentConfig {
    ScenarioSpec scenario;
    ChannelParams channel;
    UtilityWeights weights;
    DeploymentConstraints constraints;
    PsoParams pso;
    BeamParams beam;
    FixedBaselineParams fixed;
    std::vector<Scheme> schemes{Scheme::ca3d};
    std::vector<std::uint64_t> seeds{1};
    std::vector<int> uav_counts{8};
    int num_uavs = 3; // for single runs
    SpacingSpec spacing;

    void validate() const; // throws config_error
};

ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig config_from_json(const std::string& text);

/// Builds the per-seed world: users by the configured distribution, nodes
/// uniform with U[capacity_min, capacity_max] capacities. Derived seeds keep
/// user and node streams independent.
Scenario make_scenario(const ScenarioSpec& spec, std::uint64_t seed);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    bool has_errors = false;

    std::string to_string() const;
    void write(const std::filesystem::path& path) const;
};

/// Two UAVs at (center ± d/2, center_y) for every (altitude, spacing, seed);
/// spacings below d_min produce a "skipped" row. Columns:
/// altitude_m,spacing_m,seed,psi_ghz,omega_ghz,p_succ,utility,status
CsvTable run_spacing_sweep(const ExperimentConfig& config);

struct UavSweepResult {
    CsvTable results; // scheme,num_uavs,seed,psi_ghz,omega_ghz,p_succ,utility,status
    CsvTable timing;  // scheme,num_uavs,seed,wall_ms
};

/// Runs every (scheme, M, seed) cell; failures become "error" rows and the
/// sweep continues.
UavSweepResult run_uav_count_sweep(const ExperimentConfig& config);

struct SingleRunResult {
    Deployment initial; // seed-matched random deployment (before picture)
    Deployment final_deployment;
    EvaluationReport report;
    OptimizerTrace trace;
};

/// Requires exactly one scheme; uses num_uavs and the first seed.
SingleRunResult run_single(const ExperimentConfig& config);

std::string deployment_to_json(const Deployment& deployment);
Deployment deployment_from_json(const std::string& text);

/// Aggregates mean and sample standard deviation over seeds per grid point;
/// writes one CSV per metric panel into out_dir. kind is "spacing" or "uavs".
void emit_plot_data(const CsvTable& table, const std::string& kind,
                    const std::filesystem::path& out_dir);

} // namespace ca3d

#endif // CA3D_EXPERIMENT_HPP

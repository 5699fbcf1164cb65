// World instances: ground users with offloadable tasks, ground computing
// nodes with heterogeneous capacities, and the rectangular service region.
//
// Units: meters for all lengths, bits for data sizes, seconds for times,
// Hz (CPU cycles per second) for computing capacities.

#ifndef CA3D_SCENARIO_HPP
#define CA3D_SCENARIO_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ca3d {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Point2& a, const Point2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

/// Axis-aligned rectangular service area.
struct Region {
    double width = 4000.0;
    double height = 4000.0;
    Point2 origin{-2000.0, -2000.0};

    bool contains(const Point2& p) const {
        return p.x >= origin.x && p.x <= origin.x + width &&
               p.y >= origin.y && p.y <= origin.y + height;
    }
    Point2 center() const { return {origin.x + 0.5 * width, origin.y + 0.5 * height}; }
    double area() const { return width * height; }
    double diagonal() const { return std::hypot(width, height); }
};

/// Offloadable task profile: input size L, CPU demand C, deadline D_max.
struct Task {
    double input_bits = 4e7;
    double cycles = 1e9;
    double deadline = 1.0;
};

struct GroundUser {
    int id = 0; // 1-based, contiguous within a scenario
    Point2 position;
    Task task;
};

struct ComputingNode {
    int id = 0; // 1-based, contiguous within a scenario
    Point2 position;
    double capacity = 0.0; // Hz (cycles/s)
};

struct Scenario {
    Region region;
    std::vector<GroundUser> users;
    std::vector<ComputingNode> nodes;

    /// Throws std::invalid_argument on any violated invariant (positivity,
    /// id contiguity, user containment).
    void validate() const;
};

// --- generators (pure given seed) ---

/// Users uniform on the disk(center, radius) ∩ region.
/// Throws std::invalid_argument if the disk does not reach into the region.
std::vector<GroundUser> generate_hotspot_gus(const Region& region, int count,
                                             Point2 center, double radius,
                                             const Task& task, std::uint64_t seed);

/// Users uniform over the whole region.
std::vector<GroundUser> generate_random_gus(const Region& region, int count,
                                            const Task& task, std::uint64_t seed);

/// Nodes uniform over the region with capacities i.i.d. U[cap_min, cap_max].
std::vector<ComputingNode> generate_cns_uniform(const Region& region, int count,
                                                double cap_min, double cap_max,
                                                std::uint64_t seed);

/// Homogeneous PPP realization: Poisson(density * area) nodes, uniform
/// positions, every capacity equal to mean_capacity (the analytic two-UAV
/// model depends on the mean only).
std::vector<ComputingNode> sample_cns_ppp(const Region& region, double density,
                                          double mean_capacity, std::uint64_t seed);

// --- serialization (JSON; schema documented in the README) ---

void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

/// Throws nlohmann::json::parse_error on malformed input and
/// std::invalid_argument (with field context) on invariant violations.
Scenario load_scenario(const std::filesystem::path& path);

std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const std::string& text);

} // namespace ca3d

#endif // CA3D_SCENARIO_HPP

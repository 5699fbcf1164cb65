// Analytic two-UAV accessibility model: each UAV's accessible region is
// approximated by a ground disk of radius R_a around its projection, CNs
// follow a homogeneous PPP with density lambda_c and mean capacity fbar.
// Provides the equal-circle lens geometry, the expected unique capacity
// E[Psi(d)] = fbar * lambda_c * A_union(d), its closed-form derivative, the
// capacity-only optimal separation, and a numerical monotonicity/concavity
// verification over a separation grid.

#ifndef CA3D_ANALYTIC_HPP
#define CA3D_ANALYTIC_HPP

#include <string>
#include <vector>

#include "ca3d/channel.hpp"
#include "ca3d/scenario.hpp"

namespace ca3d {

struct DiskModelParams {
    double radius = 0.0;        // R_a, meters
    double density = 0.0;       // lambda_c, nodes / m^2
    double mean_capacity = 1.0; // fbar; E[Psi] is returned in fbar's units
    double min_sep = 0.0;       // d_min, meters
};

/// Largest horizontal UAV-to-CN distance at which the representative task
/// (user at horizontal offset `user_offset` from the UAV projection, CN with
/// capacity `mean_capacity`) still meets its deadline; bisection to 0.1 m
/// within [0, max_radius]. Returns 0 when even a CN at the projection is
/// infeasible, max_radius when every distance is feasible.
double effective_radius(double altitude, const Task& task, double user_offset,
                        const ChannelParams& params, double mean_capacity,
                        double max_radius);

/// Lens area of two radius-`radius` circles whose centers are `separation`
/// apart; exactly 0 for separation >= 2 * radius.
double overlap_area(double separation, double radius);

/// Union area; complement identity union + overlap = 2*pi*R^2 holds exactly,
/// constant 2*pi*R^2 once the disks no longer overlap.
double union_area(double separation, double radius);

/// E[Psi(d)] = mean_capacity * density * union_area(d).
double expected_unique_capacity(double separation, const DiskModelParams& params);

/// Closed-form d/dd E[Psi(d)] = fbar * lambda_c * sqrt(4 R^2 - d^2), valid on
/// [0, 2R). Throws std::domain_error at or beyond 2R (kink against the
/// saturated regime).
double capacity_derivative(double separation, const DiskModelParams& params);

/// Capacity-only optimum max(d_min, 2 R).
double optimal_capacity_only_separation(const DiskModelParams& params);

struct Theorem1Row {
    double d = 0.0;
    double e_psi = 0.0;
    double first_diff = 0.0;  // NaN on the last row
    double second_diff = 0.0; // NaN on the last two rows
};

struct Theorem1Report {
    std::vector<Theorem1Row> rows;
    std::vector<int> monotonicity_violations; // row indices with diff <= -tol
    std::vector<int> concavity_violations;    // row indices with 2nd diff >= +tol
    bool saturated = false;                   // d_min >= 2R: E[Psi] constant, empty grid

    bool passed() const {
        return monotonicity_violations.empty() && concavity_violations.empty();
    }
    std::string to_csv() const; // d,e_psi,first_diff,second_diff
};

/// Samples E[Psi] on a `grid_size`-point uniform grid over
/// [d_min, 2R - 1e-6 R] and checks all forward differences > 0 and all second
/// differences < 0, with 1e-9 relative slack. grid_size must be >= 3.
Theorem1Report verify_theorem1(const DiskModelParams& params, int grid_size);

} // namespace ca3d

#endif // CA3D_ANALYTIC_HPP

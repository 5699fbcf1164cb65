#include "ca3d/analytic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ca3d/format.hpp"

namespace ca3d {

namespace {

double representative_latency(double cn_offset, double altitude, const Task& task,
                              double user_offset, const ChannelParams& p,
                              double mean_capacity) {
    const double up_d = std::sqrt(user_offset * user_offset + altitude * altitude);
    const double up_rate =
        link_rate(p.p_user, channel_gain(up_d, elevation_angle_deg(user_offset, altitude), p), p);
    const double fwd_d = std::sqrt(cn_offset * cn_offset + altitude * altitude);
    const double fwd_rate =
        link_rate(p.p_uav, channel_gain(fwd_d, elevation_angle_deg(cn_offset, altitude), p), p);
    return task.input_bits / up_rate + task.input_bits / fwd_rate +
           task.cycles / mean_capacity;
}

} // namespace

double effective_radius(double altitude, const Task& task, double user_offset,
                        const ChannelParams& params, double mean_capacity,
                        double max_radius) {
    if (!(altitude > 0.0)) throw std::invalid_argument("altitude must be > 0");
    if (!(mean_capacity > 0.0)) throw std::invalid_argument("mean_capacity must be > 0");
    if (!(max_radius > 0.0)) throw std::invalid_argument("max_radius must be > 0");
    auto ok = [&](double r) {
        return representative_latency(r, altitude, task, user_offset, params, mean_capacity) <=
               task.deadline;
    };
    if (!ok(0.0)) return 0.0;
    if (ok(max_radius)) return max_radius;
    double lo = 0.0, hi = max_radius;
    while (hi - lo > 0.1) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

double overlap_area(double separation, double radius) {
    if (separation < 0.0) throw std::invalid_argument("separation must be >= 0");
    if (radius < 0.0) throw std::invalid_argument("radius must be >= 0");
    if (separation >= 2.0 * radius || radius == 0.0) return 0.0;
    const double half = separation / (2.0 * radius);
    return 2.0 * radius * radius * std::acos(half) -
           0.5 * separation * std::sqrt(4.0 * radius * radius - separation * separation);
}

double union_area(double separation, double radius) {
    return 2.0 * std::numbers::pi * radius * radius - overlap_area(separation, radius);
}

double expected_unique_capacity(double separation, const DiskModelParams& p) {
    return p.mean_capacity * p.density * union_area(separation, p.radius);
}

double capacity_derivative(double separation, const DiskModelParams& p) {
    if (separation < 0.0) throw std::invalid_argument("separation must be >= 0");
    if (separation >= 2.0 * p.radius)
        throw std::domain_error("capacity derivative is defined on [0, 2R) only");
    return p.mean_capacity * p.density *
           std::sqrt(4.0 * p.radius * p.radius - separation * separation);
}

double optimal_capacity_only_separation(const DiskModelParams& p) {
    return std::max(p.min_sep, 2.0 * p.radius);
}

Theorem1Report verify_theorem1(const DiskModelParams& p, int grid_size) {
    if (grid_size < 3) throw std::invalid_argument("grid_size must be >= 3");
    Theorem1Report report;
    const double hi = 2.0 * p.radius * (1.0 - 1e-6);
    if (p.min_sep >= hi) {
        // Saturated regime: both disks already disjoint at every feasible
        // separation, E[Psi] is constant and there is nothing to scan.
        report.saturated = true;
        return report;
    }
    const double lo = p.min_sep;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    report.rows.resize(static_cast<std::size_t>(grid_size));
    for (int i = 0; i < grid_size; ++i) {
        const double d = lo + (hi - lo) * static_cast<double>(i) / (grid_size - 1);
        report.rows[static_cast<std::size_t>(i)] = {d, expected_unique_capacity(d, p), nan, nan};
    }
    auto slack = [&](int i) {
        const double scale = std::max({std::abs(report.rows[static_cast<std::size_t>(i)].e_psi),
                                       std::abs(report.rows[static_cast<std::size_t>(i) + 1].e_psi),
                                       1.0});
        return 1e-9 * scale;
    };
    for (int i = 0; i + 1 < grid_size; ++i) {
        auto& row = report.rows[static_cast<std::size_t>(i)];
        row.first_diff = report.rows[static_cast<std::size_t>(i) + 1].e_psi - row.e_psi;
        if (row.first_diff <= -slack(i)) report.monotonicity_violations.push_back(i);
    }
    for (int i = 0; i + 2 < grid_size; ++i) {
        auto& row = report.rows[static_cast<std::size_t>(i)];
        row.second_diff =
            report.rows[static_cast<std::size_t>(i) + 1].first_diff - row.first_diff;
        if (row.second_diff >= slack(i)) report.concavity_violations.push_back(i);
    }
    return report;
}

std::string Theorem1Report::to_csv() const {
    std::string out = "d,e_psi,first_diff,second_diff\n";
    for (const auto& row : rows) {
        out += g9(row.d) + "," + g9(row.e_psi) + "," + g9(row.first_diff) + "," +
               g9(row.second_diff) + "\n";
    }
    return out;
}

} // namespace ca3d

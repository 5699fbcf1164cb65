#include <cmath>
#include <numbers>

#include "ca3d/analytic.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ca3d;

namespace {

ChannelParams reference_channel() {
    ChannelParams p;
    p.beta0 = 2e-3;
    p.p_user = 0.2;
    p.p_uav = 0.1;
    return p;
}

const Task kTask{4e7, 1e9, 1.0};

} // namespace

TEST_CASE("overlap area: coincident, tangent, lens value, continuity, monotone") {
    const double pi = std::numbers::pi;
    CHECK(overlap_area(0.0, 1.0) == doctest::Approx(pi).epsilon(1e-12));
    CHECK(overlap_area(2.0, 1.0) == 0.0);
    CHECK(overlap_area(5.0, 1.0) == 0.0);
    CHECK(overlap_area(1.0, 1.0) == doctest::Approx(1.228370).epsilon(1e-6));
    CHECK(overlap_area(0.0, 0.0) == 0.0);

    // continuity at d = 2R from the left
    CHECK(overlap_area(2.0 - 1e-9, 1.0) == doctest::Approx(0.0).epsilon(1e-6));

    double prev = overlap_area(0.0, 1.0);
    for (double d = 0.05; d <= 2.5; d += 0.05) {
        const double a = overlap_area(d, 1.0);
        CHECK(a <= prev + 1e-15);
        prev = a;
    }
    CHECK_THROWS_AS(overlap_area(-0.1, 1.0), std::invalid_argument);
}

TEST_CASE("overlap area against the stratified MC oracle") {
    for (double ratio : {0.2, 0.5, 1.0, 1.5, 1.9}) {
        const double r = 1.0;
        const double exact = overlap_area(ratio * r, r);
        const double mc = oracles::mc_disk_intersection(ratio * r, r, 1000, 42);
        CHECK(std::abs(mc - exact) / exact < 0.01);
    }
}

TEST_CASE("union area: identity, saturation") {
    const double pi = std::numbers::pi;
    CHECK(union_area(0.0, 1.0) == doctest::Approx(pi).epsilon(1e-12));
    CHECK(union_area(2.0, 1.0) == doctest::Approx(2.0 * pi).epsilon(1e-12));
    CHECK(union_area(7.0, 1.0) == doctest::Approx(2.0 * pi).epsilon(1e-12));
    for (double d = 0.0; d <= 3.0; d += 0.1) {
        CHECK(union_area(d, 1.0) + overlap_area(d, 1.0) == 2.0 * pi * 1.0 * 1.0);
    }
}

TEST_CASE("expected unique capacity: zero density, unit value, saturation") {
    DiskModelParams p{1.0, 1.0, 1.0, 0.0};
    CHECK(expected_unique_capacity(0.0, p) == doctest::Approx(std::numbers::pi).epsilon(1e-12));

    p.density = 0.0;
    CHECK(expected_unique_capacity(1.0, p) == 0.0);

    p = DiskModelParams{500.0, 1e-6, 6e9, 50.0};
    const double sat = expected_unique_capacity(1000.0, p);
    CHECK(expected_unique_capacity(1500.0, p) == sat);
    double prev = expected_unique_capacity(0.0, p);
    for (double d = 25.0; d <= 1500.0; d += 25.0) {
        const double v = expected_unique_capacity(d, p);
        CHECK(v >= prev - 1e-9 * std::abs(prev));
        prev = v;
    }
}

TEST_CASE("expected unique capacity against a PPP Monte Carlo oracle") {
    const DiskModelParams p{500.0, 2e-6, 6e9, 50.0};
    for (double separation : {200.0, 700.0}) {
        const int trials = 2000;
        double sum = 0.0, sum_sq = 0.0;
        for (int t = 0; t < trials; ++t) {
            const double value = oracles::ppp_union_capacity(separation, p.radius, p.density,
                                                             p.mean_capacity, 9000 + t);
            sum += value;
            sum_sq += value * value;
        }
        const double mean = sum / trials;
        const double var = (sum_sq - sum * sum / trials) / (trials - 1);
        const double se = std::sqrt(var / trials);
        CHECK(std::abs(mean - expected_unique_capacity(separation, p)) <= 3.0 * se);
    }
}

TEST_CASE("capacity derivative: closed form, finite differences, domain") {
    DiskModelParams unit{1.0, 1.0, 1.0, 0.0};
    CHECK(capacity_derivative(0.0, unit) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(capacity_derivative(2.0 - 1e-9, unit) == doctest::Approx(0.0).epsilon(1e-3));
    CHECK_THROWS_AS(capacity_derivative(2.0, unit), std::domain_error);
    CHECK_THROWS_AS(capacity_derivative(2.5, unit), std::domain_error);

    const DiskModelParams p{500.0, 1e-6, 6e9, 0.0};
    const double h = 1e-4 * p.radius;
    for (double ratio : {0.1, 0.5, 1.0, 1.5, 1.9}) {
        const double d = ratio * p.radius;
        const double fd =
            (expected_unique_capacity(d + h, p) - expected_unique_capacity(d - h, p)) / (2.0 * h);
        const double exact = capacity_derivative(d, p);
        CHECK(std::abs(fd - exact) / exact < 1e-6);
    }
}

TEST_CASE("capacity-only optimal separation") {
    CHECK(optimal_capacity_only_separation({500.0, 1.0, 1.0, 100.0}) == 1000.0);
    CHECK(optimal_capacity_only_separation({500.0, 1.0, 1.0, 1200.0}) == 1200.0);
    CHECK(optimal_capacity_only_separation({0.0, 1.0, 1.0, 75.0}) == 75.0);
}

TEST_CASE("verify_theorem1: clean grid, saturated regime, minimal grid") {
    const DiskModelParams p{1.0, 1.0, 1.0, 0.1};
    const auto report = verify_theorem1(p, 100);
    CHECK(report.passed());
    CHECK_FALSE(report.saturated);
    CHECK(report.rows.size() == 100);
    CHECK(report.rows.front().d == doctest::Approx(0.1));
    // last grid point sits at 2R(1 - 1e-6)
    CHECK(report.rows.back().d == doctest::Approx(2.0 * (1.0 - 1e-6)).epsilon(1e-9));

    const auto saturated = verify_theorem1({1.0, 1.0, 1.0, 2.5}, 100);
    CHECK(saturated.saturated);
    CHECK(saturated.rows.empty());
    CHECK(saturated.passed());

    const auto minimal = verify_theorem1({1.0, 1.0, 1.0, 0.5}, 3);
    CHECK(minimal.passed());
    CHECK(minimal.rows.size() == 3);
    CHECK(std::isfinite(minimal.rows[0].second_diff)); // exactly one second difference
    CHECK(std::isnan(minimal.rows[1].second_diff));

    CHECK_THROWS_AS(verify_theorem1(p, 2), std::invalid_argument);

    const std::string csv = report.to_csv();
    CHECK(csv.rfind("d,e_psi,first_diff,second_diff\n", 0) == 0);
}

TEST_CASE("effective radius: infeasible, unbounded, grid-scan oracle") {
    const ChannelParams p = reference_channel();

    // deadline 0 is infeasible even with the CN at the projection
    CHECK(effective_radius(100.0, Task{4e7, 1e9, 0.0}, 0.0, p, 6e9, 5000.0) == 0.0);

    // vanishing task on an infinitely fast node: feasible everywhere
    CHECK(effective_radius(100.0, Task{1e-9, 1.0, 1.0}, 0.0, p, 1e30, 5000.0) == 5000.0);

    // bisection agrees with a dense 1 m scan
    const double r = effective_radius(100.0, kTask, 0.0, p, 6e9, 6000.0);
    CHECK(r > 100.0);
    double scan = 0.0;
    for (double x = 0.0; x <= 6000.0; x += 1.0) {
        const UavPosition uav{0.0, 0.0, 100.0};
        const GroundUser user{1, {0.0, 0.0}, kTask};
        const ComputingNode cn{1, {x, 0.0}, 6e9};
        if (end_to_end_latency(user, uav, cn, p) <= kTask.deadline) scan = x;
    }
    CHECK(std::abs(r - scan) <= 1.0);

    CHECK_THROWS_AS(effective_radius(0.0, kTask, 0.0, p, 6e9, 1000.0), std::invalid_argument);
    CHECK_THROWS_AS(effective_radius(100.0, kTask, 0.0, p, 0.0, 1000.0), std::invalid_argument);
}

#include <cmath>
#include <filesystem>
#include <fstream>

#include "ca3d/scenario.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace ca3d;

namespace {

const Region kRegion{4000.0, 4000.0, {-2000.0, -2000.0}};
const Task kTask{4e7, 1e9, 1.0};

} // namespace

TEST_CASE("hotspot generator: empty, containment, determinism") {
    CHECK(generate_hotspot_gus(kRegion, 0, {0, 0}, 800.0, kTask, 7).empty());

    const auto users = generate_hotspot_gus(kRegion, 500, {0, 0}, 800.0, kTask, 7);
    REQUIRE(users.size() == 500);
    for (const auto& u : users) {
        CHECK(kRegion.contains(u.position));
        CHECK(std::hypot(u.position.x, u.position.y) <= 800.0);
        CHECK(u.task.input_bits == kTask.input_bits);
    }
    for (std::size_t i = 0; i < users.size(); ++i) CHECK(users[i].id == static_cast<int>(i) + 1);

    const auto again = generate_hotspot_gus(kRegion, 500, {0, 0}, 800.0, kTask, 7);
    for (std::size_t i = 0; i < users.size(); ++i) {
        CHECK(users[i].position.x == again[i].position.x);
        CHECK(users[i].position.y == again[i].position.y);
    }
}

TEST_CASE("hotspot generator: disk outside region rejected") {
    CHECK_THROWS_AS(generate_hotspot_gus(kRegion, 10, {9000, 9000}, 800.0, kTask, 1),
                    std::invalid_argument);
    // touching corner from outside (distance == radius) is still outside
    CHECK_THROWS_AS(generate_hotspot_gus(kRegion, 10, {2800, 2000}, 800.0, kTask, 1),
                    std::invalid_argument);
}

TEST_CASE("hotspot generator: mean distance matches the uniform-disk moment") {
    // E[r] = (2/3) R for a uniform disk; Var[r] = R^2/18.
    const int n = 10000;
    const double radius = 800.0;
    const auto users = generate_hotspot_gus(kRegion, n, {0, 0}, radius, kTask, 123);
    double sum = 0.0;
    for (const auto& u : users) sum += std::hypot(u.position.x, u.position.y);
    const double mean = sum / n;
    const double se = radius / std::sqrt(18.0 * n);
    CHECK(std::abs(mean - 2.0 / 3.0 * radius) <= 3.0 * se);
}

TEST_CASE("random GU generator: empty, determinism, moments") {
    CHECK(generate_random_gus(kRegion, 0, kTask, 5).empty());

    const auto a = generate_random_gus(kRegion, 200, kTask, 42);
    const auto b = generate_random_gus(kRegion, 200, kTask, 42);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].position.x == b[i].position.x);
        CHECK(a[i].position.y == b[i].position.y);
    }

    const int n = 10000;
    const auto users = generate_random_gus(kRegion, n, kTask, 99);
    double sx = 0.0, sy = 0.0;
    for (const auto& u : users) {
        CHECK(kRegion.contains(u.position));
        sx += u.position.x;
        sy += u.position.y;
    }
    // coordinate std is width / sqrt(12)
    const double se = kRegion.width / std::sqrt(12.0 * n);
    CHECK(std::abs(sx / n - 0.0) <= 3.0 * se);
    CHECK(std::abs(sy / n - 0.0) <= 3.0 * se);
}

TEST_CASE("uniform CN generator: degenerate interval, singleton, moments, errors") {
    const auto fixed_cap = generate_cns_uniform(kRegion, 50, 5e9, 5e9, 3);
    for (const auto& n : fixed_cap) CHECK(n.capacity == 5e9);

    const auto one = generate_cns_uniform(kRegion, 1, 2e9, 10e9, 4);
    REQUIRE(one.size() == 1);
    CHECK(kRegion.contains(one[0].position));
    CHECK(one[0].id == 1);

    CHECK_THROWS_AS(generate_cns_uniform(kRegion, 5, 0.0, 1e9, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_cns_uniform(kRegion, 5, -1.0, 1e9, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_cns_uniform(kRegion, 5, 2e9, 1e9, 1), std::invalid_argument);

    const int n = 10000;
    const auto nodes = generate_cns_uniform(kRegion, n, 2e9, 10e9, 77);
    double sum = 0.0;
    for (const auto& node : nodes) sum += node.capacity;
    const double se = (10e9 - 2e9) / std::sqrt(12.0 * n);
    CHECK(std::abs(sum / n - 6e9) <= 3.0 * se);
}

TEST_CASE("PPP sampler: empty at zero density, Poisson mean, determinism") {
    CHECK(sample_cns_ppp(kRegion, 0.0, 6e9, 1).empty());

    // density * area = 100
    const double density = 100.0 / kRegion.area();
    long long total = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t)
        total += static_cast<long long>(sample_cns_ppp(kRegion, density, 6e9, 1000 + t).size());
    const double mean = static_cast<double>(total) / trials;
    CHECK(mean >= 97.0);
    CHECK(mean <= 103.0);

    const auto a = sample_cns_ppp(kRegion, density, 6e9, 5);
    const auto b = sample_cns_ppp(kRegion, density, 6e9, 5);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].position.x == b[i].position.x);
        CHECK(a[i].capacity == 6e9);
    }
}

TEST_CASE("scenario save/load round-trip is lossless") {
    Scenario s;
    s.region = kRegion;
    s.users = generate_hotspot_gus(kRegion, 20, {0, 0}, 800.0, kTask, 11);
    s.nodes = generate_cns_uniform(kRegion, 15, 2e9, 10e9, 12);

    const auto path = std::filesystem::temp_directory_path() / "ca3d_scenario_test.json";
    save_scenario(s, path);
    const Scenario loaded = load_scenario(path);

    REQUIRE(loaded.users.size() == s.users.size());
    REQUIRE(loaded.nodes.size() == s.nodes.size());
    CHECK(loaded.region.width == s.region.width);
    CHECK(loaded.region.origin.x == s.region.origin.x);
    for (std::size_t i = 0; i < s.users.size(); ++i) {
        CHECK(loaded.users[i].position.x == s.users[i].position.x);
        CHECK(loaded.users[i].position.y == s.users[i].position.y);
        CHECK(loaded.users[i].task.input_bits == s.users[i].task.input_bits);
        CHECK(loaded.users[i].task.deadline == s.users[i].task.deadline);
    }
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        CHECK(loaded.nodes[i].position.x == s.nodes[i].position.x);
        CHECK(loaded.nodes[i].capacity == s.nodes[i].capacity);
    }
    std::filesystem::remove(path);
}

TEST_CASE("scenario load: truncated file is a parse error, bad values a validation error") {
    Scenario s;
    s.region = kRegion;
    s.users = generate_hotspot_gus(kRegion, 3, {0, 0}, 800.0, kTask, 11);
    s.nodes = generate_cns_uniform(kRegion, 2, 2e9, 10e9, 12);
    const std::string text = scenario_to_json(s);

    CHECK_THROWS_AS(scenario_from_json(text.substr(0, text.size() / 2)),
                    nlohmann::json::parse_error);

    std::string bad = text;
    const auto pos = bad.find("\"capacity_hz\"");
    REQUIRE(pos != std::string::npos);
    bad.insert(bad.find(':', pos) + 2, "-");
    CHECK_THROWS_AS(scenario_from_json(bad), std::invalid_argument);
}

TEST_CASE("scenario validation catches non-contiguous ids and foreign positions") {
    Scenario s;
    s.region = kRegion;
    s.users = generate_random_gus(kRegion, 3, kTask, 8);
    s.nodes = generate_cns_uniform(kRegion, 2, 2e9, 10e9, 9);
    s.validate();

    Scenario bad_ids = s;
    bad_ids.users[2].id = 7;
    CHECK_THROWS_AS(bad_ids.validate(), std::invalid_argument);

    Scenario outside = s;
    outside.users[0].position = {9999.0, 0.0};
    CHECK_THROWS_AS(outside.validate(), std::invalid_argument);
}

#include "ca3d/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ca3d/random.hpp"
#include "json.hpp"

namespace ca3d {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

double clamp(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

} // namespace

void Scenario::validate() const {
    require(region.width > 0.0, "region.width must be > 0");
    require(region.height > 0.0, "region.height must be > 0");
    for (std::size_t i = 0; i < users.size(); ++i) {
        const auto& u = users[i];
        require(u.id == static_cast<int>(i) + 1, "users[" + std::to_string(i) + "].id: ids must be contiguous from 1");
        require(region.contains(u.position), "users[" + std::to_string(i) + "].position outside region");
        require(u.task.input_bits > 0.0, "users[" + std::to_string(i) + "].task.input_bits must be > 0");
        require(u.task.cycles > 0.0, "users[" + std::to_string(i) + "].task.cycles must be > 0");
        require(u.task.deadline > 0.0, "users[" + std::to_string(i) + "].task.deadline must be > 0");
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& n = nodes[i];
        require(n.id == static_cast<int>(i) + 1, "nodes[" + std::to_string(i) + "].id: ids must be contiguous from 1");
        require(n.capacity > 0.0, "nodes[" + std::to_string(i) + "].capacity must be > 0");
    }
}

std::vector<GroundUser> generate_hotspot_gus(const Region& region, int count,
                                             Point2 center, double radius,
                                             const Task& task, std::uint64_t seed) {
    require(count >= 0, "count must be >= 0");
    require(radius > 0.0, "radius must be > 0");
    // Distance from the disk center to the rectangle; the disk must reach in.
    const double cx = clamp(center.x, region.origin.x, region.origin.x + region.width);
    const double cy = clamp(center.y, region.origin.y, region.origin.y + region.height);
    require(std::hypot(center.x - cx, center.y - cy) < radius,
            "hotspot disk lies entirely outside the region");

    Rng rng(seed);
    std::vector<GroundUser> users;
    users.reserve(static_cast<std::size_t>(count));
    // Polar sampling (r ∝ sqrt(u)) is exactly uniform on the disk; points
    // falling outside the region are rejected so the result is uniform on the
    // intersection.
    long attempts = 0;
    const long max_attempts = 10000L * (count + 1);
    while (static_cast<int>(users.size()) < count) {
        if (++attempts > max_attempts)
            throw std::invalid_argument("hotspot sampling: disk ∩ region too small");
        const double r = radius * std::sqrt(rng.uniform01());
        const double phi = 2.0 * std::numbers::pi * rng.uniform01();
        const Point2 p{center.x + r * std::cos(phi), center.y + r * std::sin(phi)};
        if (!region.contains(p)) continue;
        users.push_back(GroundUser{static_cast<int>(users.size()) + 1, p, task});
    }
    return users;
}

std::vector<GroundUser> generate_random_gus(const Region& region, int count,
                                            const Task& task, std::uint64_t seed) {
    require(count >= 0, "count must be >= 0");
    Rng rng(seed);
    std::vector<GroundUser> users;
    users.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const Point2 p{rng.uniform(region.origin.x, region.origin.x + region.width),
                       rng.uniform(region.origin.y, region.origin.y + region.height)};
        users.push_back(GroundUser{i + 1, p, task});
    }
    return users;
}

std::vector<ComputingNode> generate_cns_uniform(const Region& region, int count,
                                                double cap_min, double cap_max,
                                                std::uint64_t seed) {
    require(count >= 0, "count must be >= 0");
    require(cap_min > 0.0, "cap_min must be > 0");
    require(cap_min <= cap_max, "cap_min must be <= cap_max");
    Rng rng(seed);
    std::vector<ComputingNode> nodes;
    nodes.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const Point2 p{rng.uniform(region.origin.x, region.origin.x + region.width),
                       rng.uniform(region.origin.y, region.origin.y + region.height)};
        const double f = cap_min == cap_max ? cap_min : rng.uniform(cap_min, cap_max);
        nodes.push_back(ComputingNode{i + 1, p, f});
    }
    return nodes;
}

std::vector<ComputingNode> sample_cns_ppp(const Region& region, double density,
                                          double mean_capacity, std::uint64_t seed) {
    require(density >= 0.0, "density must be >= 0");
    require(mean_capacity > 0.0, "mean_capacity must be > 0");
    Rng rng(seed);
    const int count = rng.poisson(density * region.area());
    std::vector<ComputingNode> nodes;
    nodes.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const Point2 p{rng.uniform(region.origin.x, region.origin.x + region.width),
                       rng.uniform(region.origin.y, region.origin.y + region.height)};
        nodes.push_back(ComputingNode{i + 1, p, mean_capacity});
    }
    return nodes;
}

namespace {

using nlohmann::json;

json point_to_json(const Point2& p) { return json::array({p.x, p.y}); }

Point2 point_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw std::invalid_argument(field + ": expected [x, y]");
    return Point2{j[0].get<double>(), j[1].get<double>()};
}

double number_field(const json& j, const std::string& key, const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_number())
        throw std::invalid_argument(ctx + "." + key + ": missing or not a number");
    return j[key].get<double>();
}

} // namespace

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["region"] = {{"width", s.region.width},
                   {"height", s.region.height},
                   {"origin", point_to_json(s.region.origin)}};
    j["users"] = json::array();
    for (const auto& u : s.users) {
        j["users"].push_back({{"id", u.id},
                              {"position", point_to_json(u.position)},
                              {"task",
                               {{"input_bits", u.task.input_bits},
                                {"cycles", u.task.cycles},
                                {"deadline_s", u.task.deadline}}}});
    }
    j["nodes"] = json::array();
    for (const auto& n : s.nodes) {
        j["nodes"].push_back({{"id", n.id},
                              {"position", point_to_json(n.position)},
                              {"capacity_hz", n.capacity}});
    }
    return j.dump(2);
}

Scenario scenario_from_json(const std::string& text) {
    const json j = json::parse(text); // propagates json::parse_error with position
    Scenario s;
    if (!j.contains("region")) throw std::invalid_argument("region: missing");
    s.region.width = number_field(j["region"], "width", "region");
    s.region.height = number_field(j["region"], "height", "region");
    s.region.origin = point_from_json(j["region"].value("origin", json::array({0.0, 0.0})), "region.origin");
    for (const auto& ju : j.value("users", json::array())) {
        GroundUser u;
        u.id = static_cast<int>(number_field(ju, "id", "user"));
        u.position = point_from_json(ju.at("position"), "user.position");
        const auto& jt = ju.at("task");
        u.task.input_bits = number_field(jt, "input_bits", "user.task");
        u.task.cycles = number_field(jt, "cycles", "user.task");
        u.task.deadline = number_field(jt, "deadline_s", "user.task");
        s.users.push_back(u);
    }
    for (const auto& jn : j.value("nodes", json::array())) {
        ComputingNode n;
        n.id = static_cast<int>(number_field(jn, "id", "node"));
        n.position = point_from_json(jn.at("position"), "node.position");
        n.capacity = number_field(jn, "capacity_hz", "node");
        s.nodes.push_back(n);
    }
    s.validate();
    return s;
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << scenario_to_json(s) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

} // namespace ca3d

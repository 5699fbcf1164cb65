#include "ca3d/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "ca3d/format.hpp"
#include "ca3d/random.hpp"
#include "json.hpp"

namespace ca3d {

using nlohmann::json;

Scheme scheme_from_string(const std::string& name) {
    if (name == "ca3d") return Scheme::ca3d;
    if (name == "random") return Scheme::random;
    if (name == "fixed") return Scheme::fixed;
    if (name == "greedy") return Scheme::greedy;
    throw config_error("unknown scheme: " + name);
}

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::ca3d: return "ca3d";
        case Scheme::random: return "random";
        case Scheme::fixed: return "fixed";
        case Scheme::greedy: return "greedy";
    }
    return "?";
}

void ExperimentConfig::validate() const {
    if (scenario.kind != "hotspot" && scenario.kind != "random")
        throw config_error("scenario.kind must be \"hotspot\" or \"random\"");
    if (scenario.num_users < 1) throw config_error("scenario.num_users must be >= 1");
    if (scenario.num_nodes < 0) throw config_error("scenario.num_nodes must be >= 0");
    if (!(scenario.capacity_min > 0.0) || scenario.capacity_min > scenario.capacity_max)
        throw config_error("scenario capacity range invalid");
    if (scenario.cn_exclusion_radius < 0.0)
        throw config_error("scenario.cn_exclusion_radius must be >= 0");
    if (!(scenario.region.width > 0.0) || !(scenario.region.height > 0.0))
        throw config_error("scenario.region must have positive extent");
    try {
        channel.validate();
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
    if (weights.alpha < 0.0 || weights.beta < 0.0 || weights.gamma < 0.0)
        throw config_error("weights must be >= 0");
    if (!(constraints.h_min > 0.0) || constraints.h_min > constraints.h_max)
        throw config_error("constraints: need 0 < h_min <= h_max");
    if (constraints.d_min < 0.0) throw config_error("constraints.d_min must be >= 0");
    if (pso.num_particles < 1 || pso.iterations < 0)
        throw config_error("pso: need num_particles >= 1 and iterations >= 0");
    if (pso.inertia < 0.0 || pso.inertia > 1.0 || pso.cognitive < 0.0 || pso.social < 0.0)
        throw config_error("pso coefficients out of range");
    if (beam.horizon < 1 || beam.width < 1 || !(beam.step_xy > 0.0) || !(beam.step_h > 0.0))
        throw config_error("beam: need horizon >= 1, width >= 1, positive steps");
    if (beam.discount < 0.0 || beam.discount > 1.0)
        throw config_error("beam.discount must be in [0, 1]");
    if (!(fixed.local_radius > 0.0)) throw config_error("fixed_baseline.local_radius must be > 0");
    if (seeds.empty()) throw config_error("seed list must be non-empty");
    if (schemes.empty()) throw config_error("scheme list must be non-empty");
    for (int m : uav_counts)
        if (m < 1) throw config_error("uav_counts entries must be >= 1");
    if (num_uavs < 1) throw config_error("num_uavs must be >= 1");
}

namespace {

double jnum(const json& j, const char* key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

Point2 jpoint(const json& j, const char* key, Point2 fallback) {
    if (!j.contains(key)) return fallback;
    const auto& a = j.at(key);
    return Point2{a.at(0).get<double>(), a.at(1).get<double>()};
}

} // namespace

ExperimentConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    ExperimentConfig c;
    try {
        if (j.contains("scenario")) {
            const auto& js = j["scenario"];
            c.scenario.kind = js.value("kind", c.scenario.kind);
            if (js.contains("region")) {
                const auto& jr = js["region"];
                c.scenario.region.width = jnum(jr, "width", c.scenario.region.width);
                c.scenario.region.height = jnum(jr, "height", c.scenario.region.height);
                c.scenario.region.origin = jpoint(jr, "origin", c.scenario.region.origin);
            }
            c.scenario.num_users = static_cast<int>(jnum(js, "num_users", c.scenario.num_users));
            c.scenario.hotspot_center = jpoint(js, "hotspot_center", c.scenario.hotspot_center);
            c.scenario.hotspot_radius = jnum(js, "hotspot_radius", c.scenario.hotspot_radius);
            c.scenario.num_nodes = static_cast<int>(jnum(js, "num_nodes", c.scenario.num_nodes));
            c.scenario.capacity_min = jnum(js, "capacity_min_hz", c.scenario.capacity_min);
            c.scenario.capacity_max = jnum(js, "capacity_max_hz", c.scenario.capacity_max);
            c.scenario.cn_exclusion_radius =
                jnum(js, "cn_exclusion_radius", c.scenario.cn_exclusion_radius);
            if (js.contains("task")) {
                const auto& jt = js["task"];
                c.scenario.task.input_bits = jnum(jt, "input_bits", c.scenario.task.input_bits);
                c.scenario.task.cycles = jnum(jt, "cycles", c.scenario.task.cycles);
                c.scenario.task.deadline = jnum(jt, "deadline_s", c.scenario.task.deadline);
            }
        }
        if (j.contains("channel")) {
            const auto& jc = j["channel"];
            c.channel.a = jnum(jc, "a", c.channel.a);
            c.channel.b = jnum(jc, "b", c.channel.b);
            c.channel.beta0 = jnum(jc, "beta0", c.channel.beta0);
            c.channel.pathloss_exp = jnum(jc, "pathloss_exp", c.channel.pathloss_exp);
            c.channel.nlos_atten = jnum(jc, "nlos_atten", c.channel.nlos_atten);
            c.channel.bandwidth = jnum(jc, "bandwidth_hz", c.channel.bandwidth);
            c.channel.p_user = jnum(jc, "p_user_w", c.channel.p_user);
            c.channel.p_uav = jnum(jc, "p_uav_w", c.channel.p_uav);
            c.channel.noise = jnum(jc, "noise_w", c.channel.noise);
        }
        if (j.contains("weights")) {
            const auto& jw = j["weights"];
            c.weights.alpha = jnum(jw, "alpha", c.weights.alpha);
            c.weights.beta = jnum(jw, "beta", c.weights.beta);
            c.weights.gamma = jnum(jw, "gamma", c.weights.gamma);
        }
        if (j.contains("constraints")) {
            const auto& jc = j["constraints"];
            c.constraints.h_min = jnum(jc, "h_min", c.constraints.h_min);
            c.constraints.h_max = jnum(jc, "h_max", c.constraints.h_max);
            c.constraints.d_min = jnum(jc, "d_min", c.constraints.d_min);
        }
        c.constraints.region = c.scenario.region;
        if (j.contains("pso")) {
            const auto& jp = j["pso"];
            c.pso.num_particles = static_cast<int>(jnum(jp, "num_particles", c.pso.num_particles));
            c.pso.iterations = static_cast<int>(jnum(jp, "iterations", c.pso.iterations));
            c.pso.inertia = jnum(jp, "inertia", c.pso.inertia);
            c.pso.cognitive = jnum(jp, "cognitive", c.pso.cognitive);
            c.pso.social = jnum(jp, "social", c.pso.social);
            c.pso.velocity_clamp = jnum(jp, "velocity_clamp", c.pso.velocity_clamp);
        }
        if (j.contains("beam")) {
            const auto& jb = j["beam"];
            c.beam.step_xy = jnum(jb, "step_xy", c.beam.step_xy);
            c.beam.step_h = jnum(jb, "step_h", c.beam.step_h);
            c.beam.horizon = static_cast<int>(jnum(jb, "horizon", c.beam.horizon));
            c.beam.discount = jnum(jb, "discount", c.beam.discount);
            c.beam.width = static_cast<int>(jnum(jb, "width", c.beam.width));
            c.beam.max_passes = static_cast<int>(jnum(jb, "max_passes", c.beam.max_passes));
        }
        if (j.contains("fixed_baseline")) {
            const auto& jf = j["fixed_baseline"];
            c.fixed.local_radius = jnum(jf, "local_radius", c.fixed.local_radius);
            c.fixed.altitude = jnum(jf, "altitude", c.fixed.altitude);
        }
        if (j.contains("schemes")) {
            c.schemes.clear();
            for (const auto& s : j["schemes"]) c.schemes.push_back(scheme_from_string(s.get<std::string>()));
        }
        if (j.contains("seeds")) {
            c.seeds.clear();
            for (const auto& s : j["seeds"]) c.seeds.push_back(s.get<std::uint64_t>());
        } else if (j.contains("seed_range")) {
            c.seeds.clear();
            const std::uint64_t lo = j["seed_range"].at(0).get<std::uint64_t>();
            const std::uint64_t hi = j["seed_range"].at(1).get<std::uint64_t>();
            if (hi < lo) throw config_error("seed_range must be [lo, hi] with lo <= hi");
            for (std::uint64_t s = lo; s <= hi; ++s) c.seeds.push_back(s);
        }
        if (j.contains("uav_counts")) {
            c.uav_counts.clear();
            for (const auto& m : j["uav_counts"]) c.uav_counts.push_back(m.get<int>());
        }
        c.num_uavs = static_cast<int>(jnum(j, "num_uavs", c.num_uavs));
        if (j.contains("spacing")) {
            const auto& jsp = j["spacing"];
            c.spacing.altitudes.clear();
            for (const auto& a : jsp.value("altitudes", json::array()))
                c.spacing.altitudes.push_back(a.get<double>());
            c.spacing.values.clear();
            for (const auto& v : jsp.value("values", json::array()))
                c.spacing.values.push_back(v.get<double>());
        }
    } catch (const json::exception& e) {
        throw config_error(std::string("config field error: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return config_from_json(buf.str());
}

Scenario make_scenario(const ScenarioSpec& spec, std::uint64_t seed) {
    Scenario s;
    s.region = spec.region;
    if (spec.kind == "hotspot") {
        s.users = generate_hotspot_gus(spec.region, spec.num_users, spec.hotspot_center,
                                       spec.hotspot_radius, spec.task, mix_seed(seed, 1));
    } else {
        s.users = generate_random_gus(spec.region, spec.num_users, spec.task, mix_seed(seed, 1));
    }
    if (spec.cn_exclusion_radius <= 0.0) {
        s.nodes = generate_cns_uniform(spec.region, spec.num_nodes, spec.capacity_min,
                                       spec.capacity_max, mix_seed(seed, 2));
    } else {
        // uniform over the region minus the congested demand core
        Rng rng(mix_seed(seed, 2));
        long attempts = 0;
        const long max_attempts = 10000L * (spec.num_nodes + 1);
        while (static_cast<int>(s.nodes.size()) < spec.num_nodes) {
            if (++attempts > max_attempts)
                throw config_error("cn_exclusion_radius leaves too little area for the CNs");
            const Point2 p{
                rng.uniform(spec.region.origin.x, spec.region.origin.x + spec.region.width),
                rng.uniform(spec.region.origin.y, spec.region.origin.y + spec.region.height)};
            if (distance(p, spec.hotspot_center) < spec.cn_exclusion_radius) continue;
            const double f = spec.capacity_min == spec.capacity_max
                                 ? spec.capacity_min
                                 : rng.uniform(spec.capacity_min, spec.capacity_max);
            s.nodes.push_back(
                ComputingNode{static_cast<int>(s.nodes.size()) + 1, p, f});
        }
    }
    return s;
}

std::string CsvTable::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out += columns[i];
        out += (i + 1 == columns.size()) ? '\n' : ',';
    }
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += row[i];
            out += (i + 1 == row.size()) ? '\n' : ',';
        }
    }
    return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << to_string();
}

CsvTable run_spacing_sweep(const ExperimentConfig& config) {
    CsvTable table;
    table.columns = {"altitude_m", "spacing_m", "seed",   "psi_ghz",
                     "omega_ghz",  "p_succ",    "utility", "status"};
    const Point2 anchor = config.scenario.kind == "hotspot" ? config.scenario.hotspot_center
                                                            : config.scenario.region.center();
    for (std::uint64_t seed : config.seeds) {
        const Scenario scenario = make_scenario(config.scenario, seed);
        UtilityEvaluator evaluator(scenario, config.channel, config.weights);
        for (double altitude : config.spacing.altitudes) {
            for (double spacing : config.spacing.values) {
                std::vector<std::string> row{g9(altitude), g9(spacing), std::to_string(seed)};
                if (spacing < config.constraints.d_min) {
                    row.insert(row.end(), {"", "", "", "", "skipped"});
                } else {
                    Deployment d;
                    d.positions = {{anchor.x - 0.5 * spacing, anchor.y, altitude},
                                   {anchor.x + 0.5 * spacing, anchor.y, altitude}};
                    const EvaluationReport r = evaluator.report(d);
                    row.insert(row.end(), {g9(r.psi_ghz), g9(r.omega_ghz), g9(r.p_succ),
                                           g9(r.utility), "ok"});
                }
                table.rows.push_back(std::move(row));
            }
        }
    }
    return table;
}

namespace {

EvaluationReport run_cell(const ExperimentConfig& config, const Scenario& scenario,
                          Scheme scheme, int num_uavs, std::uint64_t seed) {
    const std::uint64_t run_seed = mix_seed(seed, 3);
    switch (scheme) {
        case Scheme::random: {
            const Deployment d =
                random_deploy(scenario, config.constraints, num_uavs, run_seed);
            return utility(d, scenario, config.channel, config.weights);
        }
        case Scheme::fixed:
            return fixed_deploy_and_evaluate(scenario, config.channel, config.weights,
                                             config.constraints, config.fixed, num_uavs,
                                             run_seed);
        case Scheme::greedy: {
            auto [d, trace] = greedy_deploy(scenario, config.channel, config.weights,
                                            config.constraints, config.beam, num_uavs, run_seed);
            return utility(d, scenario, config.channel, config.weights);
        }
        case Scheme::ca3d: {
            PsoParams pso = config.pso;
            pso.seed = run_seed;
            return ca3d_optimize(scenario, config.channel, config.weights, config.constraints,
                                 pso, config.beam, num_uavs)
                .report;
        }
    }
    throw std::logic_error("unreachable scheme");
}

} // namespace

UavSweepResult run_uav_count_sweep(const ExperimentConfig& config) {
    UavSweepResult result;
    result.results.columns = {"scheme", "num_uavs", "seed",    "psi_ghz",
                              "omega_ghz", "p_succ", "utility", "status"};
    result.timing.columns = {"scheme", "num_uavs", "seed", "wall_ms"};
    for (Scheme scheme : config.schemes) {
        for (int m : config.uav_counts) {
            for (std::uint64_t seed : config.seeds) {
                const Scenario scenario = make_scenario(config.scenario, seed);
                std::vector<std::string> row{to_string(scheme), std::to_string(m),
                                             std::to_string(seed)};
                const auto t0 = std::chrono::steady_clock::now();
                try {
                    const EvaluationReport r = run_cell(config, scenario, scheme, m, seed);
                    row.insert(row.end(), {g9(r.psi_ghz), g9(r.omega_ghz), g9(r.p_succ),
                                           g9(r.utility), "ok"});
                } catch (const std::exception&) {
                    row.insert(row.end(), {"", "", "", "", "error"});
                    result.results.has_errors = true;
                }
                const auto t1 = std::chrono::steady_clock::now();
                const double ms =
                    std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0)
                        .count();
                result.results.rows.push_back(std::move(row));
                result.timing.rows.push_back({to_string(scheme), std::to_string(m),
                                              std::to_string(seed), g9(ms)});
            }
        }
    }
    return result;
}

SingleRunResult run_single(const ExperimentConfig& config) {
    if (config.schemes.size() != 1)
        throw config_error("run_single requires exactly one scheme");
    const Scheme scheme = config.schemes.front();
    const std::uint64_t seed = config.seeds.front();
    const std::uint64_t run_seed = mix_seed(seed, 3);
    const Scenario scenario = make_scenario(config.scenario, seed);

    SingleRunResult out;
    out.initial = random_deploy(scenario, config.constraints, config.num_uavs, run_seed);
    switch (scheme) {
        case Scheme::random:
            out.final_deployment = out.initial;
            out.report = utility(out.final_deployment, scenario, config.channel, config.weights);
            break;
        case Scheme::fixed: {
            out.final_deployment =
                fixed_placement(scenario, config.constraints, config.fixed, config.num_uavs, run_seed);
            EvalOptions options;
            options.cn_horizontal_range = config.fixed.local_radius;
            out.report =
                utility(out.final_deployment, scenario, config.channel, config.weights, options);
            break;
        }
        case Scheme::greedy: {
            auto [d, trace] = greedy_deploy(scenario, config.channel, config.weights,
                                            config.constraints, config.beam, config.num_uavs,
                                            run_seed);
            out.final_deployment = std::move(d);
            out.trace = std::move(trace);
            out.report = utility(out.final_deployment, scenario, config.channel, config.weights);
            break;
        }
        case Scheme::ca3d: {
            PsoParams pso = config.pso;
            pso.seed = run_seed;
            OptimizeResult r = ca3d_optimize(scenario, config.channel, config.weights,
                                             config.constraints, pso, config.beam, config.num_uavs);
            out.final_deployment = std::move(r.deployment);
            out.report = std::move(r.report);
            out.trace = std::move(r.trace);
            break;
        }
    }
    return out;
}

std::string deployment_to_json(const Deployment& d) {
    json j;
    j["positions"] = json::array();
    for (const auto& q : d.positions) j["positions"].push_back({q.x, q.y, q.h});
    return j.dump(2);
}

Deployment deployment_from_json(const std::string& text) {
    const json j = json::parse(text);
    Deployment d;
    for (const auto& q : j.at("positions"))
        d.positions.push_back({q.at(0).get<double>(), q.at(1).get<double>(), q.at(2).get<double>()});
    return d;
}

namespace {

int column_index(const CsvTable& table, const std::string& name) {
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        if (table.columns[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("emit_plot_data: missing column " + name);
}

void emit_metric(const CsvTable& table, const std::vector<std::string>& key_columns,
                 const std::string& metric, const std::filesystem::path& path) {
    std::vector<int> key_idx;
    for (const auto& k : key_columns) key_idx.push_back(column_index(table, k));
    const int metric_idx = column_index(table, metric);
    const int status_idx = column_index(table, "status");

    // key -> samples, preserving first-seen key order for deterministic output
    std::vector<std::vector<std::string>> key_order;
    std::map<std::vector<std::string>, std::vector<double>> groups;
    for (const auto& row : table.rows) {
        if (row[static_cast<std::size_t>(status_idx)] != "ok") continue;
        std::vector<std::string> key;
        for (int i : key_idx) key.push_back(row[static_cast<std::size_t>(i)]);
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) key_order.push_back(key);
        it->second.push_back(std::strtod(row[static_cast<std::size_t>(metric_idx)].c_str(), nullptr));
    }

    CsvTable out;
    out.columns = key_columns;
    out.columns.insert(out.columns.end(), {"mean_" + metric, "std_" + metric, "n"});
    for (const auto& key : key_order) {
        const auto& samples = groups[key];
        const double n = static_cast<double>(samples.size());
        double mean = 0.0;
        for (double v : samples) mean += v;
        mean /= n;
        double var = 0.0;
        if (samples.size() > 1) {
            for (double v : samples) var += (v - mean) * (v - mean);
            var /= (n - 1.0);
        }
        std::vector<std::string> row = key;
        row.insert(row.end(), {g9(mean), g9(std::sqrt(var)), std::to_string(samples.size())});
        out.rows.push_back(std::move(row));
    }
    out.write(path);
}

} // namespace

void emit_plot_data(const CsvTable& table, const std::string& kind,
                    const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    if (kind == "spacing") {
        emit_metric(table, {"altitude_m", "spacing_m"}, "psi_ghz", out_dir / "spacing_psi.csv");
        emit_metric(table, {"altitude_m", "spacing_m"}, "p_succ", out_dir / "spacing_psucc.csv");
    } else if (kind == "uavs") {
        emit_metric(table, {"scheme", "num_uavs"}, "p_succ", out_dir / "uavs_psucc.csv");
        emit_metric(table, {"scheme", "num_uavs"}, "psi_ghz", out_dir / "uavs_psi.csv");
        emit_metric(table, {"scheme", "num_uavs"}, "omega_ghz", out_dir / "uavs_omega.csv");
        emit_metric(table, {"scheme", "num_uavs"}, "utility", out_dir / "uavs_utility.csv");
    } else {
        throw std::invalid_argument("emit_plot_data: unknown kind " + kind);
    }
}

} // namespace ca3d

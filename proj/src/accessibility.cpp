#include "ca3d/accessibility.hpp"

#include <cmath>
#include <stdexcept>

#include "ca3d/format.hpp"

namespace ca3d {

double uav_distance(const UavPosition& a, const UavPosition& b) {
    return std::hypot(a.x - b.x, a.y - b.y, a.h - b.h);
}

bool feasible(const Deployment& d, const DeploymentConstraints& c) {
    const int m_count = d.size();
    for (const auto& q : d.positions) {
        if (q.h < c.h_min || q.h > c.h_max) return false;
        if (!c.region.contains(Point2{q.x, q.y})) return false;
    }
    for (int m = 0; m < m_count; ++m)
        for (int mp = m + 1; mp < m_count; ++mp)
            if (uav_distance(d.positions[m], d.positions[mp]) < c.d_min) return false;
    return true;
}

namespace {

constexpr double kGhz = 1e9;

void check_uav_index(int m, const Deployment& d) {
    if (m < 0 || m >= d.size()) throw std::invalid_argument("uav index out of range");
}

// Per-(k,m,n) latency composed exactly like end_to_end_latency so that the
// fused evaluation is bit-identical to an exhaustive per-triple enumeration.
double triple_latency(double up, double fwd, double cmp) { return up + fwd + cmp; }

double fwd_rate(const UavPosition& q, const ComputingNode& n, const ChannelParams& p) {
    const double r = horizontal_distance(n.position, q);
    const double dist = std::sqrt(r * r + q.h * q.h);
    return link_rate(p.p_uav, channel_gain(dist, elevation_angle_deg(r, q.h), p), p);
}

double up_rate(const GroundUser& u, const UavPosition& q, const ChannelParams& p) {
    const double r = horizontal_distance(u.position, q);
    const double dist = std::sqrt(r * r + q.h * q.h);
    return link_rate(p.p_user, channel_gain(dist, elevation_angle_deg(r, q.h), p), p);
}

} // namespace

std::set<int> accessible_set(int uav_index, const Deployment& d, const Scenario& s,
                             const ChannelParams& p, const EvalOptions& opt) {
    check_uav_index(uav_index, d);
    const auto& q = d.positions[uav_index];
    std::set<int> out;
    for (const auto& node : s.nodes) {
        if (horizontal_distance(node.position, q) > opt.cn_horizontal_range) continue;
        const double rate = fwd_rate(q, node, p);
        for (const auto& user : s.users) {
            const double lat = triple_latency(user.task.input_bits / up_rate(user, q, p),
                                              user.task.input_bits / rate,
                                              user.task.cycles / node.capacity);
            if (lat <= user.task.deadline) {
                out.insert(node.id);
                break;
            }
        }
    }
    return out;
}

double unique_capacity(const Deployment& d, const Scenario& s, const ChannelParams& p,
                       const EvalOptions& opt) {
    std::set<int> all;
    for (int m = 0; m < d.size(); ++m) {
        auto set_m = accessible_set(m, d, s, p, opt);
        all.insert(set_m.begin(), set_m.end());
    }
    double sum = 0.0;
    for (const auto& node : s.nodes)
        if (all.count(node.id)) sum += node.capacity;
    return sum / kGhz;
}

double pairwise_overlap(int m, int m_other, const Deployment& d, const Scenario& s,
                        const ChannelParams& p, const EvalOptions& opt) {
    if (m == m_other) throw std::invalid_argument("pairwise_overlap requires two distinct UAVs");
    check_uav_index(m, d);
    check_uav_index(m_other, d);
    const auto set_a = accessible_set(m, d, s, p, opt);
    const auto set_b = accessible_set(m_other, d, s, p, opt);
    double sum = 0.0;
    for (const auto& node : s.nodes)
        if (set_a.count(node.id) && set_b.count(node.id)) sum += node.capacity;
    return sum / kGhz;
}

double overlap_penalty(const Deployment& d, const Scenario& s, const ChannelParams& p,
                       const EvalOptions& opt) {
    const int m_count = d.size();
    if (m_count <= 1) return 0.0;
    std::vector<std::set<int>> sets;
    sets.reserve(m_count);
    for (int m = 0; m < m_count; ++m) sets.push_back(accessible_set(m, d, s, p, opt));
    double sum = 0.0;
    for (int m = 0; m < m_count; ++m)
        for (int mp = m + 1; mp < m_count; ++mp)
            for (const auto& node : s.nodes)
                if (sets[m].count(node.id) && sets[mp].count(node.id)) sum += node.capacity;
    return 2.0 / (static_cast<double>(m_count) * (m_count - 1)) * (sum / kGhz);
}

std::optional<PairChoice> select_pair(int user_index, const Deployment& d, const Scenario& s,
                                      const ChannelParams& p, const EvalOptions& opt) {
    if (user_index < 0 || user_index >= static_cast<int>(s.users.size()))
        throw std::invalid_argument("user index out of range");
    const auto& user = s.users[static_cast<std::size_t>(user_index)];
    PairChoice best;
    bool found = false;
    for (int m = 0; m < d.size(); ++m) {
        const auto& q = d.positions[m];
        const double up = user.task.input_bits / up_rate(user, q, p);
        for (int n = 0; n < static_cast<int>(s.nodes.size()); ++n) {
            const auto& node = s.nodes[static_cast<std::size_t>(n)];
            if (horizontal_distance(node.position, q) > opt.cn_horizontal_range) continue;
            const double lat = triple_latency(up, user.task.input_bits / fwd_rate(q, node, p),
                                              user.task.cycles / node.capacity);
            if (lat > user.task.deadline) continue;
            if (!found || lat < best.latency) {
                best = PairChoice{m, n, lat};
                found = true;
            }
        }
    }
    if (!found) return std::nullopt;
    return best;
}

double success_probability(const Deployment& d, const Scenario& s, const ChannelParams& p,
                           const EvalOptions& opt) {
    if (s.users.empty()) throw std::invalid_argument("success_probability requires K >= 1");
    int ok = 0;
    for (int k = 0; k < static_cast<int>(s.users.size()); ++k) {
        const auto choice = select_pair(k, d, s, p, opt);
        if (choice && choice->latency <= s.users[static_cast<std::size_t>(k)].task.deadline) ++ok;
    }
    return static_cast<double>(ok) / static_cast<double>(s.users.size());
}

std::string EvaluationReport::csv_header() { return "psi_ghz,omega_ghz,p_succ,utility"; }

std::string EvaluationReport::csv_row() const {
    return g9(psi_ghz) + "," + g9(omega_ghz) + "," + g9(p_succ) + "," + g9(utility);
}

UtilityEvaluator::UtilityEvaluator(const Scenario& scenario, const ChannelParams& params,
                                   const UtilityWeights& weights, EvalOptions options)
    : scenario_(&scenario), params_(params), weights_(weights), options_(options) {}

double UtilityEvaluator::value(const Deployment& d) {
    compute(d, scratch_report_, /*want_assignment=*/false);
    return scratch_report_.utility;
}

EvaluationReport UtilityEvaluator::report(const Deployment& d) {
    EvaluationReport out;
    compute(d, out, /*want_assignment=*/true);
    return out;
}

void UtilityEvaluator::compute(const Deployment& d, EvaluationReport& out, bool want_assignment) {
    const Scenario& s = *scenario_;
    const int k_count = static_cast<int>(s.users.size());
    const int n_count = static_cast<int>(s.nodes.size());
    const int m_count = d.size();
    if (m_count < 1) throw std::invalid_argument("evaluation requires at least one UAV");
    if (k_count < 1) throw std::invalid_argument("evaluation requires at least one user");

    ++evaluations_;
    if (observer_) observer_(d);

    uplink_.assign(static_cast<std::size_t>(k_count) * m_count, 0.0);
    access_.assign(static_cast<std::size_t>(m_count) * std::max(n_count, 1), 0);
    cn_in_union_.assign(static_cast<std::size_t>(std::max(n_count, 1)), 0);

    for (int m = 0; m < m_count; ++m) {
        const auto& q = d.positions[m];
        for (int k = 0; k < k_count; ++k) {
            const auto& user = s.users[static_cast<std::size_t>(k)];
            uplink_[static_cast<std::size_t>(k) * m_count + m] =
                user.task.input_bits / up_rate(user, q, params_);
        }
    }

    std::vector<PairChoice> best(static_cast<std::size_t>(k_count));
    std::vector<std::uint8_t> has_pair(static_cast<std::size_t>(k_count), 0);

    // One fused K x M x N sweep fills the accessibility matrix and the
    // per-user argmin; m-outer/n-inner order reproduces select_pair's
    // deterministic tie-break.
    for (int m = 0; m < m_count; ++m) {
        const auto& q = d.positions[m];
        for (int n = 0; n < n_count; ++n) {
            const auto& node = s.nodes[static_cast<std::size_t>(n)];
            if (horizontal_distance(node.position, q) > options_.cn_horizontal_range) continue;
            const double rate = fwd_rate(q, node, params_);
            bool any = false;
            for (int k = 0; k < k_count; ++k) {
                const auto& user = s.users[static_cast<std::size_t>(k)];
                const double lat =
                    triple_latency(uplink_[static_cast<std::size_t>(k) * m_count + m],
                                   user.task.input_bits / rate, user.task.cycles / node.capacity);
                if (lat <= user.task.deadline) {
                    any = true;
                    auto& h = has_pair[static_cast<std::size_t>(k)];
                    auto& b = best[static_cast<std::size_t>(k)];
                    if (!h || lat < b.latency) {
                        b = PairChoice{m, n, lat};
                        h = 1;
                    }
                }
            }
            if (any) access_[static_cast<std::size_t>(m) * n_count + n] = 1;
        }
    }

    double psi_hz = 0.0;
    for (int n = 0; n < n_count; ++n) {
        for (int m = 0; m < m_count; ++m) {
            if (access_[static_cast<std::size_t>(m) * n_count + n]) {
                cn_in_union_[static_cast<std::size_t>(n)] = 1;
                break;
            }
        }
        if (cn_in_union_[static_cast<std::size_t>(n)])
            psi_hz += s.nodes[static_cast<std::size_t>(n)].capacity;
    }

    double omega_ghz = 0.0;
    if (m_count > 1) {
        double overlap_hz = 0.0;
        for (int m = 0; m < m_count; ++m)
            for (int mp = m + 1; mp < m_count; ++mp)
                for (int n = 0; n < n_count; ++n)
                    if (access_[static_cast<std::size_t>(m) * n_count + n] &&
                        access_[static_cast<std::size_t>(mp) * n_count + n])
                        overlap_hz += s.nodes[static_cast<std::size_t>(n)].capacity;
        omega_ghz = 2.0 / (static_cast<double>(m_count) * (m_count - 1)) * (overlap_hz / kGhz);
    }

    int ok = 0;
    for (int k = 0; k < k_count; ++k) {
        // The deadline was already checked when the pair entered the argmin;
        // re-checking mirrors the success-indicator definition and is a no-op.
        if (has_pair[static_cast<std::size_t>(k)] &&
            best[static_cast<std::size_t>(k)].latency <=
                s.users[static_cast<std::size_t>(k)].task.deadline)
            ++ok;
    }

    out.psi_ghz = psi_hz / kGhz;
    out.omega_ghz = omega_ghz;
    out.p_succ = static_cast<double>(ok) / static_cast<double>(k_count);
    out.utility = weights_.alpha * out.psi_ghz + weights_.beta * out.p_succ -
                  weights_.gamma * out.omega_ghz;
    out.per_user_assignment.clear();
    if (want_assignment) {
        out.per_user_assignment.resize(static_cast<std::size_t>(k_count));
        for (int k = 0; k < k_count; ++k)
            if (has_pair[static_cast<std::size_t>(k)])
                out.per_user_assignment[static_cast<std::size_t>(k)] =
                    best[static_cast<std::size_t>(k)];
    }
}

EvaluationReport utility(const Deployment& d, const Scenario& s, const ChannelParams& p,
                         const UtilityWeights& w, const EvalOptions& opt) {
    UtilityEvaluator evaluator(s, p, w, opt);
    return evaluator.report(d);
}

} // namespace ca3d

#include "ca3d/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ca3d {

void ChannelParams::validate() const {
    auto pos = [](double v, const char* name) {
        if (!(v > 0.0)) throw std::invalid_argument(std::string("ChannelParams.") + name + " must be > 0");
    };
    pos(a, "a");
    pos(b, "b");
    pos(beta0, "beta0");
    pos(pathloss_exp, "pathloss_exp");
    pos(bandwidth, "bandwidth");
    pos(noise, "noise");
    if (!(nlos_atten > 0.0 && nlos_atten < 1.0))
        throw std::invalid_argument("ChannelParams.nlos_atten must be in (0,1)");
    if (p_user < 0.0 || p_uav < 0.0)
        throw std::invalid_argument("ChannelParams transmit powers must be >= 0");
}

double elevation_angle_deg(double horizontal_dist, double altitude) {
    if (!(altitude > 0.0)) throw std::invalid_argument("altitude must be > 0");
    if (horizontal_dist < 0.0) throw std::invalid_argument("horizontal_dist must be >= 0");
    return std::atan2(altitude, horizontal_dist) * (180.0 / std::numbers::pi);
}

double los_probability(double theta_deg, const ChannelParams& p) {
    return 1.0 / (1.0 + p.a * std::exp(-p.b * (theta_deg - p.a)));
}

double channel_gain(double link_dist, double theta_deg, const ChannelParams& p) {
    if (!(link_dist > 0.0)) throw std::invalid_argument("link_dist must be > 0");
    const double p_los = los_probability(theta_deg, p);
    return p.beta0 * std::pow(link_dist, -p.pathloss_exp) *
           (p_los + p.nlos_atten * (1.0 - p_los));
}

double link_rate(double tx_power, double gain, const ChannelParams& p) {
    return p.bandwidth * std::log2(1.0 + tx_power * gain / p.noise);
}

namespace {

// Shared by both link directions: rate over the slant path between a ground
// point at horizontal distance r and a platform at altitude h.
double air_ground_rate(double tx_power, double r, double h, const ChannelParams& p) {
    const double d = std::sqrt(r * r + h * h);
    const double theta = elevation_angle_deg(r, h);
    return link_rate(tx_power, channel_gain(d, theta, p), p);
}

} // namespace

double uplink_delay(const GroundUser& user, const UavPosition& uav,
                    const ChannelParams& p) {
    const double r = horizontal_distance(user.position, uav);
    return user.task.input_bits / air_ground_rate(p.p_user, r, uav.h, p);
}

double forward_delay(const Task& task, const UavPosition& uav,
                     const ComputingNode& cn, const ChannelParams& p) {
    const double r = horizontal_distance(cn.position, uav);
    return task.input_bits / air_ground_rate(p.p_uav, r, uav.h, p);
}

double compute_delay(const Task& task, const ComputingNode& cn) {
    return task.cycles / cn.capacity;
}

double end_to_end_latency(const GroundUser& user, const UavPosition& uav,
                          const ComputingNode& cn, const ChannelParams& p) {
    return uplink_delay(user, uav, p) + forward_delay(user.task, uav, cn, p) +
           compute_delay(user.task, cn);
}

} // namespace ca3d

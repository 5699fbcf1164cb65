// Air-ground link model: probabilistic line-of-sight, large-scale gain,
// Shannon rates, and the three delay components of the end-to-end latency
// (uplink, UAV->CN forwarding, remote computation).

#ifndef CA3D_CHANNEL_HPP
#define CA3D_CHANNEL_HPP

#include "ca3d/scenario.hpp"

namespace ca3d {

/// Propagation and radio constants. Defaults follow the project baseline
/// (urban LoS constants, -60 dB reference gain); experiment configs override
/// them, see configs/.
struct ChannelParams {
    double a = 9.61;            // LoS model environment constant
    double b = 0.16;            // LoS model environment constant (1/deg)
    double beta0 = 1e-6;        // linear channel gain at 1 m
    double pathloss_exp = 2.3;  // air-ground path-loss exponent
    double nlos_atten = 0.2;    // extra NLoS attenuation factor, in (0,1)
    double bandwidth = 1e7;     // Hz, shared by access and backhaul links
    double p_user = 0.1;        // W, ground-user transmit power
    double p_uav = 1.0;         // W, UAV transmit power
    double noise = 3.98e-13;    // W, receiver noise power

    void validate() const;
};

/// UAV gateway position: horizontal coordinates plus altitude (h > 0).
struct UavPosition {
    double x = 0.0;
    double y = 0.0;
    double h = 0.0;
};

inline double horizontal_distance(const Point2& p, const UavPosition& q) {
    return std::hypot(p.x - q.x, p.y - q.y);
}

/// Elevation angle in degrees, in (0, 90]. Throws std::invalid_argument for
/// altitude <= 0 or negative horizontal distance.
double elevation_angle_deg(double horizontal_dist, double altitude);

/// Logistic LoS probability as a function of the elevation angle; in (0, 1).
double los_probability(double theta_deg, const ChannelParams& params);

/// Average large-scale gain beta0 * d^-alpha * [P_LoS + eta (1 - P_LoS)].
/// Throws std::invalid_argument at link_dist = 0 (power-law singularity).
double channel_gain(double link_dist, double theta_deg, const ChannelParams& params);

/// Shannon rate B log2(1 + p g / sigma^2) in bit/s; zero power or gain gives 0.
double link_rate(double tx_power, double gain, const ChannelParams& params);

/// L / R for the user->UAV leg; +infinity when the rate is zero (the pair is
/// then infeasible downstream rather than an error).
double uplink_delay(const GroundUser& user, const UavPosition& uav,
                    const ChannelParams& params);

/// L / R for the UAV->CN leg (same propagation model, UAV transmit power).
double forward_delay(const Task& task, const UavPosition& uav,
                     const ComputingNode& cn, const ChannelParams& params);

/// C / f_n at the computing node.
double compute_delay(const Task& task, const ComputingNode& cn);

/// Uplink + forwarding + computation; +infinity if any component is.
double end_to_end_latency(const GroundUser& user, const UavPosition& uav,
                          const ComputingNode& cn, const ChannelParams& params);

} // namespace ca3d

#endif // CA3D_CHANNEL_HPP

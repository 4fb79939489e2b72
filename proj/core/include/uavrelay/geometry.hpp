// SPDX-License-Identifier: Apache-2.0
//
// Air-to-ground path loss and per-hop average SNR.

#ifndef UAVRELAY_GEOMETRY_HPP
#define UAVRELAY_GEOMETRY_HPP

#include <array>
#include <optional>
#include <string_view>

namespace uavrelay {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

enum class Environment { Suburban, Urban, DenseUrban, HighriseUrban };

inline constexpr std::array<Environment, 4> kAllEnvironments{
    Environment::Suburban, Environment::Urban, Environment::DenseUrban, Environment::HighriseUrban};

/// Excess-loss constants of one propagation environment.
struct EnvironmentProfile {
    Environment name;
    double eta_los;   // dB
    double eta_nlos;  // dB
    double a_prime;   // sigmoid midpoint, degrees
    double b_prime;   // sigmoid steepness, 1/degree
};

const EnvironmentProfile& environment_profile(Environment env);
std::string_view to_string(Environment env);
/// Accepts the enum spelling, case-insensitive, with optional '_' or '-'
/// separators ("dense_urban", "HighriseUrban", "highrise-urban").
std::optional<Environment> parse_environment(std::string_view text);

struct LinkGeometry {
    double uav_height_m = 100.0;
    double ground_distance_m = 0.0;
    double carrier_hz = 2e9;
    double pathloss_exponent = 2.0;

    /// Throws std::domain_error naming every violated bound.
    void validate() const;
};

struct LinkBudget {
    double tx_power_dBm = 23.0;
    double noise_power_dBm = -104.0;
    double path_loss_linear = 1.0;
};

/// arctan(h/d) in degrees; d = 0 gives 90. Throws std::domain_error for h <= 0 or d < 0.
double elevation_angle_deg(double h, double d);

/// Excess-loss factor beta (linear) at elevation theta in degrees.
double excess_loss_linear(const EnvironmentProfile& env, double carrier_hz, double theta_deg);

/// beta * (h^2 + d^2)^(alpha/2).
double path_loss_linear(const EnvironmentProfile& env, const LinkGeometry& geom);

/// Omega = 10^((P - N0)/10) / L_P.
double link_snr_linear(const LinkBudget& budget);

double db_to_linear(double db);
double linear_to_db(double linear);
/// Thermal noise power in dBm for a density in dBm/Hz over bandwidth_hz.
double noise_power_dBm(double density_dBm_per_hz, double bandwidth_hz);

}  // namespace uavrelay

#endif  // UAVRELAY_GEOMETRY_HPP

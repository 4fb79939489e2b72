// SPDX-License-Identifier: Apache-2.0

#include "uavrelay/geometry.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace uavrelay {

namespace {

constexpr std::array<EnvironmentProfile, 4> kProfiles{{
    {Environment::Suburban, 0.1, 21.0, 4.88, 0.429},
    {Environment::Urban, 1.0, 20.0, 9.6117, 0.1581},
    {Environment::DenseUrban, 1.6, 23.0, 12.081, 0.1139},
    {Environment::HighriseUrban, 2.3, 34.0, 27.2304, 0.0797},
}};

}  // namespace

const EnvironmentProfile& environment_profile(Environment env) {
    return kProfiles.at(static_cast<std::size_t>(env));
}

std::string_view to_string(Environment env) {
    switch (env) {
        case Environment::Suburban: return "Suburban";
        case Environment::Urban: return "Urban";
        case Environment::DenseUrban: return "DenseUrban";
        case Environment::HighriseUrban: return "HighriseUrban";
    }
    return "Unknown";
}

std::optional<Environment> parse_environment(std::string_view text) {
    std::string key;
    for (char ch : text) {
        if (ch == '_' || ch == '-' || ch == ' ') continue;
        key += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    for (Environment env : kAllEnvironments) {
        std::string name;
        for (char ch : to_string(env)) name += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        if (key == name) return env;
    }
    return std::nullopt;
}

void LinkGeometry::validate() const {
    std::string problems;
    if (!(uav_height_m > 0.0)) problems += " uav_height_m must be > 0;";
    if (!(ground_distance_m >= 0.0)) problems += " ground_distance_m must be >= 0;";
    if (!(carrier_hz > 0.0)) problems += " carrier_hz must be > 0;";
    if (!(pathloss_exponent >= 2.0)) problems += " pathloss_exponent must be >= 2;";
    if (!problems.empty()) {
        problems.pop_back();
        throw std::domain_error("LinkGeometry:" + problems);
    }
}

double elevation_angle_deg(double h, double d) {
    if (!(h > 0.0)) throw std::domain_error("elevation_angle_deg: height must be positive");
    if (!(d >= 0.0)) throw std::domain_error("elevation_angle_deg: distance must be non-negative");
    return std::atan2(h, d) * 180.0 / std::numbers::pi;
}

double excess_loss_linear(const EnvironmentProfile& env, double carrier_hz, double theta_deg) {
    const double a = env.eta_los - env.eta_nlos;
    const double b = 20.0 * std::log10(4.0 * std::numbers::pi * carrier_hz / kSpeedOfLight) + env.eta_nlos;
    const double sigmoid = 10.0 + 10.0 * env.a_prime * std::exp(-env.b_prime * (theta_deg - env.a_prime));
    return std::pow(10.0, b / 10.0 + a / sigmoid);
}

double path_loss_linear(const EnvironmentProfile& env, const LinkGeometry& geom) {
    geom.validate();
    const double theta = elevation_angle_deg(geom.uav_height_m, geom.ground_distance_m);
    const double range = std::hypot(geom.uav_height_m, geom.ground_distance_m);
    return excess_loss_linear(env, geom.carrier_hz, theta) * std::pow(range, geom.pathloss_exponent);
}

double link_snr_linear(const LinkBudget& budget) {
    return db_to_linear(budget.tx_power_dBm - budget.noise_power_dBm) / budget.path_loss_linear;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double noise_power_dBm(double density_dBm_per_hz, double bandwidth_hz) {
    return density_dBm_per_hz + linear_to_db(bandwidth_hz);
}

}  // namespace uavrelay

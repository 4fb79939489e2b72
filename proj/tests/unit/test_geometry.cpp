// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "uavrelay/geometry.hpp"

using namespace uavrelay;

namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

double loss(Environment env, double h, double d, double alpha = 2.0) {
    return path_loss_linear(environment_profile(env), LinkGeometry{h, d, 2e9, alpha});
}

}  // namespace

TEST_CASE("environment table") {
    const auto& urban = environment_profile(Environment::Urban);
    CHECK(urban.eta_los == 1.0);
    CHECK(urban.eta_nlos == 20.0);
    CHECK(urban.a_prime == 9.6117);
    CHECK(urban.b_prime == 0.1581);
    const auto& suburban = environment_profile(Environment::Suburban);
    CHECK(suburban.eta_los == 0.1);
    CHECK(suburban.eta_nlos == 21.0);
    CHECK(suburban.a_prime == 4.88);
    CHECK(suburban.b_prime == 0.429);
    const auto& dense = environment_profile(Environment::DenseUrban);
    CHECK(dense.eta_los == 1.6);
    CHECK(dense.eta_nlos == 23.0);
    CHECK(dense.a_prime == 12.081);
    CHECK(dense.b_prime == 0.1139);
    const auto& highrise = environment_profile(Environment::HighriseUrban);
    CHECK(highrise.eta_los == 2.3);
    CHECK(highrise.eta_nlos == 34.0);
    CHECK(highrise.a_prime == 27.2304);
    CHECK(highrise.b_prime == 0.0797);
    for (Environment env : kAllEnvironments) CHECK(environment_profile(env).name == env);
}

TEST_CASE("parse_environment") {
    CHECK(parse_environment("Urban") == Environment::Urban);
    CHECK(parse_environment("dense_urban") == Environment::DenseUrban);
    CHECK(parse_environment("HighriseUrban") == Environment::HighriseUrban);
    CHECK(parse_environment("highrise-urban") == Environment::HighriseUrban);
    CHECK(parse_environment("SUBURBAN") == Environment::Suburban);
    CHECK_FALSE(parse_environment("rural").has_value());
    for (Environment env : kAllEnvironments) CHECK(parse_environment(to_string(env)) == env);
}

TEST_CASE("elevation angle") {
    CHECK(elevation_angle_deg(100.0, 100.0) == doctest::Approx(45.0).epsilon(1e-14));
    CHECK(elevation_angle_deg(100.0, 0.0) == 90.0);
    CHECK(std::abs(elevation_angle_deg(100.0, 100.0 * std::sqrt(3.0)) - 30.0) < 1e-9);
    CHECK_THROWS_AS(elevation_angle_deg(0.0, 10.0), std::domain_error);
    CHECK_THROWS_AS(elevation_angle_deg(-5.0, 10.0), std::domain_error);
    CHECK_THROWS_AS(elevation_angle_deg(100.0, -1.0), std::domain_error);
}

TEST_CASE("path loss reference values") {
    // 50-digit evaluations of the model at f = 2 GHz, alpha = 2.
    struct Row {
        Environment env;
        double h, d, want;
    };
    const Row rows[] = {
        {Environment::Urban, 100, 100, 205780509.74947105511},
        {Environment::Urban, 100, 0, 88489860.710436898008},
        {Environment::Suburban, 100, 500, 5829006985.664194158},
        {Environment::DenseUrban, 250, 1200, 1463381931009.0632836},
        {Environment::HighriseUrban, 100, 100, 135249288946.8005412},
        {Environment::HighriseUrban, 100, 500, 4260064337243.3232103},
    };
    for (const auto& r : rows) {
        CAPTURE(to_string(r.env));
        CAPTURE(r.d);
        CHECK(rel_err(loss(r.env, r.h, r.d), r.want) < 1e-12);
    }
    CHECK(rel_err(loss(Environment::Urban, 100, 300, 2.7), 1084112100445.5702788) < 1e-12);
}

TEST_CASE("path loss monotone in distance and ordered by environment") {
    CHECK(loss(Environment::Urban, 100, 200) > loss(Environment::Urban, 100, 100));
    CHECK(loss(Environment::Suburban, 100, 500) < loss(Environment::HighriseUrban, 100, 500));
    for (Environment env : kAllEnvironments) {
        double prev = loss(env, 100, 1.0);
        for (double d = 1.05; d <= 1e5; d *= 1.05) {
            const double v = loss(env, 100, d);
            REQUIRE(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("excess loss near zenith") {
    for (Environment env : kAllEnvironments) {
        const auto& p = environment_profile(env);
        const double a = p.eta_los - p.eta_nlos;
        const double b = 20.0 * std::log10(4.0 * std::numbers::pi * 2e9 / kSpeedOfLight) + p.eta_nlos;
        const double limit = std::pow(10.0, b / 10.0 + a / (10.0 + 10.0 * p.a_prime * std::exp(-p.b_prime * (90.0 - p.a_prime))));
        const double beta = loss(env, 100, 1e-9) / (100.0 * 100.0);
        CHECK(rel_err(beta, limit) < 1e-9);
    }
}

TEST_CASE("link snr") {
    CHECK(rel_err(link_snr_linear(LinkBudget{23.0, -104.0, 1.0}), std::pow(10.0, 12.7)) < 1e-14);
    CHECK(rel_err(link_snr_linear(LinkBudget{23.0, -104.0, 2.0}), std::pow(10.0, 12.7) / 2.0) < 1e-14);
    CHECK(link_snr_linear(LinkBudget{-90.0, -90.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(noise_power_dBm(-174.0, 10e6) == doctest::Approx(-104.0).epsilon(1e-14));
    CHECK(db_to_linear(30.0) == doctest::Approx(1000.0).epsilon(1e-14));
    CHECK(linear_to_db(100.0) == doctest::Approx(20.0).epsilon(1e-14));
}

TEST_CASE("geometry validation") {
    CHECK_NOTHROW(LinkGeometry{}.validate());
    CHECK_THROWS_AS((LinkGeometry{0.0, 0.0, 2e9, 2.0}.validate()), std::domain_error);
    CHECK_THROWS_AS((LinkGeometry{100.0, -1.0, 2e9, 2.0}.validate()), std::domain_error);
    CHECK_THROWS_AS((LinkGeometry{100.0, 0.0, 0.0, 2.0}.validate()), std::domain_error);
    CHECK_THROWS_AS((LinkGeometry{100.0, 0.0, 2e9, 1.5}.validate()), std::domain_error);
}

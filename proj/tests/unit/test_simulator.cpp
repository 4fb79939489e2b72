// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <bit>
#include <cmath>
#include <functional>
#include <vector>

#include "oracles.hpp"
#include "uavrelay/analysis.hpp"
#include "uavrelay/simulator.hpp"

using namespace uavrelay;

namespace {

SystemConfig make_config(int M, int m_g, int m_h, double omega, int N_R = 1) {
    SystemConfig c;
    c.M = M;
    c.N_pat = M;
    c.N_R = N_R;
    c.hop1 = ChannelParams{m_g, m_h, 1.0, 1.0};
    c.hop2 = ChannelParams{m_g, m_h, 1.0, 1.0};
    c.omega1 = omega;
    c.omega2 = omega;
    return c;
}

double db(double x) { return std::pow(10.0, x / 10.0); }

// Nearest-neighbour pairs of a square grid and whether each differs in one bit.
std::pair<int, int> gray_neighbour_check(const Constellation& c) {
    double dmin = 1e9;
    for (std::size_t i = 0; i < c.points.size(); ++i)
        for (std::size_t j = i + 1; j < c.points.size(); ++j) dmin = std::min(dmin, std::abs(c.points[i] - c.points[j]));
    int pairs = 0;
    int one_bit = 0;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        for (std::size_t j = i + 1; j < c.points.size(); ++j) {
            if (std::abs(c.points[i] - c.points[j]) > dmin * (1.0 + 1e-9)) continue;
            ++pairs;
            if (std::popcount(c.bit_labels[i] ^ c.bit_labels[j]) == 1) ++one_bit;
        }
    }
    return {pairs, one_bit};
}

std::vector<std::uint64_t> detection_histogram(int n, const std::function<std::size_t()>& draw, int trials) {
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < trials; ++i) ++counts[draw()];
    return counts;
}

}  // namespace

TEST_CASE("gray_qam constellations") {
    const auto bpsk = gray_qam(2);
    REQUIRE(bpsk.points.size() == 2);
    CHECK(bpsk.bits_per_symbol() == 1);
    CHECK(std::abs(bpsk.points[0] - std::complex<double>(1.0, 0.0)) + std::abs(bpsk.points[1] + std::complex<double>(1.0, 0.0)) < 1e-15);

    const auto qpsk = gray_qam(4);
    for (const auto& p : qpsk.points) {
        CHECK(std::abs(std::abs(p.real()) - 1.0 / std::sqrt(2.0)) < 1e-15);
        CHECK(std::abs(std::abs(p.imag()) - 1.0 / std::sqrt(2.0)) < 1e-15);
    }
    CHECK(gray_neighbour_check(qpsk) == std::pair{4, 4});

    for (int M : {2, 4, 16, 64}) {
        const auto c = gray_qam(M);
        double energy = 0.0;
        for (const auto& p : c.points) energy += std::norm(p);
        CHECK(std::abs(energy / M - 1.0) < 1e-12);
        for (int i = 0; i < M; ++i) CHECK(c.bit_labels[static_cast<std::size_t>(i)] == static_cast<std::uint32_t>(i));
    }
    // 4x4 grid: 12 horizontal and 12 vertical neighbours.
    CHECK(gray_neighbour_check(gray_qam(16)) == std::pair{24, 24});
    CHECK(gray_neighbour_check(gray_qam(64)) == std::pair{112, 112});
    CHECK_THROWS_AS(gray_qam(8), std::invalid_argument);
    CHECK_THROWS_AS(gray_qam(256), std::invalid_argument);
}

TEST_CASE("sep estimate from counts") {
    const auto e = SepEstimate::from_counts(10000, 100, 9);
    CHECK(e.sep == 0.01);
    CHECK(e.std_error == doctest::Approx(std::sqrt(0.01 * 0.99 / 10000.0)));
    CHECK(e.seed == 9);
    CHECK(SepEstimate::from_counts(0, 0, 1).sep == 0.0);
}

TEST_CASE("hop1 trial noiseless and pure-noise limits") {
    for (int M : {2, 4, 16}) {
        const auto cfg = make_config(M, 1, 6, 1e12);
        RngStream rng(1, static_cast<std::uint64_t>(M));
        int wrong = 0;
        for (int i = 0; i < 100000; ++i) {
            const auto o = hop1_trial(cfg, rng);
            if (o.tx_index != o.detected_index) ++wrong;
        }
        CHECK(wrong == 0);
    }
    const auto silent = make_config(16, 1, 6, 0.0);
    RngStream rng(2, 0);
    const auto counts = detection_histogram(16, [&] { return hop1_trial(silent, rng).detected_index; }, 1000000);
    const std::vector<double> expected(16, 1000000.0 / 16.0);
    CHECK(oracle::chi_square(counts, expected) < oracle::chi_square_critical(15, 0.01));
}

TEST_CASE("hop1 without shadowing reduces to Rayleigh BPSK") {
    SystemConfig cfg = make_config(2, 1000000, 1, 10.0);
    cfg.N_pat = 1;
    const auto est = simulate_hop1(cfg, 1000000, 3);
    const double want = 0.5 * (1.0 - std::sqrt(10.0 / 11.0));
    CAPTURE(est.sep);
    CHECK(std::abs(est.sep - want) <= 3.0 * est.std_error);
}

TEST_CASE("selected shadowing follows the maximum order statistic") {
    for (int n : {2, 4, 16}) {
        const auto cfg = make_config(n, 1, 2, 10.0);
        RngStream rng(4, static_cast<std::uint64_t>(n));
        std::vector<double> power(200000);
        for (auto& p : power) {
            const auto o = hop1_trial(cfg, rng);
            p = o.selected_shadow * o.selected_shadow;
        }
        const double d = oracle::ks_distance(power, [n](double x) { return std::pow(-std::expm1(-x), n); });
        CAPTURE(n);
        CHECK(d < oracle::ks_critical_001(power.size()));
    }
}

TEST_CASE("hop2 trial limits and bound") {
    {
        const auto cfg = make_config(4, 1, 2, 1e12, 2);
        RngStream rng(5, 0);
        int wrong = 0;
        for (int i = 0; i < 100000; ++i) {
            const std::size_t tx = static_cast<std::size_t>(i % 4);
            if (hop2_trial(cfg, tx, rng) != tx) ++wrong;
        }
        CHECK(wrong == 0);
    }
    {
        const auto cfg = make_config(4, 1, 2, 0.0, 2);
        RngStream rng(6, 0);
        const auto counts = detection_histogram(4, [&] { return hop2_trial(cfg, 1, rng); }, 1000000);
        const std::vector<double> expected(4, 250000.0);
        CHECK(oracle::chi_square(counts, expected) < oracle::chi_square_critical(3, 0.01));
    }
    {
        const auto cfg = make_config(2, 1, 1, 100.0, 1);
        const auto est = simulate_hop2(cfg, 2000000, 7);
        const double bound = hop2_sep_bound(cfg);
        CAPTURE(est.sep);
        CAPTURE(bound);
        CHECK(est.sep <= bound + 3.0 * est.std_error);
    }
}

TEST_CASE("run_e2e noiseless") {
    const auto r = run_e2e(make_config(4, 1, 2, 1e12, 2), 100000, 0, 8, 2);
    CHECK(r.e2e.trials == 100000);
    CHECK(r.e2e.symbol_errors == 0);
    CHECK(r.hop1.symbol_errors == 0);
    CHECK(r.hop2.symbol_errors == 0);
}

TEST_CASE("run_e2e is independent of the worker count") {
    const auto cfg = make_config(4, 1, 6, db(8.0), 2);
    const auto a = run_e2e(cfg, 2000000, 500, 11, 1);
    const auto b = run_e2e(cfg, 2000000, 500, 11, 2);
    const auto c = run_e2e(cfg, 2000000, 500, 11, 3);
    const auto a2 = run_e2e(cfg, 2000000, 500, 11, 1);
    for (const auto* r : {&b, &c, &a2}) {
        CHECK(r->e2e.trials == a.e2e.trials);
        CHECK(r->e2e.symbol_errors == a.e2e.symbol_errors);
        CHECK(r->hop1.symbol_errors == a.hop1.symbol_errors);
        CHECK(r->hop2.symbol_errors == a.hop2.symbol_errors);
    }
    CHECK(a.e2e.symbol_errors >= 500);
    CHECK(a.e2e.trials < 2000000);
    const auto other_seed = run_e2e(cfg, 2000000, 500, 12, 1);
    CHECK(other_seed.e2e.trials != a.e2e.trials);
}

TEST_CASE("run_e2e dominates each hop within statistical error") {
    const auto r = run_e2e(make_config(16, 1, 2, db(12.0), 1), 1000000, 0, 13, 2);
    CHECK(r.e2e.sep >= r.hop1.sep - 3.0 * r.hop1.std_error);
    CHECK(r.e2e.sep >= r.hop2.sep - 3.0 * r.hop2.std_error);
}

TEST_CASE("run_e2e argument checks") {
    const auto cfg = make_config(2, 1, 1, 10.0);
    CHECK_THROWS_AS(run_e2e(cfg, 100000, 10, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(run_e2e(cfg, 9999, 10, 1, 1), std::invalid_argument);
    auto bad = cfg;
    bad.N_pat = 4;
    CHECK_THROWS_AS(run_e2e(bad, 100000, 10, 1, 1), std::invalid_argument);
}

TEST_CASE("bpsk e2e simulation tracks the analytical curve") {
    auto cfg = make_config(2, 1, 6, 1.0, 6);
    const MgfEstimator mgf(cfg.hop2, kDefaultMgfSamples);
    std::vector<double> x, y;
    for (double s = 0.0; s <= 20.0 + 1e-9; s += 2.5) {
        cfg.omega1 = cfg.omega2 = db(s);
        const auto r = run_e2e(cfg, 10000000, 400, 1000 + static_cast<std::uint64_t>(s * 10), 2);
        const double theory = std::max(hop1_sep_closed(cfg), hop2_sep_bound(cfg, mgf));
        CAPTURE(s);
        CAPTURE(r.e2e.sep);
        CAPTURE(theory);
        if (r.e2e.sep >= 1e-4 && r.e2e.sep <= 1e-1) {
            CHECK(r.e2e.sep <= 2.0 * theory);
            CHECK(r.e2e.sep >= 0.5 * theory);
        }
        if (s >= 10.0) {
            x.push_back(cfg.omega1);
            y.push_back(r.e2e.sep);
        }
    }
    CHECK(std::abs(oracle::loglog_slope(x, y) + gains(cfg).overall_diversity) < 0.3);
}

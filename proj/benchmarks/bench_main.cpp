// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <cmath>

#include "uavrelay/analysis.hpp"
#include "uavrelay/simulator.hpp"
#include "uavrelay/specfun.hpp"

using namespace uavrelay;

namespace {

SystemConfig make_config(int M, int m_g, int m_h, double omega, int N_R) {
    SystemConfig c;
    c.M = M;
    c.N_pat = M;
    c.N_R = N_R;
    c.hop1 = ChannelParams{m_g, m_h, 1.0, 1.0};
    c.hop2 = c.hop1;
    c.omega1 = omega;
    c.omega2 = omega;
    return c;
}

void BM_WhittakerW(benchmark::State& state) {
    double z = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfun::whittaker_w(-7.5, 4.5, z));
        z = z < 50.0 ? z * 1.1 : 0.01;
    }
}
BENCHMARK(BM_WhittakerW);

void BM_BesselK(benchmark::State& state) {
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfun::bessel_k(7.0, x));
        x = x < 100.0 ? x * 1.1 : 0.1;
    }
}
BENCHMARK(BM_BesselK);

void BM_Zeta(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(specfun::meijer_g_zeta(4, 6));
}
BENCHMARK(BM_Zeta);

void BM_Hop1SepClosed(benchmark::State& state) {
    const auto cfg = make_config(static_cast<int>(state.range(0)), 2, 6, 1000.0, 1);
    for (auto _ : state) benchmark::DoNotOptimize(hop1_sep_closed(cfg));
}
BENCHMARK(BM_Hop1SepClosed)->Arg(2)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Hop2Bound(benchmark::State& state) {
    const auto cfg = make_config(4, 1, 6, 1000.0, 6);
    const MgfEstimator mgf(cfg.hop2, 100000);
    for (auto _ : state) benchmark::DoNotOptimize(hop2_sep_bound(cfg, mgf));
}
BENCHMARK(BM_Hop2Bound)->Unit(benchmark::kMillisecond);

void BM_E2eTrial(benchmark::State& state) {
    const auto cfg = make_config(static_cast<int>(state.range(0)), 1, 6, 100.0, 6);
    const auto constellation = gray_qam(cfg.M);
    RngStream rng(1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(e2e_trial(cfg, constellation, rng));
}
BENCHMARK(BM_E2eTrial)->Arg(2)->Arg(4)->Arg(16);

}  // namespace
BENCHMARK_MAIN();

// SPDX-License-Identifier: Apache-2.0
//
// Monte-Carlo simulation of the two-hop link.

#ifndef UAVRELAY_SIMULATOR_HPP
#define UAVRELAY_SIMULATOR_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "uavrelay/analysis.hpp"
#include "uavrelay/channel.hpp"

namespace uavrelay {

/// Unit-energy square QAM (BPSK for M = 2). points[i] carries the Gray
/// label i, so a symbol index and its bit label coincide.
struct Constellation {
    int order = 0;
    std::vector<std::complex<double>> points;
    std::vector<std::uint32_t> bit_labels;

    int bits_per_symbol() const;
};

/// Throws std::invalid_argument unless M is one of 2, 4, 16, 64.
Constellation gray_qam(int M);

struct SepEstimate {
    std::uint64_t trials = 0;
    std::uint64_t symbol_errors = 0;
    double sep = 0.0;
    double std_error = 0.0;
    std::uint64_t seed = 0;

    static SepEstimate from_counts(std::uint64_t trials, std::uint64_t errors, std::uint64_t seed);
};

struct Hop1Outcome {
    std::size_t tx_index = 0;
    std::size_t detected_index = 0;
    std::size_t selected_map = 0;
    double selected_shadow = 0.0;  // amplitude of the chosen pattern
};

struct TrialOutcome {
    bool hop1_symbol_ok = false;
    bool e2e_symbol_ok = false;
    std::size_t selected_map = 0;
};

/// One hop-1 channel use. N_pat patterns are drawn and the strongest is used;
/// the symbol is drawn uniformly from gray_qam(config.M). N_pat need not equal
/// M here. Exact metric ties are broken uniformly at random.
Hop1Outcome hop1_trial(const SystemConfig& config, RngStream& rng);
Hop1Outcome hop1_trial(const SystemConfig& config, const Constellation& constellation, RngStream& rng);

/// One hop-2 channel use carrying pattern index tx_index; returns the ML
/// decision over all N_pat patterns.
std::size_t hop2_trial(const SystemConfig& config, std::size_t tx_index, RngStream& rng);

/// Hop-1 only, `trials` channel uses on RngStream(seed, 0). Single-threaded;
/// does not require N_pat == M.
SepEstimate simulate_hop1(const SystemConfig& config, std::uint64_t trials, std::uint64_t seed);

/// Hop-2 only with a uniformly drawn pattern index per channel use.
SepEstimate simulate_hop2(const SystemConfig& config, std::uint64_t trials, std::uint64_t seed);

/// Both hops with decode-and-forward.
TrialOutcome e2e_trial(const SystemConfig& config, const Constellation& constellation, RngStream& rng);

struct E2eResult {
    SepEstimate e2e;
    SepEstimate hop1;
    SepEstimate hop2;  // hop-2 errors against the index the relay actually sent
};

/// Trials per work unit; unit k draws from RngStream(seed, k).
inline constexpr std::uint64_t kTrialChunk = 4096;

/// Runs trials until target_errors end-to-end errors or max_trials, whichever
/// comes first. The result depends only on (config, max_trials,
/// target_errors, seed), never on workers or scheduling.
/// Throws std::invalid_argument if workers < 1, max_trials < 10^4 or the
/// config is invalid.
E2eResult run_e2e(const SystemConfig& config, std::uint64_t max_trials, std::uint64_t target_errors,
                  std::uint64_t seed, int workers);

}  // namespace uavrelay

#endif  // UAVRELAY_SIMULATOR_HPP

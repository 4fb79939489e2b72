// SPDX-License-Identifier: Apache-2.0

#include "uavrelay/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

namespace uavrelay {

namespace {

std::complex<double> complex_noise(RngStream& rng) {
    constexpr double kHalfRoot = 0.70710678118654752440;
    const double re = rng.normal();
    const double im = rng.normal();
    return {re * kHalfRoot, im * kHalfRoot};
}

// Keeps the running argmin; equal metrics replace the incumbent with
// probability 1/ties, which is a uniform pick among all tied candidates.
class ArgminWithTies {
public:
    void offer(std::size_t index, double metric, RngStream& rng) {
        if (metric < best_) {
            best_ = metric;
            index_ = index;
            ties_ = 1;
        } else if (metric == best_) {
            ++ties_;
            if (rng.below(ties_) == 0) index_ = index;
        }
    }
    std::size_t index() const { return index_; }

private:
    double best_ = std::numeric_limits<double>::infinity();
    std::size_t index_ = 0;
    std::uint64_t ties_ = 0;
};

// Scratch buffers for repeated trials with one configuration.
class TrialEngine {
public:
    TrialEngine(const SystemConfig& config, const Constellation& constellation)
        : config_(config),
          constellation_(constellation),
          shadows_(static_cast<std::size_t>(config.N_pat)),
          channel_(static_cast<std::size_t>(config.N_R) * static_cast<std::size_t>(config.N_pat)),
          received_(static_cast<std::size_t>(config.N_R)) {}

    Hop1Outcome hop1(RngStream& rng) {
        Hop1Outcome out;
        out.tx_index = rng.below(constellation_.points.size());
        for (auto& g : shadows_) g = sample_nakagami(config_.hop1.m_g, config_.hop1.mean_shadow_power, rng);
        out.selected_map = select_map(shadows_);
        out.selected_shadow = shadows_[out.selected_map];
        const double h_amp = sample_nakagami(config_.hop1.m_h, config_.hop1.mean_fade_power, rng);
        const double h_phase = 2.0 * std::numbers::pi * rng.uniform();
        const std::complex<double> gain = std::sqrt(config_.omega1) * out.selected_shadow * std::polar(h_amp, h_phase);
        const std::complex<double> r = gain * constellation_.points[out.tx_index] + complex_noise(rng);
        ArgminWithTies best;
        for (std::size_t i = 0; i < constellation_.points.size(); ++i) {
            best.offer(i, std::norm(r - gain * constellation_.points[i]), rng);
        }
        out.detected_index = best.index();
        return out;
    }

    std::size_t hop2(std::size_t tx, RngStream& rng) {
        const auto n_pat = static_cast<std::size_t>(config_.N_pat);
        if (tx >= n_pat) throw std::out_of_range("hop2_trial: pattern index out of range");
        const double amp = std::sqrt(config_.omega2);
        for (auto& c : channel_) {
            const double g = sample_nakagami(config_.hop2.m_g, config_.hop2.mean_shadow_power, rng);
            const double h_amp = sample_nakagami(config_.hop2.m_h, config_.hop2.mean_fade_power, rng);
            const double h_phase = 2.0 * std::numbers::pi * rng.uniform();
            c = amp * g * std::polar(h_amp, h_phase);
        }
        for (std::size_t k = 0; k < received_.size(); ++k) {
            received_[k] = channel_[k * n_pat + tx] + complex_noise(rng);
        }
        ArgminWithTies best;
        for (std::size_t i = 0; i < n_pat; ++i) {
            double metric = 0.0;
            for (std::size_t k = 0; k < received_.size(); ++k) metric += std::norm(received_[k] - channel_[k * n_pat + i]);
            best.offer(i, metric, rng);
        }
        return best.index();
    }

    TrialOutcome e2e(RngStream& rng) {
        const Hop1Outcome first = hop1(rng);
        const std::size_t final_index = hop2(first.detected_index, rng);
        last_hop2_error_ = final_index != first.detected_index;
        return TrialOutcome{first.detected_index == first.tx_index, final_index == first.tx_index, first.selected_map};
    }

    bool last_hop2_error() const { return last_hop2_error_; }

private:
    const SystemConfig& config_;
    const Constellation& constellation_;
    std::vector<double> shadows_;
    std::vector<std::complex<double>> channel_;
    std::vector<std::complex<double>> received_;
    bool last_hop2_error_ = false;
};

struct ChunkCounts {
    std::uint64_t trials = 0;
    std::uint64_t e2e = 0;
    std::uint64_t hop1 = 0;
    std::uint64_t hop2 = 0;

    ChunkCounts& operator+=(const ChunkCounts& o) {
        trials += o.trials;
        e2e += o.e2e;
        hop1 += o.hop1;
        hop2 += o.hop2;
        return *this;
    }
};

// stop_after > 0 ends the chunk at the trial producing that many e2e errors.
ChunkCounts simulate_chunk(TrialEngine& engine, std::uint64_t seed, std::uint64_t chunk, std::uint64_t n,
                           std::uint64_t stop_after) {
    RngStream rng(seed, chunk);
    ChunkCounts counts;
    for (std::uint64_t t = 0; t < n; ++t) {
        const TrialOutcome out = engine.e2e(rng);
        ++counts.trials;
        counts.hop1 += out.hop1_symbol_ok ? 0 : 1;
        counts.hop2 += engine.last_hop2_error() ? 1 : 0;
        counts.e2e += out.e2e_symbol_ok ? 0 : 1;
        if (stop_after > 0 && counts.e2e >= stop_after) break;
    }
    return counts;
}

}  // namespace

int Constellation::bits_per_symbol() const {
    int bits = 0;
    while ((1 << bits) < order) ++bits;
    return bits;
}

Constellation gray_qam(int M) {
    Constellation c;
    c.order = M;
    if (M == 2) {
        c.points = {{1.0, 0.0}, {-1.0, 0.0}};
        c.bit_labels = {0u, 1u};
        return c;
    }
    if (M != 4 && M != 16 && M != 64) throw std::invalid_argument("gray_qam: order must be 2, 4, 16 or 64");
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(M))));
    int axis_bits = 0;
    while ((1 << axis_bits) < side) ++axis_bits;
    // Level i on each axis is 2i - (side - 1); its label is the Gray code of i.
    std::vector<int> level_of_label(static_cast<std::size_t>(side));
    for (int i = 0; i < side; ++i) level_of_label[static_cast<std::size_t>(i ^ (i >> 1))] = 2 * i - (side - 1);
    const double norm = std::sqrt(2.0 * (M - 1) / 3.0);
    c.points.resize(static_cast<std::size_t>(M));
    c.bit_labels.resize(static_cast<std::size_t>(M));
    for (int label = 0; label < M; ++label) {
        const int in_phase = level_of_label[static_cast<std::size_t>(label >> axis_bits)];
        const int quadrature = level_of_label[static_cast<std::size_t>(label & (side - 1))];
        c.points[static_cast<std::size_t>(label)] = {in_phase / norm, quadrature / norm};
        c.bit_labels[static_cast<std::size_t>(label)] = static_cast<std::uint32_t>(label);
    }
    return c;
}

SepEstimate SepEstimate::from_counts(std::uint64_t trials, std::uint64_t errors, std::uint64_t seed) {
    SepEstimate e;
    e.trials = trials;
    e.symbol_errors = errors;
    e.seed = seed;
    if (trials > 0) {
        e.sep = static_cast<double>(errors) / static_cast<double>(trials);
        e.std_error = std::sqrt(e.sep * (1.0 - e.sep) / static_cast<double>(trials));
    }
    return e;
}

Hop1Outcome hop1_trial(const SystemConfig& config, RngStream& rng) {
    return hop1_trial(config, gray_qam(config.M), rng);
}

Hop1Outcome hop1_trial(const SystemConfig& config, const Constellation& constellation, RngStream& rng) {
    TrialEngine engine(config, constellation);
    return engine.hop1(rng);
}

std::size_t hop2_trial(const SystemConfig& config, std::size_t tx_index, RngStream& rng) {
    const Constellation unused;
    TrialEngine engine(config, unused);
    return engine.hop2(tx_index, rng);
}

SepEstimate simulate_hop1(const SystemConfig& config, std::uint64_t trials, std::uint64_t seed) {
    const Constellation constellation = gray_qam(config.M);
    TrialEngine engine(config, constellation);
    RngStream rng(seed, 0);
    std::uint64_t errors = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const Hop1Outcome out = engine.hop1(rng);
        errors += out.detected_index != out.tx_index ? 1 : 0;
    }
    return SepEstimate::from_counts(trials, errors, seed);
}

SepEstimate simulate_hop2(const SystemConfig& config, std::uint64_t trials, std::uint64_t seed) {
    const Constellation unused;
    TrialEngine engine(config, unused);
    RngStream rng(seed, 0);
    const auto n_pat = static_cast<std::uint64_t>(config.N_pat);
    std::uint64_t errors = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const std::size_t tx = rng.below(n_pat);
        errors += engine.hop2(tx, rng) != tx ? 1 : 0;
    }
    return SepEstimate::from_counts(trials, errors, seed);
}

TrialOutcome e2e_trial(const SystemConfig& config, const Constellation& constellation, RngStream& rng) {
    TrialEngine engine(config, constellation);
    return engine.e2e(rng);
}

E2eResult run_e2e(const SystemConfig& config, std::uint64_t max_trials, std::uint64_t target_errors,
                  std::uint64_t seed, int workers) {
    if (workers < 1) throw std::invalid_argument("run_e2e: workers must be >= 1");
    if (max_trials < 10000) throw std::invalid_argument("run_e2e: max_trials must be >= 10^4");
    config.validate();
    const Constellation constellation = gray_qam(config.M);

    const std::uint64_t n_chunks = (max_trials + kTrialChunk - 1) / kTrialChunk;
    auto chunk_size = [&](std::uint64_t c) { return std::min(kTrialChunk, max_trials - c * kTrialChunk); };

    std::vector<std::optional<ChunkCounts>> done(n_chunks);
    std::mutex mutex;
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> stop{false};
    std::uint64_t prefix = 0;         // chunks [0, prefix) are complete
    std::uint64_t prefix_errors = 0;  // e2e errors in that prefix
    std::optional<std::uint64_t> cut;  // first chunk where the target is crossed

    auto work = [&] {
        TrialEngine engine(config, constellation);
        for (;;) {
            if (stop.load()) return;
            const std::uint64_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            const ChunkCounts counts = simulate_chunk(engine, seed, c, chunk_size(c), 0);
            std::lock_guard lock(mutex);
            done[c] = counts;
            while (!cut && prefix < n_chunks && done[prefix]) {
                prefix_errors += done[prefix]->e2e;
                if (target_errors > 0 && prefix_errors >= target_errors) {
                    cut = prefix;
                    stop.store(true);
                }
                ++prefix;
            }
        }
    };

    const auto n_threads = static_cast<std::size_t>(std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), n_chunks));
    if (n_threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    ChunkCounts total;
    if (cut) {
        for (std::uint64_t c = 0; c < *cut; ++c) total += *done[c];
        TrialEngine engine(config, constellation);
        total += simulate_chunk(engine, seed, *cut, chunk_size(*cut), target_errors - total.e2e);
    } else {
        for (const auto& d : done) total += *d;
    }
    return E2eResult{SepEstimate::from_counts(total.trials, total.e2e, seed),
                     SepEstimate::from_counts(total.trials, total.hop1, seed),
                     SepEstimate::from_counts(total.trials, total.hop2, seed)};
}

}  // namespace uavrelay

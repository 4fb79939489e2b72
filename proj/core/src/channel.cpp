// SPDX-License-Identifier: Apache-2.0

#include "uavrelay/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace uavrelay {

namespace {
__extension__ using u128 = unsigned __int128;
}  // namespace

void ChannelParams::validate() const {
    std::string problems;
    if (m_g < 1) problems += " m_g must be >= 1;";
    if (m_h < 1) problems += " m_h must be >= 1;";
    if (!(mean_shadow_power > 0.0)) problems += " mean_shadow_power must be positive;";
    if (!(mean_fade_power > 0.0)) problems += " mean_fade_power must be positive;";
    if (!problems.empty()) {
        problems.pop_back();
        throw std::invalid_argument("ChannelParams:" + problems);
    }
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {}

RngStream::Block RngStream::philox(Block ctr, Key key) {
    constexpr std::uint64_t kM0 = 0xD2511F53u;
    constexpr std::uint64_t kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u;
    constexpr std::uint32_t kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kW0;
            key[1] += kW1;
        }
        const std::uint64_t p0 = kM0 * ctr[0];
        const std::uint64_t p1 = kM1 * ctr[2];
        ctr = Block{static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                    static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
}

void RngStream::refill() {
    const Block ctr{static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                    static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)};
    const Key key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
    buffer_ = philox(ctr, key);
    ++counter_;
    used_ = 0;
}

std::uint32_t RngStream::next_u32() {
    if (used_ == 4) refill();
    return buffer_[static_cast<std::size_t>(used_++)];
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
}

double RngStream::uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_normal_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::uint64_t RngStream::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("RngStream::below: n must be positive");
    // Lemire's multiply-shift with rejection of the biased low band.
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const u128 product = static_cast<u128>(next_u64()) * n;
        if (static_cast<std::uint64_t>(product) >= threshold) {
            return static_cast<std::uint64_t>(product >> 64);
        }
    }
}

double sample_gamma(double shape, double scale, RngStream& rng) {
    if (!(shape >= 1.0) || !(scale > 0.0)) {
        throw std::invalid_argument("sample_gamma: requires shape >= 1 and scale > 0");
    }
    if (shape == 1.0) return -std::log(rng.uniform()) * scale;
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double x = rng.normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = rng.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
}

double sample_nakagami(int m, double mean_power, RngStream& rng) {
    if (m < 1) throw std::invalid_argument("sample_nakagami: m must be >= 1");
    return std::sqrt(sample_gamma(m, mean_power / m, rng));
}

std::complex<double> sample_complex_fading(int m, RngStream& rng) {
    const double amplitude = sample_nakagami(m, 1.0, rng);
    const double phase = 2.0 * std::numbers::pi * rng.uniform();
    return std::polar(amplitude, phase);
}

std::size_t select_map(std::span<const double> shadow_amplitudes) {
    if (shadow_amplitudes.empty()) throw std::invalid_argument("select_map: empty pattern list");
    std::size_t best = 0;
    for (std::size_t i = 1; i < shadow_amplitudes.size(); ++i) {
        if (shadow_amplitudes[i] > shadow_amplitudes[best]) best = i;
    }
    return best;
}

int lognormal_to_nakagami(double sigma_dB) {
    if (!(sigma_dB > 0.0) || !std::isfinite(sigma_dB)) {
        throw std::invalid_argument("lognormal_to_nakagami: sigma_dB must be positive");
    }
    const double sigma = sigma_dB * std::numbers::ln10 / 20.0;
    const double m = std::round(1.0 / std::expm1(sigma * sigma));
    return m < 1.0 ? 1 : (m > 1e6 ? 1000000 : static_cast<int>(m));
}

int rician_k_to_nakagami(double k_dB) {
    if (!std::isfinite(k_dB)) throw std::invalid_argument("rician_k_to_nakagami: k_dB must be finite");
    const double k = std::pow(10.0, k_dB / 10.0);
    const double m = std::round((k + 1.0) * (k + 1.0) / (2.0 * k + 1.0));
    return m < 1.0 ? 1 : (m > 1e6 ? 1000000 : static_cast<int>(m));
}

}  // namespace uavrelay

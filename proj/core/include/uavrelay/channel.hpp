// SPDX-License-Identifier: Apache-2.0
//
// Random variates for the shadowed-fading channels and reproducible streams.

#ifndef UAVRELAY_CHANNEL_HPP
#define UAVRELAY_CHANNEL_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

namespace uavrelay {

/// Severities of one hop. Shadowing g is Nakagami-m_g, fading h is Nakagami-m_h.
struct ChannelParams {
    int m_g = 1;
    int m_h = 1;
    double mean_shadow_power = 1.0;
    double mean_fade_power = 1.0;

    /// Throws std::invalid_argument if a severity is < 1 or a power is not positive.
    void validate() const;
};

/// Philox4x32-10 counter-based generator bound to (seed, stream_id).
///
/// The 64-bit seed is the Philox key; the 128-bit counter is (draw index,
/// stream_id), so different streams never share a counter block.
class RngStream {
public:
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint32_t next_u32();
    std::uint64_t next_u64();
    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform();
    /// Standard normal (Box-Muller, values are produced in pairs).
    double normal();
    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    /// The raw block function, exposed for known-answer tests.
    static Block philox(Block counter, Key key);

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t counter_ = 0;
    Block buffer_{};
    int used_ = 4;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

/// Gamma(shape, scale) variate, exact (Marsaglia-Tsang rejection; shape 1 is
/// drawn as an exponential). Requires shape >= 1 and scale > 0.
double sample_gamma(double shape, double scale, RngStream& rng);

/// Nakagami-m amplitude with E[x^2] = mean_power.
double sample_nakagami(int m, double mean_power, RngStream& rng);

/// Unit-power Nakagami-m magnitude with independent uniform phase.
std::complex<double> sample_complex_fading(int m, RngStream& rng);

/// Index of the largest shadowing amplitude; ties go to the lowest index.
/// Throws std::invalid_argument on an empty list.
std::size_t select_map(std::span<const double> shadow_amplitudes);

/// Nakagami shadowing severity matched to log-normal shadowing of sigma_dB.
int lognormal_to_nakagami(double sigma_dB);

/// Nakagami fading severity matched to a Rician K factor in dB.
int rician_k_to_nakagami(double k_dB);

}  // namespace uavrelay

#endif  // UAVRELAY_CHANNEL_HPP

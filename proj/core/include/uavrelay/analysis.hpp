// SPDX-License-Identifier: Apache-2.0
//
// Closed-form and semi-numerical symbol error probabilities of the two hops.

#ifndef UAVRELAY_ANALYSIS_HPP
#define UAVRELAY_ANALYSIS_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "uavrelay/channel.hpp"

namespace uavrelay {

struct SystemConfig {
    int M = 2;      // modulation order on hop 1
    int N_pat = 2;  // mirror activation patterns
    int N_R = 1;    // receive antennas at the base station
    ChannelParams hop1;
    ChannelParams hop2;
    double omega1 = 1.0;  // average SNR of hop 1, linear
    double omega2 = 1.0;  // average SNR of hop 2, linear

    /// Throws std::invalid_argument listing every violated invariant,
    /// including M != N_pat.
    void validate() const;
    double bandwidth_efficiency() const;
};

/// SEP approximation constants: P = C * E[Q(sqrt(2 D gamma))] for QAM.
struct ModulationConstants {
    double C = 1.0;
    double D = 1.0;
};

/// BPSK for M = 2, square Gray QAM otherwise (M a power of 4).
ModulationConstants modulation_constants(int M);

struct GainReport {
    double array_gain_hop1 = 0.0;
    int diversity_hop1 = 0;
    double array_gain_hop2 = 0.0;
    int diversity_hop2 = 0;
    int overall_diversity = 0;
    double upsilon = 0.0;
    double zeta = 0.0;
};

/// Coefficients of (sum_{n<m_g} m_g^n/n! u^n)^r, length r(m_g-1)+1.
std::vector<double> multinomial_coeffs(int r, int m_g);

/// CDF of the selected-pattern instantaneous SNR on hop 1.
double hop1_cdf(double gamma, const ChannelParams& params, int N_pat, double omega1);
/// 1 - hop1_cdf, evaluated directly (accurate in the upper tail).
double hop1_ccdf(double gamma, const ChannelParams& params, int N_pat, double omega1);

/// Hop-1 SEP from the Whittaker-function series. Uses config.M, N_pat,
/// hop1 and omega1; clamped to [0, 1].
double hop1_sep_closed(const SystemConfig& config);

/// Hop-1 SEP by adaptive quadrature of C sqrt(D/pi) int e^{-D g} g^{-1/2} F(g) dg / 2
/// over the same CDF. Reference path for hop1_sep_closed.
double hop1_sep_quadrature(const SystemConfig& config);

inline constexpr std::uint64_t kDefaultMgfSeed = 0x5EED0F3A6B1C2D4Eull;
inline constexpr std::size_t kDefaultMgfSamples = 200000;
inline constexpr int kDefaultQuadOrder = 64;

/// Monte-Carlo estimate of M(s) = E[exp(-s |g1 h1 - g2 h2|^2)] for two
/// independent unit-power shadowed-fading coefficients. The uniform phase
/// difference is integrated out analytically per sample. Immutable after
/// construction and safe to share between threads.
class MgfEstimator {
public:
    /// Throws std::invalid_argument if samples < 10^4.
    MgfEstimator(const ChannelParams& params, std::size_t samples, std::uint64_t seed = kDefaultMgfSeed);

    double operator()(double s) const;
    std::size_t samples() const { return a_.size(); }

private:
    std::vector<double> a_;
    std::vector<double> b_;
};

/// Craig-form union bound on the hop-2 SEP. Throws std::invalid_argument if
/// N_pat < 2, mgf_samples < 10^4 or quad_order < 2.
double hop2_sep_bound(const SystemConfig& config, std::size_t mgf_samples = kDefaultMgfSamples,
                      int quad_order = kDefaultQuadOrder, std::uint64_t seed = kDefaultMgfSeed);
/// Same bound with a prebuilt estimator (reused across a sweep).
double hop2_sep_bound(const SystemConfig& config, const MgfEstimator& mgf, int quad_order = kDefaultQuadOrder);

/// High-SNR form of the hop-2 bound, using meijer_g_zeta.
double hop2_sep_asymptotic(const SystemConfig& config);

/// Coefficient of the leading term of the hop-1 CDF at small SNR.
double upsilon(const ChannelParams& params, int N_pat);

GainReport gains(const SystemConfig& config);

/// The weaker hop dominates.
double e2e_sep(double hop1_sep, double hop2_sep);

}  // namespace uavrelay

#endif  // UAVRELAY_ANALYSIS_HPP

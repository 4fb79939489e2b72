// SPDX-License-Identifier: Apache-2.0
//
// Independent reference computations for the tests. Everything here goes
// through Boost's double-exponential quadrature in long double and shares no
// numerical code with the library under test.

#ifndef UAVRELAY_TESTS_ORACLES_HPP
#define UAVRELAY_TESTS_ORACLES_HPP

#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

/// Tricomi U(a, b, z) from (1/Gamma(a)) int_0^inf e^{-zt} t^{a-1} (1+t)^{b-a-1} dt, a > 0.
long double tricomi_u(long double a, long double b, long double z);

/// e^{-z/2} z^{mu+1/2} U(mu - kappa + 1/2, 1 + 2 mu, z).
long double whittaker_w(long double kappa, long double mu, long double z);

/// int_0^inf e^{-x cosh t} cosh(nu t) dt.
long double bessel_k(long double nu, long double x);

/// P(Omega * max_k g_k^2 * |h|^2 <= gamma): quadrature over the selected
/// shadowing power of the fading-power CDF (regularized incomplete gamma).
long double selected_snr_cdf(long double gamma, int m_g, int m_h, int n_pat, long double omega);

/// C * E[Q(sqrt(2 D gamma))] for the selected-pattern SNR. The fading
/// expectation uses the Nakagami closed form conditioned on the shadowing.
long double hop1_sep_conditional(int M, int n_pat, int m_g, int m_h, long double omega);

/// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);
/// Critical KS distance at significance 0.01 for n samples (asymptotic).
double ks_critical_001(std::size_t n);

double chi_square(const std::vector<std::uint64_t>& counts, const std::vector<double>& expected);
double chi_square_critical(int dof, double level);

/// Least-squares slope of log10(y) against log10(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace oracle

#endif  // UAVRELAY_TESTS_ORACLES_HPP

// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace oracle {

namespace {

using ld = long double;

constexpr ld kTol = 1e-14L;

ld integrate_half_line(const std::function<ld(ld)>& f) {
    boost::math::quadrature::exp_sinh<ld> integrator;
    return integrator.integrate(f, kTol);
}

ld integrate_interval(const std::function<ld(ld)>& f, ld a, ld b) {
    return boost::math::quadrature::gauss_kronrod<ld, 31>::integrate(f, a, b, 15, 1e-13L);
}

ld gamma_pdf_unit_mean(int m, ld x) {
    // Gamma(shape m, scale 1/m)
    if (x <= 0 || !std::isfinite(x) || m * x > 11000) return 0;
    return m * boost::math::gamma_p_derivative(static_cast<ld>(m), m * x);
}

ld gamma_cdf_unit_mean(int m, ld x) {
    if (x <= 0) return 0;
    return boost::math::gamma_p(static_cast<ld>(m), m * x);
}

ld max_pdf(int m_g, int n_pat, ld u) {
    return n_pat * std::pow(gamma_cdf_unit_mean(m_g, u), static_cast<ld>(n_pat - 1)) * gamma_pdf_unit_mean(m_g, u);
}

// Splits [0, inf) at the bulk of the selected-power distribution so the
// half-line rule only sees a smooth decaying tail.
ld integrate_over_selected_power(int m_g, int n_pat, const std::function<ld(ld)>& g) {
    const ld split = 1.0L + std::log(static_cast<ld>(n_pat));
    auto f = [&](ld u) { return max_pdf(m_g, n_pat, u) * g(u); };
    ld head = 0;
    const ld pieces[] = {0.0L, split / 64, split / 16, split / 4, split};
    for (int i = 0; i < 4; ++i) head += integrate_interval(f, pieces[i], pieces[i + 1]);
    const ld tail = integrate_half_line([&](ld t) { return f(split + t); });
    return head + tail;
}

}  // namespace

long double tricomi_u(long double a, long double b, long double z) {
    if (!(a > 0) || !(z > 0)) throw std::domain_error("oracle::tricomi_u: needs a > 0, z > 0");
    // t = tau / z
    const ld c = b - a - 1;
    const ld lg = std::lgamma(a);
    auto f = [&](ld tau) {
        if (tau <= 0 || !std::isfinite(tau)) return ld(0);
        return std::exp(-tau + (a - 1) * std::log(tau) + c * std::log1p(tau / z) - lg);
    };
    // (1 + tau/z) varies on the scale z; refine geometrically up to the bulk.
    const ld peak = std::max(ld(1), a);
    std::vector<ld> breaks{0};
    for (ld t = z / 8; t < peak; t *= 2) breaks.push_back(t);
    breaks.push_back(peak);
    ld head = 0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) head += integrate_interval(f, breaks[i], breaks[i + 1]);
    const ld tail = integrate_half_line([&](ld t) { return f(peak + t); });
    return std::pow(z, -a) * (head + tail);
}

long double whittaker_w(long double kappa, long double mu, long double z) {
    return std::exp(-z / 2) * std::pow(z, mu + 0.5L) * tricomi_u(mu - kappa + 0.5L, 1 + 2 * mu, z);
}

long double bessel_k(long double nu, long double x) {
    return integrate_half_line([&](ld t) {
        if (t > 50 || !std::isfinite(t)) return ld(0);
        return std::exp(-x * std::cosh(t)) * std::cosh(nu * t);
    });
}

long double selected_snr_cdf(long double gamma, int m_g, int m_h, int n_pat, long double omega) {
    if (gamma <= 0) return 0;
    return integrate_over_selected_power(m_g, n_pat, [&](ld u) {
        if (u <= 0) return ld(1);
        return gamma_cdf_unit_mean(m_h, gamma / (omega * u));
    });
}

long double hop1_sep_conditional(int M, int n_pat, int m_g, int m_h, long double omega) {
    ld c = 1;
    ld d = 1;
    if (M > 2) {
        c = 4 * (1 - 1 / std::sqrt(static_cast<ld>(M)));
        d = 3.0L / (2 * (M - 1));
    }
    return c * integrate_over_selected_power(m_g, n_pat, [&](ld u) {
        const ld g = d * omega * u / m_h;
        const ld mu = std::sqrt(g / (1 + g));
        const ld one_minus = 1 / ((1 + g) * (1 + mu));
        ld sum = 0;
        for (int k = 0; k < m_h; ++k) {
            sum += boost::math::binomial_coefficient<ld>(static_cast<unsigned>(m_h - 1 + k), static_cast<unsigned>(k)) *
                   std::pow((1 + mu) / 2, static_cast<ld>(k));
        }
        return std::pow(one_minus / 2, static_cast<ld>(m_h)) * sum;
    });
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        worst = std::max({worst, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return worst;
}

double ks_critical_001(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

double chi_square(const std::vector<std::uint64_t>& counts, const std::vector<double>& expected) {
    double stat = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double diff = static_cast<double>(counts[i]) - expected[i];
        stat += diff * diff / expected[i];
    }
    return stat;
}

double chi_square_critical(int dof, double level) {
    return boost::math::quantile(boost::math::complement(boost::math::chi_squared(dof), level));
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log10(x[i]);
        const double ly = std::log10(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle

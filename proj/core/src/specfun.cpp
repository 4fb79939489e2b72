// SPDX-License-Identifier: Apache-2.0

#include "uavrelay/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>

#include "detail/quadrature.hpp"

namespace uavrelay::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

const detail::GaussRule<double>& rule20() {
    static const auto rule = detail::make_gauss_rule<double>(20);
    return rule;
}

}  // namespace

QuadratureRule gauss_legendre(int order) {
    if (order < 2) {
        throw std::invalid_argument("gauss_legendre: order must be >= 2");
    }
    auto rule = detail::make_gauss_rule<double>(order);
    return QuadratureRule{std::move(rule.nodes), std::move(rule.weights), order};
}

double gaussian_q(double x) {
    // glibc erfc is accurate to about one ulp over the whole line, which keeps
    // the relative error of Q below 1e-14 for |x| <= 8.
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double bessel_k(double order, double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("bessel_k: argument must be positive");
    }
    const double nu = std::abs(order);
    const double value = boost::math::cyl_bessel_k(nu, x);
    if (!std::isfinite(value)) {
        throw std::overflow_error("bessel_k: result not representable");
    }
    return value;
}

double bessel_i0_scaled(double x) {
    x = std::abs(x);
    if (x < 500.0) {
        return boost::math::cyl_bessel_i(0, x) * std::exp(-x);
    }
    // Hankel expansion: terms shrink by (2k-1)^2 / (8 k x).
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 30; ++k) {
        term *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum / std::sqrt(2.0 * kPi * x);
}

double whittaker_w(double kappa, double mu, double z) {
    if (!(z > 0.0) || !std::isfinite(z)) {
        throw std::domain_error("whittaker_w: z must be positive and finite");
    }
    const double m = std::abs(mu);
    const double a = m - kappa + 0.5;  // first Tricomi-U parameter
    if (!(a > 0.0)) {
        throw std::domain_error("whittaker_w: requires mu - kappa + 1/2 > 0");
    }
    const double c = m + kappa - 0.5;  // exponent of (1 + u/z)

    // W = z^kappa e^{-z/2} / Gamma(a) * J,
    // J = int_0^inf 2 e^{-v^2} v^{2a-1} (1 + v^2/z)^c dv   (u = v^2).
    // For a < 1/2 the v^{2a-1} factor is singular; w = v^{2a} removes it.
    const bool power_substitution = a < 0.5;
    auto log_integrand = [&](double v) {
        return -v * v + (2.0 * a - 1.0) * std::log(v) + c * std::log1p(v * v / z);
    };

    const double q = std::sqrt(z);
    const double v_peak = std::sqrt(std::max(2.0 * a - 1.0 + 2.0 * std::max(c, 0.0), 0.0) / 2.0);
    const double v_max = v_peak + 9.0;

    std::vector<double> breaks{0.0};
    if (q < 1.0) {
        for (double v = q / 16.0; v < 1.0; v *= 2.0) breaks.push_back(v);
    }
    for (double v = std::max(breaks.back(), 0.0) + 0.5; v < v_max; v += 0.5) breaks.push_back(v);
    breaks.push_back(v_max);

    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < breaks.size(); ++i) shift = std::max(shift, log_integrand(breaks[i]));
    if (v_peak > 0.0) shift = std::max(shift, log_integrand(v_peak));

    const auto& rule = rule20();
    detail::IntegrationResult<double> result;
    if (power_substitution) {
        const double inv = 1.0 / (2.0 * a);
        // 2 v^{2a-1} dv = dw / a, v = w^{1/(2a)}
        auto f = [&](double w) {
            const double v = std::pow(w, inv);
            return std::exp(-v * v + c * std::log1p(v * v / z) - shift) / a;
        };
        std::vector<double> wbreaks;
        wbreaks.reserve(breaks.size());
        for (double v : breaks) wbreaks.push_back(std::pow(v, 2.0 * a));
        double rough = 0.0;
        for (std::size_t i = 0; i + 1 < wbreaks.size(); ++i) {
            rough += detail::integrate_fixed(f, wbreaks[i], wbreaks[i + 1], rule);
        }
        result = detail::integrate_panels(f, wbreaks, rule, 1e-13, 1e-16 * std::abs(rough));
    } else {
        auto f = [&](double v) { return v > 0.0 ? 2.0 * std::exp(log_integrand(v) - shift) : 0.0; };
        double rough = 0.0;
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
            rough += detail::integrate_fixed(f, breaks[i], breaks[i + 1], rule);
        }
        result = detail::integrate_panels(f, breaks, rule, 1e-13, 1e-16 * std::abs(rough));
    }
    if (!result.converged || !(result.value > 0.0) || !std::isfinite(result.value)) {
        throw ConvergenceError("whittaker_w: Tricomi-U integral did not converge");
    }
    const double log_w = kappa * std::log(z) - 0.5 * z - std::lgamma(a) + shift + std::log(result.value);
    return std::exp(log_w);
}

namespace {

// log |Gamma(n + 1/2 + i t)|^2 = log(pi sech(pi t)) + sum_{k<n} log((k + 1/2)^2 + t^2)
double log_abs_gamma_half_sq(int n, double t) {
    const double x = kPi * t;
    const double log_sech = std::log(2.0) - x - std::log1p(std::exp(-2.0 * x));
    double s = std::log(kPi) + log_sech;
    for (int k = 0; k < n; ++k) {
        const double h = k + 0.5;
        s += std::log(h * h + t * t);
    }
    return s;
}

}  // namespace

double meijer_g22_unit(int m_g, int m_h) {
    if (m_g < 1 || m_h < 1) {
        throw std::domain_error("meijer_g22_unit: severities must be >= 1");
    }
    const int lo = std::min(m_g, m_h);
    const int hi = std::max(m_g, m_h);

    // Mellin-Barnes integral along Re s = 1/2, where every Gamma argument
    // (m - 1/2 +- i t) has positive real part. The integrand
    // |Gamma(m_h - 1/2 + i t)|^2 |Gamma(m_g - 1/2 + i t)|^2 is even in t.
    auto log_f = [&](double t) { return log_abs_gamma_half_sq(lo - 1, t) + log_abs_gamma_half_sq(hi - 1, t); };

    double peak = log_f(0.0);
    double t_peak = 0.0;
    double t_end = 0.0;
    const double cutoff = std::log(1e16);
    for (double t = 0.25;; t += 0.25) {
        const double v = log_f(t);
        if (v > peak) {
            peak = v;
            t_peak = t;
        }
        if (t > t_peak && v < peak - cutoff) {
            t_end = t;
            break;
        }
    }
    auto f = [&](double t) { return std::exp(log_f(t) - peak); };
    std::vector<double> breaks;
    for (double t = 0.0; t < t_end; t += 1.0) breaks.push_back(t);
    breaks.push_back(t_end);
    const auto result = detail::integrate_panels(f, breaks, rule20(), 1e-14, 1e-17);
    if (!result.converged) {
        throw ConvergenceError("meijer_g22_unit: contour integral did not converge");
    }
    return std::exp(peak + std::log(result.value) - std::log(kPi));
}

double meijer_g_zeta(int m_g, int m_h) {
    if (m_g < 1 || m_h < 1) {
        throw std::domain_error("meijer_g_zeta: severities must be >= 1");
    }
    const int lo = std::min(m_g, m_h);
    const int hi = std::max(m_g, m_h);
    const double log_norm = std::log(static_cast<double>(lo) * hi) - 2.0 * std::lgamma(lo) - 2.0 * std::lgamma(hi);
    return std::exp(log_norm + std::log(meijer_g22_unit(lo, hi)));
}

}  // namespace uavrelay::specfun

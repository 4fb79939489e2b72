// SPDX-License-Identifier: Apache-2.0
//
// Special functions used by the error-probability analysis. Everything here is
// a pure function of its arguments and safe to call from any thread.

#ifndef UAVRELAY_SPECFUN_HPP
#define UAVRELAY_SPECFUN_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace uavrelay::specfun {

/// Raised when an iterative or quadrature evaluation misses its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Gauss-Legendre rule on [-1, 1]. Nodes ascending and symmetric about 0.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int order = 0;

    /// Integral of f over [a, b] with the rule mapped affinely.
    template <class F>
    double integrate(F&& f, double a, double b) const {
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            sum += weights[i] * f(mid + half * nodes[i]);
        }
        return half * sum;
    }
};

/// n-point Gauss-Legendre rule, exact for polynomials of degree 2n-1.
/// Throws std::invalid_argument for order < 2.
QuadratureRule gauss_legendre(int order);

/// Standard normal upper tail Q(x) = P(N(0,1) > x).
double gaussian_q(double x);

/// Modified Bessel function of the second kind K_nu(x), x > 0.
/// K is even in the order, so negative orders are reflected.
/// Throws std::domain_error for x <= 0 and std::overflow_error when the value
/// is not representable in double (tiny x with large order).
double bessel_k(double order, double x);

/// exp(-x) I_0(x) for x >= 0; finite for every x.
double bessel_i0_scaled(double x);

/// Whittaker W_{kappa,mu}(z) for z > 0.
///
/// Computed as exp(-z/2) z^(mu+1/2) U(mu-kappa+1/2, 1+2mu, z) with Tricomi's U
/// taken from its Laplace-type integral. W is even in mu, so the branch with
/// the larger first U parameter is used; that parameter must be positive.
/// Throws std::domain_error for z <= 0 or when mu-kappa+1/2 <= 0 for both signs
/// of mu, and ConvergenceError if the integral misses its tolerance.
double whittaker_w(double kappa, double mu, double z);

/// G^{2,2}_{2,2}(1 | 1-m_h, 1-m_g ; m_h-1, m_g-1), integer m_g, m_h >= 1.
double meijer_g22_unit(int m_g, int m_h);

/// zeta = m_g m_h / (Gamma(m_g)^2 Gamma(m_h)^2) * G^{2,2}_{2,2}(1 | ...).
/// Symmetric in its arguments (bitwise). Throws std::domain_error for
/// non-positive severities.
double meijer_g_zeta(int m_g, int m_h);

}  // namespace uavrelay::specfun

#endif  // UAVRELAY_SPECFUN_HPP

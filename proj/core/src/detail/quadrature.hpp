// SPDX-License-Identifier: Apache-2.0
//
// Gauss-Legendre rules and adaptive panel integration, templated on the
// working real type so the same code runs in double and in float128.

#ifndef UAVRELAY_DETAIL_QUADRATURE_HPP
#define UAVRELAY_DETAIL_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace uavrelay::detail {

template <class Real>
struct GaussRule {
    std::vector<Real> nodes;    // ascending, on [-1, 1]
    std::vector<Real> weights;
};

// Legendre P_n and P_n' at x by the three-term recurrence.
template <class Real>
void legendre_with_derivative(int n, const Real& x, Real& p, Real& dp) {
    Real p0 = 1;
    Real p1 = x;
    for (int k = 2; k <= n; ++k) {
        Real pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = pk;
    }
    p = (n == 0) ? Real(1) : p1;
    dp = Real(n) * (x * p1 - p0) / (x * x - 1);
}

// Newton iteration from the Tricomi initial guess; roots are computed for the
// positive half and mirrored so the rule is exactly symmetric.
template <class Real>
GaussRule<Real> make_gauss_rule(int n) {
    using std::abs;
    using std::cos;
    if (n < 1) throw std::invalid_argument("gauss rule order must be positive");
    GaussRule<Real> rule;
    rule.nodes.assign(static_cast<std::size_t>(n), Real(0));
    rule.weights.assign(static_cast<std::size_t>(n), Real(0));
    const Real eps = std::numeric_limits<Real>::epsilon();
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        Real x = Real(std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5)));
        Real p, dp;
        for (int iter = 0; iter < 100; ++iter) {
            legendre_with_derivative(n, x, p, dp);
            Real dx = p / dp;
            x -= dx;
            if (abs(dx) <= 4 * eps * abs(x)) {
                break;
            }
        }
        legendre_with_derivative(n, x, p, dp);
        Real w = 2 / ((1 - x * x) * dp * dp);
        // i-th root from the top lives at index n-1-i.
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        const auto lo = static_cast<std::size_t>(i);
        if (hi == lo) {
            rule.nodes[lo] = 0;
            rule.weights[lo] = w;
        } else {
            rule.nodes[hi] = x;
            rule.nodes[lo] = -x;
            rule.weights[hi] = w;
            rule.weights[lo] = w;
        }
    }
    return rule;
}

template <class Real, class F>
Real integrate_fixed(F&& f, const Real& a, const Real& b, const GaussRule<Real>& rule) {
    const Real half = (b - a) / 2;
    const Real mid = (a + b) / 2;
    Real sum = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return sum * half;
}

template <class Real>
struct IntegrationResult {
    Real value = 0;
    Real error = 0;
    bool converged = true;
};

namespace adaptive_impl {

template <class Real, class F>
void refine(F& f, const Real& a, const Real& b, const Real& whole, const GaussRule<Real>& rule,
            const Real& rel_tol, const Real& abs_tol, int depth, IntegrationResult<Real>& out) {
    using std::abs;
    const Real mid = (a + b) / 2;
    const Real left = integrate_fixed(f, a, mid, rule);
    const Real right = integrate_fixed(f, mid, b, rule);
    const Real both = left + right;
    const Real diff = abs(both - whole);
    if (diff <= rel_tol * abs(both) || diff <= abs_tol) {
        out.value += both;
        out.error += diff;
        return;
    }
    if (depth <= 0) {
        out.value += both;
        out.error += diff;
        out.converged = false;
        return;
    }
    refine(f, a, mid, left, rule, rel_tol, abs_tol / 2, depth - 1, out);
    refine(f, mid, b, right, rule, rel_tol, abs_tol / 2, depth - 1, out);
}

}  // namespace adaptive_impl

// Recursive bisection: a panel is accepted once the n-point estimate on the
// panel agrees with the sum over its two halves.
template <class Real, class F>
IntegrationResult<Real> integrate_adaptive(F&& f, const Real& a, const Real& b,
                                           const GaussRule<Real>& rule, const Real& rel_tol,
                                           const Real& abs_tol = Real(0), int max_depth = 40) {
    IntegrationResult<Real> out;
    if (a == b) return out;
    const Real whole = integrate_fixed(f, a, b, rule);
    adaptive_impl::refine(f, a, b, whole, rule, rel_tol, abs_tol, max_depth, out);
    return out;
}

// Integrates over the breakpoints given (ascending); each panel is adaptive.
template <class Real, class F>
IntegrationResult<Real> integrate_panels(F&& f, const std::vector<Real>& breaks,
                                         const GaussRule<Real>& rule, const Real& rel_tol,
                                         const Real& abs_tol = Real(0), int max_depth = 40) {
    IntegrationResult<Real> total;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        auto part = integrate_adaptive(f, breaks[i], breaks[i + 1], rule, rel_tol, abs_tol, max_depth);
        total.value += part.value;
        total.error += part.error;
        total.converged = total.converged && part.converged;
    }
    return total;
}

}  // namespace uavrelay::detail

#endif  // UAVRELAY_DETAIL_QUADRATURE_HPP

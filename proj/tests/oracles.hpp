#pragma once

// Reference computations for the tests. Each one takes a different route
// from the library: Boost's double-exponential quadrature instead of the
// Gauss-Kronrod panels, explicit polynomial coefficients instead of the
// three-term recurrence, closed-form Gaussian integrals, and so on.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline double integrate_half_line(const std::function<double(double)>& f) {
    boost::math::quadrature::exp_sinh<double> q;
    return q.integrate(f, 1e-13);
}

inline double integrate_interval(const std::function<double(double)>& f, double a, double b) {
    boost::math::quadrature::tanh_sinh<double> q;
    return q.integrate(f, a, b, 1e-13);
}

/// (1/pi) int_0^inf dxi / (beta + 2 re_psi(xi)), split at 1 so both pieces
/// are smooth for the double-exponential rule.
inline double upsilon(const std::function<double(double)>& re_psi, double beta) {
    auto f = [&](double xi) { return 1.0 / (beta + 2.0 * re_psi(xi)); };
    const double head = integrate_interval(f, 0.0, 1.0);
    const double tail = integrate_half_line([&](double s) { return f(1.0 + s); });
    return (head + tail) / std::numbers::pi;
}

/// Stable closed form without the library: substituting xi = (beta/(2 kappa))^(1/alpha) x
/// gives (1/pi) (beta/(2 kappa))^(1/alpha) / beta * (pi/alpha) / sin(pi/alpha).
inline double stable_upsilon(double kappa, double alpha, double beta) {
    const double scale = std::pow(beta / (2.0 * kappa), 1.0 / alpha);
    return scale / beta / alpha / std::sin(std::numbers::pi / alpha);
}

/// He_n(x) = n! sum_m (-1)^m x^(n-2m) / (m! (n-2m)! 2^m).
inline double hermite_explicit(int n, double x) {
    double acc = 0.0;
    for (int m = 0; 2 * m <= n; ++m) {
        const double lc = std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - 2.0 * m + 1.0) - m * std::log(2.0);
        const double term = std::exp(lc) * std::pow(x, n - 2 * m);
        acc += (m % 2 ? -term : term);
    }
    return acc;
}

/// Largest zero of He_n: scan down from 2 sqrt(n) + 1 for the first sign
/// change, then bisect.
inline double hermite_largest_zero(int n) {
    const double step = 1e-3;
    double hi = 2.0 * std::sqrt(static_cast<double>(n)) + 1.0;
    const double s_hi = std::copysign(1.0, hermite_explicit(n, hi));
    double lo = hi - step;
    while (std::copysign(1.0, hermite_explicit(n, lo)) == s_hi) {
        hi = lo;
        lo -= step;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (std::copysign(1.0, hermite_explicit(n, mid)) == s_hi) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

/// Heat kernel of kappa d^2/dx^2.
inline double gaussian_density(double kappa, double t, double x) {
    const double v = 4.0 * kappa * t;
    return std::exp(-x * x / v) / std::sqrt(std::numbers::pi * v);
}

/// int_0^inf (1 - cos(xi d)) / (beta + 2 kappa xi^2) dxi for kappa d^2/dx^2.
inline double brownian_cosine_integral(double kappa, double beta, double d) {
    const double c = std::sqrt(beta / (2.0 * kappa));
    return std::numbers::pi / (2.0 * std::sqrt(2.0 * kappa * beta)) * (1.0 - std::exp(-c * d));
}

/// Periodic sampling of the heat kernel applied to a sampled profile, by
/// direct summation of image Gaussians (no FFT).
inline std::vector<double> periodic_heat(const std::vector<double>& u0, double L, double kappa, double t) {
    const std::size_t n = u0.size();
    const double dx = L / static_cast<double>(n);
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double w = 0.0;
            for (int img = -20; img <= 20; ++img) {
                const double x = (static_cast<double>(i) - static_cast<double>(j)) * dx + img * L;
                w += gaussian_density(kappa, t, x);
            }
            acc += w * u0[j] * dx;
        }
        out[i] = acc;
    }
    return out;
}

}  // namespace oracle

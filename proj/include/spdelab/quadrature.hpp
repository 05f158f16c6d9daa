#pragma once

#include <functional>

namespace spdelab::quad {

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_intervals = 4000;
};

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 15-point Gauss-Kronrod quadrature on [a, b]: the
/// panel with the largest error estimate is bisected until the summed
/// estimate meets max(abs_tol, rel_tol * |value|). Endpoints are never
/// evaluated, so integrable endpoint singularities are tolerated.
Result integrate(const Integrand& f, double a, double b, const Options& opts = {});

/// Integral over [a, infinity) of an integrand decaying like x^(-decay),
/// decay > 1. Uses the substitution x = a * u^(-1/(decay-1)), which turns a
/// pure power tail into a constant on (0, 1].
Result integrate_power_tail(const Integrand& f, double a, double decay, const Options& opts = {});

/// Integral over [0, b] of an integrand behaving like x^(-singularity) at 0,
/// singularity < 1, via x = b * v^(1/(1-singularity)).
Result integrate_power_head(const Integrand& f, double b, double singularity,
                            const Options& opts = {});

/// Integral of f(x) * cos(omega * x) over [0, infinity) for smooth f that
/// decays at infinity (slowly decaying tails allowed).
Result integrate_fourier_cos(const Integrand& f, double omega, double rel_tol = 1e-10);

}  // namespace spdelab::quad

#pragma once

#include "spdelab/levy_symbol.hpp"
#include "spdelab/moment_curve.hpp"

#include <span>
#include <vector>

namespace spdelab {

/// Second moment of the linear equation with constant initial data eta:
///   f(t) = eta^2 + lambda^2 int_0^t f(s) ||p_{t-s}||^2 ds,
/// a scalar Volterra equation with a kernel singular like s^(-1/alpha) at 0.
struct VolterraProblem {
    LevySymbol sym;
    double lambda = 1.0;
    double eta = 1.0;
    double t_max = 100.0;
    double step = 0.02;
};

/// Product-integration solve: f is taken piecewise linear on the mesh and
/// integrated exactly against the kernel on each panel (analytic moments of
/// the singular first panel, 10-point Gauss-Legendre elsewhere). The late
/// time growth rate is fitted over the last third of the mesh.
///
/// Throws DomainError for non-integrable kernels (no local times) and when
/// lambda^2 times the first-panel weight reaches 1; AccuracyError if the
/// solution fails to be positive and nondecreasing.
MomentCurve solve_second_moment(const VolterraProblem& prob);

/// Laplace transform of f at beta: (eta^2/beta) / (1 - lambda^2 Upsilon(beta)),
/// or +infinity once lambda^2 Upsilon(beta) >= 1 (the renewal series diverges).
double laplace_fixed_point(const VolterraProblem& prob, double beta);

/// Trapezoidal int_0^T e^{-beta t} f(t) dt on the mesh, plus the tail past T
/// extrapolated with the fitted growth rate. Requires beta above that rate.
double mesh_laplace_transform(const MomentCurve& curve, double beta);

/// Bisection on beta for the point where laplace_fixed_point switches from
/// finite (large beta) to infinite (small beta). Returns the bracket midpoint
/// once the bracket is narrower than `tol`.
double locate_divergence_flip(const VolterraProblem& prob, double tol = 1e-9);

enum class SeriesState { Finite, Divergent };

const char* to_string(SeriesState s) noexcept;

struct ScanEntry {
    double eta;
    SeriesState state;
};

/// For asymptotically linear sigma with |sigma(z)| >= q0 |z| beyond |z| > A:
/// the renewal series diverges iff eta^2 > A^2 q0^2 Upsilon(beta).
/// Requires q0^2 Upsilon(beta) > 1.
std::vector<ScanEntry> divergence_scan(const LevySymbol& sym, double beta, double q0, double A,
                                       std::span<const double> eta_grid);

}  // namespace spdelab

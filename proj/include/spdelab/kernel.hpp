#pragma once

#include "spdelab/levy_symbol.hpp"

#include <optional>
#include <span>
#include <vector>

namespace spdelab {

/// Uniform frequency grid [0, xi_max] with n_modes intervals for pointwise
/// Fourier inversion.
struct FrequencyGrid {
    double xi_max;
    int n_modes;
};

struct DensitySamples {
    std::vector<double> x;
    std::vector<double> p;
    double dx;
};

/// Transition densities p_t of the symmetric Levy semigroup and the L^2
/// quantities built from them. All symbols are treated as symmetric
/// (Im Psi = 0).
class KernelEvaluator {
public:
    explicit KernelEvaluator(LevySymbol sym, std::optional<FrequencyGrid> grid = std::nullopt);

    const LevySymbol& symbol() const noexcept { return sym_; }

    /// p_t(x) = (1/pi) int_0^inf cos(xi x) exp(-t Re Psi(xi)) dxi. Gaussian
    /// closed form for alpha = 2; otherwise Simpson's rule on the declared
    /// grid (ResolutionError when t Re Psi(xi_max) < 20) or adaptive
    /// quadrature when no grid was declared.
    double density(double t, double x) const;

    /// p_t on the periodic x-grid dual to n frequency samples with spacing
    /// dxi, by one inverse FFT. Sums to exactly one against dx.
    DensitySamples density_grid(double t, double dxi, std::size_t n) const;

    /// ||p_s||^2 = (1/pi) int_0^inf exp(-2 s Re Psi(xi)) dxi.
    double l2_norm_sq(double s) const;

    /// int_0^t ||p_s||^2 ds, evaluated in frequency as
    /// (1/pi) int_0^inf (1 - exp(-2 t Re Psi)) / (2 Re Psi) dxi.
    double dissipation_integral(double t) const;

    /// P_t u0 on a periodic grid of length L: Fourier mode k multiplied by
    /// exp(-t Re Psi(2 pi k / L)).
    std::vector<double> semigroup_apply(double t, std::span<const double> u0, double L) const;

private:
    double cutoff(double scale_t, double level) const;

    LevySymbol sym_;
    std::optional<FrequencyGrid> grid_;
};

double density(const KernelEvaluator& ev, double t, double x);
double l2_norm_sq(const KernelEvaluator& ev, double s);
double dissipation_integral(const KernelEvaluator& ev, double t);
std::vector<double> semigroup_apply(const KernelEvaluator& ev, double t, std::span<const double> u0, double L);

}  // namespace spdelab

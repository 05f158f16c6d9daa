#pragma once

#include "spdelab/levy_symbol.hpp"

#include <limits>

namespace spdelab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// nu(alpha) = csc(pi/alpha) / (2^(1/alpha) alpha), the constant in
/// Upsilon(beta) = nu kappa^(-1/alpha) beta^(-1+1/alpha) for stable symbols.
///
/// Derived from int_0^inf dx/(1+x^alpha) = (pi/alpha) csc(pi/alpha). A secant
/// in place of the cosecant is undefined at alpha = 2 and disagrees with
/// quadrature everywhere else; the quadrature tests pin the cosecant.
double stable_nu(double alpha);

/// Closed-form potential integral of kappa |xi|^alpha, alpha in (1, 2].
double stable_upsilon(double kappa, double alpha, double beta);

/// Potential integral Upsilon(beta) = (1/2pi) int dxi / (beta + 2 Re Psi(xi))
/// together with its generalised inverse and its beta -> 0 limit.
///
/// Single-power symbols use the closed form; everything else goes through
/// adaptive Gauss-Kronrod panels on [0, T] and an analytic power-law tail
/// past T whose remainder is integrated after a tail-flattening substitution.
/// +infinity is returned (not thrown) whenever the integral diverges.
class UpsilonEvaluator {
public:
    enum class Method { Auto, Quadrature };

    explicit UpsilonEvaluator(LevySymbol sym, double quad_rel_tol = 1e-9, double tail_split = 0.0,
                              Method method = Method::Auto);

    const LevySymbol& symbol() const noexcept { return sym_; }
    double quad_rel_tol() const noexcept { return rel_tol_; }
    bool finite() const noexcept { return finite_; }

    double operator()(double beta) const;
    double by_quadrature(double beta) const;
    double inverse(double t) const;
    double sup() const;

    /// int_T^inf dxi / (beta + 2 Re Psi(xi)), without the 1/pi factor.
    double tail_integral(double beta, double T) const;

    /// The xi at which 2 Re Psi(xi) = beta.
    double crossover(double beta) const;

private:
    LevySymbol sym_;
    double rel_tol_;
    double tail_split_;
    Method method_;
    bool finite_;
};

/// Upsilon(beta), beta > 0; +infinity when the symbol has no local times.
double upsilon_of(const UpsilonEvaluator& ev, double beta);

/// sup{beta > 0 : Upsilon(beta) > t} with sup(empty) = 0.
double upsilon_inverse(const UpsilonEvaluator& ev, double t);

/// lim_{beta -> 0} Upsilon(beta): +infinity for recurrent symbols.
double upsilon_sup(const UpsilonEvaluator& ev);

}  // namespace spdelab

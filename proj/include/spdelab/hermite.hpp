#pragma once

namespace spdelab {

/// Probabilists' Hermite polynomial He_p(x), evaluated by the three-term
/// recurrence He_{k+1} = x He_k - k He_{k-1}.
double hermite_he(int p, double x);

/// Derivative He_p'(x) = p He_{p-1}(x).
double hermite_he_derivative(int p, double x);

/// Largest zero z_p of He_p for even p in [2, 1000].
///
/// Computed as the top eigenvalue of the Jacobi matrix of the recurrence
/// (zero diagonal, off-diagonal sqrt(k)) by Sturm-sequence bisection, then
/// polished with one Newton step on the recurrence. Results are memoised;
/// the cache is safe for concurrent use.
double largest_hermite_zero(int p);

}  // namespace spdelab

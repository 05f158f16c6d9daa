#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace spdelab {

/// Least-squares growth rate of ln(moment) over [t_from, t_to].
struct GammaFit {
    double slope = 0.0;
    double slope_stderr = 0.0;
    double t_from = 0.0;
    double t_to = 0.0;
};

/// t -> estimate of E|u(t, .)|^p with ensemble standard errors. Deterministic
/// curves (renewal solver) carry zero errors and n_paths = 0.
struct MomentCurve {
    int p = 2;
    std::vector<double> times;
    std::vector<double> moments;
    std::vector<double> std_error;
    std::size_t n_paths = 0;
    std::optional<GammaFit> fitted_gamma;
    /// Why no fit was produced, when fitted_gamma is empty.
    std::string fit_note;
    /// Share of the p-th moment carried by the top 1% of paths at the end of
    /// the fit window (ensemble curves only).
    std::optional<double> tail_fraction;
    std::string meta;
};

/// OLS slope of ln(moment) against t over the samples with t in [t_from, t_to].
/// Throws DomainError with fewer than three usable samples.
GammaFit fit_gamma(const MomentCurve& curve, double t_from, double t_to);

}  // namespace spdelab

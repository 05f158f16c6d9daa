#pragma once

#include "spdelab/levy_symbol.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>

namespace spdelab {

/// sigma(u) = lambda * u (parabolic Anderson model). lambda = 0 is accepted
/// as a noiseless control; the analytic bounds reject it.
struct LinearSigma {
    double lambda;
};

/// A general Lipschitz nonlinearity described by the constants the bounds
/// read, plus an evaluator for the simulator.
struct GeneralSigma {
    double sigma0;                    // sigma(0)
    double lip;                       // Lipschitz constant, > 0
    double q_inf;                     // inf_{x != 0} |sigma(x)/x|
    double q_asymp;                   // liminf_{|x| -> inf} |sigma(x)/x|
    std::optional<double> bound_sup;  // sup |sigma| when bounded
    std::function<double(double)> eval;
    std::string shape = "custom";

    /// sigma(u) = clamp(slope * u, -cap, cap).
    static GeneralSigma clamp(double slope, double cap);
    /// sigma(u) = offset + amplitude * sin(u); bounded away from 0 when
    /// |amplitude| < |offset|.
    static GeneralSigma sine_shift(double offset, double amplitude);
};

class Sigma {
public:
    Sigma(LinearSigma s) : v_(s) {}  // NOLINT(google-explicit-constructor)
    Sigma(GeneralSigma s) : v_(std::move(s)) {}  // NOLINT(google-explicit-constructor)

    double operator()(double u) const;

    bool is_linear() const noexcept { return std::holds_alternative<LinearSigma>(v_); }
    /// lambda for linear sigma; throws DomainError otherwise.
    double lambda() const;

    double sigma0() const noexcept;
    double lip() const noexcept;
    double q_inf() const noexcept;
    double q_asymp() const noexcept;
    std::optional<double> bound_sup() const noexcept;
    std::string describe() const;

    const std::variant<LinearSigma, GeneralSigma>& variant() const noexcept { return v_; }

private:
    std::variant<LinearSigma, GeneralSigma> v_;
};

/// Initial data bounded between `lower` (eta = inf u0) and `upper`.
/// `profile` selects the shape sampled by the simulator: "constant" or
/// "cosine" (one period across the domain, oscillating between the bounds).
struct InitialData {
    double lower = 1.0;
    double upper = 1.0;
    std::string profile = "constant";

    static InitialData constant(double eta) { return {eta, eta, "constant"}; }
    bool is_constant() const noexcept { return profile == "constant"; }
    double eta() const noexcept { return lower; }
    /// u0 at position x on a periodic domain of length L.
    double at(double x, double L) const;
};

/// A complete SPDE instance du = L u dt + sigma(u) dW.
struct ModelSpec {
    LevySymbol sym;
    Sigma sigma;
    InitialData u0;

    /// Throws ConfigError when an invariant of the three parts fails.
    void validate() const;
};

}  // namespace spdelab

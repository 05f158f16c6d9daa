#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace spdelab {

/// Psi(xi) = kappa * xi^2, i.e. the generator kappa * d^2/dx^2.
struct BrownianScaled {
    double kappa;
};

/// Psi(xi) = kappa * |xi|^alpha, alpha in (0, 2].
struct StableSym {
    double kappa;
    double alpha;
};

struct StableTerm {
    double kappa;
    double alpha;
};

/// Psi(xi) = sum_i kappa_i |xi|^alpha_i with one to four terms.
struct SumStable {
    std::vector<StableTerm> terms;
};

/// User-supplied real part of a Levy exponent. The power-law exponents of
/// Re Psi near 0 and near infinity are what the recurrence and local-time
/// classifications read; when absent they are estimated numerically, which
/// can fail.
struct CustomSymbol {
    std::function<double(double)> re_psi;
    std::optional<double> small_exponent;
    std::optional<double> large_exponent;
    std::string name = "custom";
};

/// Characteristic exponent of a one-dimensional Levy process, exposed through
/// its real part. Immutable once built; all members are safe to call
/// concurrently.
class LevySymbol {
public:
    using Variant = std::variant<BrownianScaled, StableSym, SumStable, CustomSymbol>;

    static LevySymbol brownian(double kappa);
    static LevySymbol stable(double kappa, double alpha);
    static LevySymbol sum_stable(std::vector<StableTerm> terms);
    static LevySymbol custom(CustomSymbol custom);

    const Variant& variant() const noexcept { return v_; }

    /// Re Psi(xi). Throws DomainError when a custom evaluator returns a
    /// negative or NaN value.
    double re_psi(double xi) const;

    /// True for the variants with an exact closed form.
    bool is_closed_form() const noexcept;

    /// (kappa, alpha) when Re Psi is a single power kappa |xi|^alpha.
    std::optional<StableTerm> as_single_power() const noexcept;

    /// Dominant power at xi -> 0 (smallest alpha) and at xi -> infinity
    /// (largest alpha). Custom symbols report the declared exponents, or
    /// estimates when none were declared (nullopt if the estimate is
    /// inconclusive).
    std::optional<double> small_exponent() const;
    std::optional<double> large_exponent() const;

    /// Leading large-xi behaviour Re Psi(xi) ~ coef * xi^exponent, measured at
    /// `at` for custom symbols.
    StableTerm tail_power(double at) const;

    std::string describe() const;

private:
    explicit LevySymbol(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

enum class Recurrence { Recurrent, Transient };

const char* to_string(Recurrence r) noexcept;

/// Re Psi(xi).
double re_psi(const LevySymbol& sym, double xi);

/// Recurrence of the symmetrised process, decided by whether
/// int_{-1}^{1} dxi / Re Psi(xi) diverges: divergent iff the small-xi power
/// is >= 1.
Recurrence classify_recurrence(const LevySymbol& sym);

/// Whether the symmetrised process has local times, equivalently whether the
/// potential integral is finite: iff the large-xi power is > 1.
bool has_local_times(const LevySymbol& sym);

}  // namespace spdelab

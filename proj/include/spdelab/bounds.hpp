#pragma once

#include "spdelab/levy_symbol.hpp"
#include "spdelab/model.hpp"
#include "spdelab/upsilon.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spdelab {

enum class Verdict { Yes, No, Unknown };

const char* to_string(Verdict v) noexcept;

struct VerdictWithReason {
    Verdict verdict = Verdict::Unknown;
    std::string reason;
};

/// Lower bound on the second-moment Lyapunov exponent. `applicable` is false
/// when a hypothesis (inf u0 > 0, inf |sigma(x)/x| > 0) fails; value is then 0.
struct LowerBound {
    double value = 0.0;
    bool applicable = false;
    std::string note;
};

struct AndersonVerdict {
    Verdict verdict = Verdict::Unknown;
    std::optional<double> gamma2;  // exact second-moment exponent when intermittent
    std::string reason;
};

struct RatioCheck {
    double theta;  // p^3 lambda^4 / kappa
    double ratio;  // theta / exact exponent
};

struct HolderExponents {
    double temporal;
    double spatial;
};

/// Every analytic quantity computed for one model. Fields whose computation
/// failed are absent and the failure is recorded in `field_errors`.
struct BoundsReport {
    std::string model;
    std::vector<std::pair<double, double>> upsilon_samples;
    std::optional<double> upsilon_sup;
    LowerBound gamma2_lower;
    std::map<int, double> gamma_p_upper;
    std::map<int, double> hermite_zeros;
    VerdictWithReason weakly_intermittent;
    std::optional<Recurrence> recurrence;
    std::optional<bool> local_times;
    std::map<int, double> delta_p;
    std::optional<double> sublinear_eta0;
    std::optional<double> sublinear_eta0_prose;
    std::optional<std::map<int, double>> exact_anderson;
    std::optional<HolderExponents> holder_exponents;
    bool subdiffusive = false;
    std::map<std::string, std::string> field_errors;
};

struct SublinearInputs {
    double A;
    double q0;
    double beta;
};

struct ReportOptions {
    std::vector<double> beta_samples = {0.01, 0.1, 1.0, 10.0, 100.0};
    std::optional<SublinearInputs> sublinear;
    double quad_rel_tol = 1e-9;
};

/// Upper bound on the p-th moment Lyapunov exponent,
/// inf{beta > 0 : Upsilon(2 beta / p) < (z_p Lip)^-2} = (p/2) Upsilon^-1((z_p Lip)^-2).
double gamma_p_upper_bound(const ModelSpec& m, int p);

/// Lower bound Upsilon^-1(1/q^2) with q = inf |sigma(x)/x|.
LowerBound gamma2_lower_bound(const ModelSpec& m);

/// Weak-intermittency verdict for linear sigma.
AndersonVerdict anderson_verdict(const ModelSpec& m);

/// p (p^2 - 1) lambda^4 / (48 kappa): the exact exponent for kappa d^2/dx^2.
double exact_anderson_gamma(int p, double lambda, double kappa);

/// theta(p) = p^3 lambda^4 / kappa against the exact exponent. Throws
/// std::logic_error if 1 <= ratio <= 48 (1 + 1/(p^2 - 1)) fails.
RatioCheck ratio_check(int p, double lambda, double kappa);

/// delta(p) = 1 / (z_p sqrt(sup Upsilon)) for transient symbols: any
/// Lipschitz constant below it makes the p-th upper bound vanish.
double transient_smallness_threshold(const LevySymbol& sym, int p, double quad_rel_tol = 1e-9);

/// eta_0 = A q0 sqrt(Upsilon(beta)): above it the Laplace transform of the
/// second moment is infinite for asymptotically linear sigma.
double sublinear_sufficient_eta(const ModelSpec& m, double A, double q0, double beta);

/// sqrt(p/pi) ||sigma o u|| sqrt(int (1 - cos(xi delta)) / (beta + 2 Re Psi) dxi),
/// the |x - z| dependent factor of the spatial increment bound.
double spatial_modulus_bound(const ModelSpec& m, int p, double beta, double delta, double norm_sigma_u);

struct TemporalModulus {
    double d1;
    double d2;
    double total() const { return d1 + d2; }
};

/// Bound on the time increment of the stochastic convolution between t and T,
/// split into the contribution of the noise before t (d1) and on [t, T] (d2).
TemporalModulus temporal_modulus_parts(const ModelSpec& m, int p, double beta, double t, double T,
                                       double norm_sigma_u);

double temporal_modulus_bound(const ModelSpec& m, int p, double beta, double t, double T,
                              double norm_sigma_u);

/// Aggregates every bound for `m` over the even moments in `p_list`.
BoundsReport full_report(const ModelSpec& m, const std::vector<int>& p_list, const ReportOptions& opts = {});

}  // namespace spdelab

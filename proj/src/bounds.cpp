#include "spdelab/bounds.hpp"

#include "spdelab/errors.hpp"
#include "spdelab/hermite.hpp"
#include "spdelab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace spdelab {

namespace {

void require_even(int p, const char* what) {
    if (p < 2 || p % 2 != 0) throw DomainError(std::string(what) + ": p must be an even integer >= 2");
}

void require_local_times(const LevySymbol& sym) {
    if (!has_local_times(sym))
        throw DomainError("generator admits no solution theory (Upsilon = infinity) for " + sym.describe());
}

void require_converged(const quad::Result& r, const char* what) {
    if (!r.converged || !std::isfinite(r.value)) {
        std::ostringstream os;
        os << what << ": quadrature did not converge (error estimate " << r.abs_error << ")";
        throw AccuracyError(os.str(), r.abs_error);
    }
}

// Single-power alpha = 2 symbols: the generator is kappa d^2/dx^2.
std::optional<double> brownian_kappa(const LevySymbol& sym) {
    if (auto p = sym.as_single_power(); p && p->alpha == 2.0) return p->kappa;
    return std::nullopt;
}

}  // namespace

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Yes: return "yes";
        case Verdict::No: return "no";
        case Verdict::Unknown: return "unknown";
    }
    return "unknown";
}

double gamma_p_upper_bound(const ModelSpec& m, int p) {
    require_even(p, "gamma_p_upper_bound");
    require_local_times(m.sym);
    const double lip = m.sigma.lip();
    if (!(lip > 0.0)) throw DomainError("gamma_p_upper_bound needs Lip(sigma) > 0");
    const UpsilonEvaluator ev(m.sym);
    const double z = largest_hermite_zero(p);
    const double level = 1.0 / (z * lip * z * lip);
    return 0.5 * p * ev.inverse(level);
}

LowerBound gamma2_lower_bound(const ModelSpec& m) {
    LowerBound out;
    if (!(m.u0.eta() > 0.0)) {
        out.note = "NotApplicable: inf u0 = 0";
        return out;
    }
    const double q = m.sigma.q_inf();
    if (!(q > 0.0)) {
        out.note = "NotApplicable: inf |sigma(x)/x| = 0";
        return out;
    }
    require_local_times(m.sym);
    const UpsilonEvaluator ev(m.sym);
    out.value = ev.inverse(1.0 / (q * q));
    out.applicable = true;
    if (out.value == 0.0) out.note = "transient saturation: sup Upsilon <= q^-2";
    return out;
}

AndersonVerdict anderson_verdict(const ModelSpec& m) {
    if (!m.sigma.is_linear()) throw DomainError("anderson_verdict needs linear sigma");
    require_local_times(m.sym);
    AndersonVerdict out;
    const double lambda = m.sigma.lambda();
    if (!(m.u0.eta() > 0.0)) {
        out.reason = "inf u0 = 0";
        return out;
    }
    if (lambda == 0.0) {
        out.verdict = Verdict::No;
        out.reason = "lambda = 0: no noise";
        return out;
    }
    const UpsilonEvaluator ev(m.sym);
    const double level = 1.0 / (lambda * lambda);
    if (classify_recurrence(m.sym) == Recurrence::Recurrent) {
        out.verdict = Verdict::Yes;
        out.reason = "recurrent symmetrised process";
    } else if (ev.sup() >= level) {
        out.verdict = Verdict::Yes;
        out.reason = "transient, sup Upsilon >= lambda^-2";
    } else {
        out.verdict = Verdict::No;
        out.reason = "transient, sup Upsilon < lambda^-2";
        return out;
    }
    out.gamma2 = ev.inverse(level);
    return out;
}

double exact_anderson_gamma(int p, double lambda, double kappa) {
    if (p < 2) throw DomainError("exact_anderson_gamma: p must be >= 2");
    if (!(kappa > 0.0)) throw DomainError("exact_anderson_gamma: kappa must be > 0");
    const double l2 = lambda * lambda;
    return p * (static_cast<double>(p) * p - 1.0) * l2 * l2 / (48.0 * kappa);
}

RatioCheck ratio_check(int p, double lambda, double kappa) {
    require_even(p, "ratio_check");
    const double l2 = lambda * lambda;
    const double theta = static_cast<double>(p) * p * p * l2 * l2 / kappa;
    const double ratio = theta / exact_anderson_gamma(p, lambda, kappa);
    const double upper = 48.0 * (1.0 + 1.0 / (static_cast<double>(p) * p - 1.0));
    constexpr double slack = 1e-12;
    if (!(ratio >= 1.0 - slack && ratio <= upper * (1.0 + slack))) {
        std::ostringstream os;
        os << "ratio_check: theta/gamma = " << ratio << " outside [1, " << upper << "] at p=" << p;
        throw std::logic_error(os.str());
    }
    return {theta, ratio};
}

double transient_smallness_threshold(const LevySymbol& sym, int p, double quad_rel_tol) {
    require_even(p, "transient_smallness_threshold");
    require_local_times(sym);
    if (classify_recurrence(sym) == Recurrence::Recurrent)
        throw DomainError("transient_smallness_threshold: " + sym.describe() + " is recurrent");
    const UpsilonEvaluator ev(sym, quad_rel_tol);
    return 1.0 / (largest_hermite_zero(p) * std::sqrt(ev.sup()));
}

double sublinear_sufficient_eta(const ModelSpec& m, double A, double q0, double beta) {
    if (!(A >= 0.0)) throw DomainError("sublinear_sufficient_eta: A must be >= 0");
    if (!(q0 > 0.0)) throw DomainError("sublinear_sufficient_eta: q0 must be > 0");
    if (!(beta > 0.0)) throw DomainError("sublinear_sufficient_eta: beta must be > 0");
    if (!(q0 < m.sigma.q_asymp()))
        throw DomainError("sublinear_sufficient_eta: need q0 < liminf |sigma(x)/x| (q_asymp)");
    require_local_times(m.sym);
    if (classify_recurrence(m.sym) != Recurrence::Recurrent)
        throw DomainError("sublinear_sufficient_eta: symmetrised process must be recurrent");
    const UpsilonEvaluator ev(m.sym);
    const double ups = ev(beta);
    if (!(q0 * q0 * ups > 1.0)) throw DomainError("sublinear_sufficient_eta: need q0^2 Upsilon(beta) > 1");
    return A * q0 * std::sqrt(ups);
}

double spatial_modulus_bound(const ModelSpec& m, int p, double beta, double delta, double norm_sigma_u) {
    require_even(p, "spatial_modulus_bound");
    if (!(beta > 0.0)) throw DomainError("spatial_modulus_bound: beta must be > 0");
    if (!(delta >= 0.0)) throw DomainError("spatial_modulus_bound: delta must be >= 0");
    if (delta == 0.0 || norm_sigma_u == 0.0) return 0.0;
    require_local_times(m.sym);
    const UpsilonEvaluator ev(m.sym);
    const LevySymbol& sym = m.sym;
    auto g = [&](double xi) { return 1.0 / (beta + 2.0 * sym.re_psi(xi)); };

    // Whole periods of cos(delta xi) up to X, then the non-oscillating tail
    // of g minus the oscillating tail starting at a period boundary.
    const double period = 2.0 * std::numbers::pi / delta;
    const double scale = std::max(ev.crossover(beta), 1.0);
    const int periods = std::max(8, static_cast<int>(std::ceil(64.0 * scale / period)));
    const double X = periods * period;
    quad::Options opts;
    opts.rel_tol = 1e-10;
    double head = 0.0;
    auto f = [&](double xi) { return (1.0 - std::cos(delta * xi)) * g(xi); };
    for (int k = 0; k < periods; ++k) {
        auto r = quad::integrate(f, k * period, (k + 1) * period, opts);
        require_converged(r, "spatial_modulus_bound");
        head += r.value;
    }
    const double tail_plain = ev.tail_integral(beta, X);
    auto osc = quad::integrate_fourier_cos([&](double s) { return g(X + s); }, delta, 1e-10);
    require_converged(osc, "spatial_modulus_bound (oscillatory tail)");
    const double integral = 2.0 * (head + tail_plain - osc.value);
    return std::sqrt(p / std::numbers::pi) * norm_sigma_u * std::sqrt(std::max(integral, 0.0));
}

TemporalModulus temporal_modulus_parts(const ModelSpec& m, int p, double beta, double t, double T,
                                       double norm_sigma_u) {
    require_even(p, "temporal_modulus_bound");
    if (!(beta > 0.0)) throw DomainError("temporal_modulus_bound: beta must be > 0");
    if (!(t >= 0.0 && T >= t)) throw DomainError("temporal_modulus_bound: need 0 <= t <= T");
    if (T == t || norm_sigma_u == 0.0) return {0.0, 0.0};
    require_local_times(m.sym);
    const UpsilonEvaluator ev(m.sym);
    const LevySymbol& sym = m.sym;
    const double h = T - t;
    const double b = beta / p;

    // (1 - e^{-h Re Psi})^2 / (beta/p + Re Psi): saturates to 1/(beta/p + Re Psi)
    // once h Re Psi is large, where the Upsilon tail takes over.
    auto f = [&](double xi) {
        const double r = sym.re_psi(xi);
        const double d = -std::expm1(-h * r);
        return d * d / (b + r);
    };
    double cut = std::max(ev.crossover(2.0 / h), ev.crossover(2.0 * b));
    while (h * sym.re_psi(cut) < 40.0) cut *= 2.0;
    quad::Options opts;
    opts.rel_tol = 1e-10;
    double head = 0.0;
    double lo = 0.0;
    double hi = cut / 1024.0;
    while (lo < cut) {
        auto r = quad::integrate(f, lo, hi, opts);
        require_converged(r, "temporal_modulus_bound");
        head += r.value;
        lo = hi;
        hi = std::min(hi * 4.0, cut);
    }
    // int_cut^inf dxi / (b + Re Psi) = 2 int_cut^inf dxi / (2b + 2 Re Psi).
    const double tail = 2.0 * ev.tail_integral(2.0 * b, cut);
    const double integral = 2.0 * (head + tail);
    TemporalModulus out;
    out.d1 = std::exp(beta * t / p) * std::sqrt(p / std::numbers::pi) * norm_sigma_u * std::sqrt(integral);
    out.d2 = std::sqrt(8.0 * p) * std::exp(beta * T / p) * norm_sigma_u * std::sqrt(ev(1.0 / h));
    return out;
}

double temporal_modulus_bound(const ModelSpec& m, int p, double beta, double t, double T,
                              double norm_sigma_u) {
    return temporal_modulus_parts(m, p, beta, t, T, norm_sigma_u).total();
}

BoundsReport full_report(const ModelSpec& m, const std::vector<int>& p_list, const ReportOptions& opts) {
    BoundsReport rep;
    rep.model = m.sym.describe() + "; " + m.sigma.describe();
    auto attempt = [&](const std::string& field, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            rep.field_errors[field] = e.what();
        }
    };

    attempt("recurrence", [&] { rep.recurrence = classify_recurrence(m.sym); });
    attempt("local_times", [&] { rep.local_times = has_local_times(m.sym); });

    if (rep.local_times && !*rep.local_times) {
        rep.weakly_intermittent = {Verdict::Unknown,
                                   "generator admits no solution theory (Upsilon = infinity)"};
        return rep;
    }

    const UpsilonEvaluator ev(m.sym, opts.quad_rel_tol);
    attempt("upsilon_samples", [&] {
        for (double b : opts.beta_samples) rep.upsilon_samples.emplace_back(b, ev(b));
    });
    attempt("upsilon_sup", [&] { rep.upsilon_sup = ev.sup(); });

    for (int p : p_list) {
        attempt("hermite_zeros." + std::to_string(p), [&] { rep.hermite_zeros[p] = largest_hermite_zero(p); });
        attempt("gamma_p_upper." + std::to_string(p), [&] { rep.gamma_p_upper[p] = gamma_p_upper_bound(m, p); });
    }
    attempt("gamma2_lower", [&] { rep.gamma2_lower = gamma2_lower_bound(m); });

    if (rep.recurrence == Recurrence::Transient) {
        for (int p : p_list) {
            attempt("delta_p." + std::to_string(p),
                    [&] { rep.delta_p[p] = transient_smallness_threshold(m.sym, p, opts.quad_rel_tol); });
        }
    }

    if (opts.sublinear) {
        attempt("sublinear_eta0", [&] {
            const auto& s = *opts.sublinear;
            rep.sublinear_eta0 = sublinear_sufficient_eta(m, s.A, s.q0, s.beta);
            rep.sublinear_eta0_prose = s.A * s.q0 * ev(s.beta);
        });
    }

    const auto kappa2 = brownian_kappa(m.sym);
    if (m.sigma.is_linear() && kappa2) {
        std::map<int, double> exact;
        for (int p : p_list) exact[p] = exact_anderson_gamma(p, m.sigma.lambda(), *kappa2);
        rep.exact_anderson = exact;
    }
    if (auto sp = m.sym.as_single_power(); sp && sp->alpha > 1.0) {
        rep.holder_exponents = HolderExponents{(sp->alpha - 1.0) / (2.0 * sp->alpha),
                                               std::min(0.5, sp->alpha - 1.0)};
    }
    rep.subdiffusive = m.sigma.bound_sup().has_value();

    // Verdict.
    auto& wi = rep.weakly_intermittent;
    bool uppers_finite = !p_list.empty();
    for (int p : p_list) {
        auto it = rep.gamma_p_upper.find(p);
        if (it == rep.gamma_p_upper.end() || !std::isfinite(it->second)) uppers_finite = false;
    }
    std::optional<AndersonVerdict> anderson;
    if (m.sigma.is_linear()) {
        attempt("anderson_verdict", [&] { anderson = anderson_verdict(m); });
    }
    if (rep.gamma2_lower.applicable && rep.gamma2_lower.value > 0.0 && uppers_finite) {
        wi = {Verdict::Yes, "gamma2 lower bound > 0 and upper bounds finite for requested p"};
    } else if (anderson && anderson->verdict == Verdict::No) {
        wi = {Verdict::No, anderson->reason};
    } else if (!rep.gamma2_lower.applicable) {
        wi = {Verdict::Unknown, "no lower-bound hypothesis (" + rep.gamma2_lower.note + ")"};
        if (rep.subdiffusive) wi.reason += "; bounded sigma: moments grow subdiffusively";
    } else if (!uppers_finite) {
        wi = {Verdict::Unknown, "upper bound unavailable for a requested p"};
    } else {
        wi = {Verdict::Unknown, "lower bound vanishes (transient saturation)"};
    }
    return rep;
}

}  // namespace spdelab

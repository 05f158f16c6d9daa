#include "spdelab/upsilon.hpp"

#include "spdelab/errors.hpp"
#include "spdelab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace spdelab {

namespace {

constexpr int kMaxInverseIterations = 200;

void require_converged(const quad::Result& r, const char* what, double rel_tol) {
    if (!r.converged || !std::isfinite(r.value)) {
        std::ostringstream os;
        os << what << ": quadrature did not reach rel_tol " << rel_tol << " (error estimate "
           << r.abs_error << " on value " << r.value << ")";
        throw AccuracyError(os.str(), r.abs_error);
    }
}

// Sum of adaptive panels over [0, T] split geometrically around `scale`,
// the point where the integrand starts to decay.
double head_integral(const quad::Integrand& g, double scale, double T, double rel_tol, const char* what) {
    quad::Options opts;
    opts.rel_tol = rel_tol;
    double total = 0.0;
    double lo = 0.0;
    double hi = std::min(scale, T);
    while (lo < T) {
        auto r = quad::integrate(g, lo, hi, opts);
        require_converged(r, what, rel_tol);
        total += r.value;
        lo = hi;
        hi = std::min(hi * 4.0, T);
    }
    return total;
}

}  // namespace

double stable_nu(double alpha) {
    if (!(alpha > 1.0 && alpha <= 2.0)) throw DomainError("stable_nu: alpha must lie in (1, 2]");
    if (alpha == 2.0) return 0.5 / std::numbers::sqrt2;
    const double csc = 1.0 / std::sin(std::numbers::pi / alpha);
    return csc / (std::pow(2.0, 1.0 / alpha) * alpha);
}

double stable_upsilon(double kappa, double alpha, double beta) {
    if (!(beta > 0.0)) throw DomainError("Upsilon needs beta > 0");
    if (alpha <= 1.0) return kInfinity;
    if (alpha == 2.0) return stable_nu(2.0) / std::sqrt(kappa * beta);
    return stable_nu(alpha) * std::pow(kappa, -1.0 / alpha) * std::pow(beta, -1.0 + 1.0 / alpha);
}

UpsilonEvaluator::UpsilonEvaluator(LevySymbol sym, double quad_rel_tol, double tail_split, Method method)
    : sym_(std::move(sym)), rel_tol_(quad_rel_tol), tail_split_(tail_split), method_(method),
      finite_(has_local_times(sym_)) {
    if (!(quad_rel_tol > 0.0 && quad_rel_tol < 1e-2)) throw ConfigError("quad_rel_tol must lie in (0, 1e-2)");
    if (tail_split < 0.0) throw ConfigError("tail_split must be >= 0");
}

// Point where 2 Re Psi(xi) = beta.
double UpsilonEvaluator::crossover(double beta) const {
    if (auto p = sym_.as_single_power()) return std::pow(beta / (2.0 * p->kappa), 1.0 / p->alpha);
    double lo = 1.0, hi = 1.0;
    if (2.0 * sym_.re_psi(1.0) > beta) {
        while (2.0 * sym_.re_psi(lo) > beta && lo > 1e-300) lo *= 0.5;
        hi = lo * 2.0;
    } else {
        while (2.0 * sym_.re_psi(hi) <= beta && hi < 1e300) hi *= 2.0;
        lo = hi * 0.5;
    }
    for (int i = 0; i < 60; ++i) {
        const double mid = std::sqrt(lo * hi);
        (2.0 * sym_.re_psi(mid) > beta ? hi : lo) = mid;
    }
    return std::sqrt(lo * hi);
}

double UpsilonEvaluator::by_quadrature(double beta) const {
    if (!(beta > 0.0)) throw DomainError("Upsilon needs beta > 0");
    if (!finite_) return kInfinity;
    const double scale = crossover(beta);
    const double T = tail_split_ > 0.0 ? tail_split_ : std::max(64.0 * scale, 1.0);
    auto g = [&](double xi) { return 1.0 / (beta + 2.0 * sym_.re_psi(xi)); };
    const double head = head_integral(g, scale, T, rel_tol_, "Upsilon");
    return (head + tail_integral(beta, T)) / std::numbers::pi;
}

double UpsilonEvaluator::tail_integral(double beta, double T) const {
    if (!finite_) return kInfinity;
    if (!(T > 0.0)) throw DomainError("tail_integral needs T > 0");
    // Leading power tail exactly, the rest by quadrature.
    const StableTerm tail = sym_.tail_power(T);
    const double analytic = std::pow(T, 1.0 - tail.alpha) / (2.0 * tail.kappa * (tail.alpha - 1.0));
    auto remainder = [&](double xi) {
        return 1.0 / (beta + 2.0 * sym_.re_psi(xi)) - 1.0 / (2.0 * tail.kappa * std::pow(xi, tail.alpha));
    };
    quad::Options opts;
    opts.rel_tol = rel_tol_;
    opts.abs_tol = 1e-3 * rel_tol_ * analytic;
    auto rem = quad::integrate_power_tail(remainder, T, tail.alpha, opts);
    require_converged(rem, "Upsilon tail", rel_tol_);
    return analytic + rem.value;
}

double UpsilonEvaluator::operator()(double beta) const {
    if (!(beta > 0.0)) throw DomainError("Upsilon needs beta > 0");
    if (!finite_) return kInfinity;
    if (method_ == Method::Auto) {
        if (auto p = sym_.as_single_power()) return stable_upsilon(p->kappa, p->alpha, beta);
    }
    return by_quadrature(beta);
}

double UpsilonEvaluator::sup() const {
    if (!finite_) return kInfinity;
    if (classify_recurrence(sym_) == Recurrence::Recurrent) return kInfinity;
    // Transient: the limit is the convergent integral (1/pi) int_0^inf dxi / (2 Re Psi).
    const double a0 = *sym_.small_exponent();
    auto g = [&](double xi) { return 1.0 / (2.0 * sym_.re_psi(xi)); };
    quad::Options opts;
    opts.rel_tol = rel_tol_;
    const double split = std::max(crossover(1.0), 1e-12);
    auto head = quad::integrate_power_head(g, split, a0, opts);
    require_converged(head, "Upsilon sup (head)", rel_tol_);

    const double T = 64.0 * split;
    auto mid = quad::integrate(g, split, T, opts);
    require_converged(mid, "Upsilon sup (middle)", rel_tol_);

    return (head.value + mid.value + tail_integral(0.0, T)) / std::numbers::pi;
}

double UpsilonEvaluator::inverse(double t) const {
    if (!(t > 0.0)) throw DomainError("Upsilon inverse needs t > 0");
    if (!finite_) throw DomainError("Upsilon is identically infinite for " + sym_.describe());
    if (method_ == Method::Auto) {
        if (auto p = sym_.as_single_power()) {
            const double nu = stable_nu(p->alpha);
            return std::pow(nu / (std::pow(p->kappa, 1.0 / p->alpha) * t), p->alpha / (p->alpha - 1.0));
        }
    }
    if (sup() <= t) return 0.0;

    const auto& self = *this;
    double lo = 1.0, hi = 1.0;
    if (self(1.0) > t) {
        while (self(hi) > t) {
            lo = hi;
            hi *= 2.0;
        }
    } else {
        while (self(lo) <= t) {
            hi = lo;
            lo *= 0.5;
            if (lo < 1e-300) return 0.0;
        }
    }
    for (int i = 0; i < kMaxInverseIterations && hi / lo - 1.0 > 4e-16; ++i) {
        const double mid = std::sqrt(lo * hi);
        (self(mid) > t ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

double upsilon_of(const UpsilonEvaluator& ev, double beta) { return ev(beta); }

double upsilon_inverse(const UpsilonEvaluator& ev, double t) { return ev.inverse(t); }

double upsilon_sup(const UpsilonEvaluator& ev) { return ev.sup(); }

}  // namespace spdelab

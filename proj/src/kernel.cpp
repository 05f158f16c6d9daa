#include "spdelab/kernel.hpp"

#include "spdelab/errors.hpp"
#include "spdelab/quadrature.hpp"
#include "spdelab/spectral.hpp"
#include "spdelab/upsilon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace spdelab {

namespace {

constexpr double kResolvedDecay = 20.0;

void require_converged(const quad::Result& r, const char* what) {
    if (!r.converged || !std::isfinite(r.value)) {
        std::ostringstream os;
        os << what << ": quadrature did not converge (error estimate " << r.abs_error << ")";
        throw AccuracyError(os.str(), r.abs_error);
    }
}

// Adaptive panels over [0, cut], starting fine near 0 where Re Psi has its
// cusp. `magnitude` bounds |f| and sets the absolute tolerance per panel.
double integrate_to_cut(const quad::Integrand& f, double cut, double max_panel, double magnitude,
                        const char* what) {
    quad::Options opts;
    opts.rel_tol = 1e-12;
    double total = 0.0;
    double lo = 0.0;
    double hi = std::min(cut / 1024.0, max_panel);
    while (lo < cut) {
        opts.abs_tol = 1e-15 * magnitude * (hi - lo);
        auto r = quad::integrate(f, lo, hi, opts);
        require_converged(r, what);
        total += r.value;
        lo = hi;
        hi = std::min({hi * 4.0, lo + max_panel, cut});
    }
    return total;
}

}  // namespace

KernelEvaluator::KernelEvaluator(LevySymbol sym, std::optional<FrequencyGrid> grid)
    : sym_(std::move(sym)), grid_(grid) {
    if (grid_ && (!(grid_->xi_max > 0.0) || grid_->n_modes < 2))
        throw ConfigError("frequency grid needs xi_max > 0 and n_modes >= 2");
}

// Smallest xi (by doubling) with scale_t * Re Psi(xi) >= level.
double KernelEvaluator::cutoff(double scale_t, double level) const {
    double xi = 1.0;
    while (scale_t * sym_.re_psi(xi) >= level && xi > 1e-300) xi *= 0.5;
    while (scale_t * sym_.re_psi(xi) < level) {
        xi *= 2.0;
        if (xi > 1e300) throw ResolutionError("kernel: Re Psi does not grow enough to truncate the frequency integral");
    }
    return xi;
}

double KernelEvaluator::density(double t, double x) const {
    if (!(t > 0.0)) throw DomainError("density needs t > 0");
    if (const auto* b = std::get_if<BrownianScaled>(&sym_.variant()); b && !grid_) {
        const double var4 = 4.0 * b->kappa * t;
        return std::exp(-x * x / var4) / std::sqrt(std::numbers::pi * var4);
    }
    auto f = [&](double xi) { return std::cos(xi * x) * std::exp(-t * sym_.re_psi(xi)); };
    if (grid_) {
        const double xi_max = grid_->xi_max;
        if (t * sym_.re_psi(xi_max) < kResolvedDecay) {
            std::ostringstream os;
            os << "density: grid xi_max=" << xi_max << " does not resolve t=" << t << " (t Re Psi(xi_max) = "
               << t * sym_.re_psi(xi_max) << " < " << kResolvedDecay << ")";
            throw ResolutionError(os.str());
        }
        const int n = grid_->n_modes + (grid_->n_modes % 2);
        const double h = xi_max / n;
        double acc = f(0.0) + f(xi_max);
        for (int k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(k * h);
        return acc * h / 3.0 / std::numbers::pi;
    }
    const double cut = cutoff(t, 40.0);
    const double max_panel = x == 0.0 ? cut : std::numbers::pi / std::abs(x);
    return integrate_to_cut(f, cut, max_panel, 1.0, "density") / std::numbers::pi;
}

DensitySamples KernelEvaluator::density_grid(double t, double dxi, std::size_t n) const {
    if (!(t > 0.0) || !(dxi > 0.0)) throw DomainError("density_grid needs t > 0 and dxi > 0");
    PeriodicFft fft(n);
    std::vector<std::complex<double>> modes(fft.modes());
    const double xi_nyquist = dxi * static_cast<double>(n / 2);
    if (t * sym_.re_psi(xi_nyquist) < kResolvedDecay)
        throw ResolutionError("density_grid: frequency range too short for t");
    for (std::size_t k = 0; k < modes.size(); ++k) modes[k] = std::exp(-t * sym_.re_psi(dxi * k));
    auto values = fft.inverse(modes);  // includes 1/n
    DensitySamples out;
    out.dx = 2.0 * std::numbers::pi / (static_cast<double>(n) * dxi);
    out.x.resize(n);
    out.p.resize(n);
    const double scale = static_cast<double>(n) * dxi / (2.0 * std::numbers::pi);
    for (std::size_t j = 0; j < n; ++j) {
        // Periodic layout: second half holds negative x.
        const auto jj = static_cast<double>(j < n / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n));
        out.x[j] = jj * out.dx;
        out.p[j] = values[j] * scale;
    }
    return out;
}

double KernelEvaluator::l2_norm_sq(double s) const {
    if (!(s > 0.0)) throw DomainError("l2_norm_sq needs s > 0");
    if (auto p = sym_.as_single_power()) {
        return std::tgamma(1.0 + 1.0 / p->alpha) / (std::numbers::pi * std::pow(2.0 * p->kappa * s, 1.0 / p->alpha));
    }
    auto f = [&](double xi) { return std::exp(-2.0 * s * sym_.re_psi(xi)); };
    const double cut = cutoff(2.0 * s, 60.0);
    return integrate_to_cut(f, cut, cut, 1.0, "l2_norm_sq") / std::numbers::pi;
}

double KernelEvaluator::dissipation_integral(double t) const {
    if (!(t > 0.0)) throw DomainError("dissipation_integral needs t > 0");
    if (!has_local_times(sym_)) return kInfinity;
    if (auto p = sym_.as_single_power()) {
        const double a = p->alpha;
        const double c = std::tgamma(1.0 + 1.0 / a) / (std::numbers::pi * std::pow(2.0 * p->kappa, 1.0 / a));
        return c * std::pow(t, 1.0 - 1.0 / a) / (1.0 - 1.0 / a);
    }
    auto f = [&](double xi) {
        const double r = sym_.re_psi(xi);
        if (r == 0.0) return t;
        return -std::expm1(-2.0 * t * r) / (2.0 * r);
    };
    const double cut = cutoff(2.0 * t, 40.0);
    const double head = integrate_to_cut(f, cut, cut, t, "dissipation_integral");
    const UpsilonEvaluator ups(sym_, 1e-11);
    return (head + ups.tail_integral(0.0, cut)) / std::numbers::pi;
}

std::vector<double> KernelEvaluator::semigroup_apply(double t, std::span<const double> u0, double L) const {
    if (t < 0.0) throw DomainError("semigroup_apply needs t >= 0");
    std::vector<double> out(u0.begin(), u0.end());
    if (t == 0.0) return out;
    PeriodicFft fft(u0.size());
    const auto k = wave_numbers(u0.size(), L);
    std::vector<double> mult(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) mult[i] = std::exp(-t * sym_.re_psi(k[i]));
    fft.apply_multiplier(out, mult);
    return out;
}

double density(const KernelEvaluator& ev, double t, double x) { return ev.density(t, x); }
double l2_norm_sq(const KernelEvaluator& ev, double s) { return ev.l2_norm_sq(s); }
double dissipation_integral(const KernelEvaluator& ev, double t) { return ev.dissipation_integral(t); }
std::vector<double> semigroup_apply(const KernelEvaluator& ev, double t, std::span<const double> u0, double L) {
    return ev.semigroup_apply(t, u0, L);
}

}  // namespace spdelab

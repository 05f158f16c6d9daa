#include "spdelab/renewal.hpp"

#include "spdelab/errors.hpp"
#include "spdelab/kernel.hpp"
#include "spdelab/quadrature.hpp"
#include "spdelab/upsilon.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <sstream>

namespace spdelab {

namespace {

// Panel weights: for panel m = [m h, (m+1) h] in the lag variable r,
//   a[m] = (1/h) int (r - m h) k(r) dr,   b[m] = (1/h) int ((m+1) h - r) k(r) dr.
struct PanelWeights {
    std::vector<double> a;
    std::vector<double> b;
};

PanelWeights panel_weights(const LevySymbol& sym, double h, std::size_t n) {
    const KernelEvaluator kern(sym);
    PanelWeights w;
    w.a.resize(n);
    w.b.resize(n);

    // First panel: k ~ r^(-1/alpha). Exact moments from the dissipation
    // integral D(r) = int_0^r k: int_0^h k = D(h), int_0^h r k = h D(h) - int_0^h D.
    double i0 = 0.0;
    double i1 = 0.0;
    if (auto p = sym.as_single_power()) {
        const double a = 1.0 / p->alpha;
        const double c = kern.l2_norm_sq(1.0);  // k(r) = c r^(-a)
        i0 = c * std::pow(h, 1.0 - a) / (1.0 - a);
        i1 = c * std::pow(h, 2.0 - a) / (2.0 - a);
    } else {
        i0 = kern.dissipation_integral(h);
        quad::Options opts;
        opts.rel_tol = 1e-11;
        auto r = quad::integrate([&](double s) { return kern.dissipation_integral(s); }, 0.0, h, opts);
        if (!r.converged) throw AccuracyError("renewal: first-panel moment did not converge", r.abs_error);
        i1 = h * i0 - r.value;
    }
    w.a[0] = i1 / h;
    w.b[0] = (h * i0 - i1) / h;

    using GL = boost::math::quadrature::gauss<double, 10>;
    for (std::size_t m = 1; m < n; ++m) {
        const double lo = static_cast<double>(m) * h;
        const double hi = lo + h;
        w.a[m] = GL::integrate([&](double r) { return (r - lo) * kern.l2_norm_sq(r); }, lo, hi) / h;
        w.b[m] = GL::integrate([&](double r) { return (hi - r) * kern.l2_norm_sq(r); }, lo, hi) / h;
    }
    return w;
}

}  // namespace

MomentCurve solve_second_moment(const VolterraProblem& prob) {
    if (!(prob.step > 0.0) || !(prob.t_max > prob.step))
        throw ConfigError("renewal: need step > 0 and t_max > step");
    if (!(prob.eta > 0.0)) throw DomainError("renewal: eta must be > 0");
    if (!has_local_times(prob.sym))
        throw DomainError("renewal: kernel ||p_s||^2 is not integrable at 0 for " + prob.sym.describe());

    const double h = prob.step;
    const auto n = static_cast<std::size_t>(std::llround(prob.t_max / h));
    const double eta2 = prob.eta * prob.eta;
    const double l2 = prob.lambda * prob.lambda;

    MomentCurve out;
    out.p = 2;
    out.times.resize(n + 1);
    out.moments.assign(n + 1, eta2);
    out.std_error.assign(n + 1, 0.0);
    for (std::size_t i = 0; i <= n; ++i) out.times[i] = static_cast<double>(i) * h;
    std::ostringstream meta;
    meta << "renewal " << prob.sym.describe() << " lambda=" << prob.lambda << " eta=" << prob.eta
         << " step=" << h;
    out.meta = meta.str();
    if (l2 == 0.0) {
        out.fitted_gamma = fit_gamma(out, out.times[2 * n / 3], out.times[n]);
        return out;
    }

    const PanelWeights w = panel_weights(prob.sym, h, n);
    const double diag = 1.0 - l2 * w.b[0];
    if (!(diag > 0.0))
        throw DomainError("renewal: step too coarse, lambda^2 times the first-panel weight reaches 1");

    auto& f = out.moments;
    for (std::size_t k = 1; k <= n; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j) acc += w.a[k - 1 - j] * f[j];
        for (std::size_t i = 1; i < k; ++i) acc += w.b[k - i] * f[i];
        f[k] = (eta2 + l2 * acc) / diag;
        if (!(f[k] > 0.0) || !std::isfinite(f[k]))
            throw DomainError("renewal: non-positive or non-finite solution at step " + std::to_string(k) +
                              "; reduce the step");
        if (f[k] < f[k - 1] * (1.0 - 1e-12))
            throw AccuracyError("renewal: solution decreased at step " + std::to_string(k));
    }
    out.fitted_gamma = fit_gamma(out, out.times[2 * n / 3], out.times[n]);
    return out;
}

double laplace_fixed_point(const VolterraProblem& prob, double beta) {
    if (!(beta > 0.0)) throw DomainError("laplace_fixed_point needs beta > 0");
    const double eta2 = prob.eta * prob.eta;
    const double l2 = prob.lambda * prob.lambda;
    if (l2 == 0.0) return eta2 / beta;
    const UpsilonEvaluator ev(prob.sym);
    const double load = l2 * ev(beta);
    if (load >= 1.0) return kInfinity;
    return (eta2 / beta) / (1.0 - load);
}

double mesh_laplace_transform(const MomentCurve& curve, double beta) {
    const auto& t = curve.times;
    const auto& f = curve.moments;
    if (t.size() < 2) throw DomainError("mesh_laplace_transform: curve too short");
    double acc = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double h = t[i] - t[i - 1];
        acc += 0.5 * h * (std::exp(-beta * t[i - 1]) * f[i - 1] + std::exp(-beta * t[i]) * f[i]);
    }
    const double rate = curve.fitted_gamma ? curve.fitted_gamma->slope : 0.0;
    if (!(beta > rate)) throw DomainError("mesh_laplace_transform: beta must exceed the growth rate");
    acc += std::exp(-beta * t.back()) * f.back() / (beta - rate);
    return acc;
}

double locate_divergence_flip(const VolterraProblem& prob, double tol) {
    if (prob.lambda == 0.0) throw DomainError("locate_divergence_flip: lambda = 0 never diverges");
    auto diverges = [&](double beta) { return std::isinf(laplace_fixed_point(prob, beta)); };
    double lo = 1.0, hi = 1.0;
    while (!diverges(lo)) {
        lo *= 0.5;
        if (lo < 1e-300) return 0.0;  // finite for every beta: transient saturation
    }
    while (diverges(hi)) hi *= 2.0;
    // Divergence is monotone in beta: diverges(lo) and !diverges(hi).
    for (int i = 0; i < 400 && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        (diverges(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

const char* to_string(SeriesState s) noexcept { return s == SeriesState::Finite ? "finite" : "divergent"; }

std::vector<ScanEntry> divergence_scan(const LevySymbol& sym, double beta, double q0, double A,
                                       std::span<const double> eta_grid) {
    if (!(q0 > 0.0) || !(A >= 0.0)) throw DomainError("divergence_scan: need q0 > 0 and A >= 0");
    const UpsilonEvaluator ev(sym);
    const double ups = ev(beta);
    if (!(q0 * q0 * ups > 1.0)) throw DomainError("divergence_scan: need q0^2 Upsilon(beta) > 1");
    const double threshold = A * A * q0 * q0 * ups;
    std::vector<ScanEntry> out;
    out.reserve(eta_grid.size());
    for (double eta : eta_grid) {
        out.push_back({eta, eta * eta > threshold ? SeriesState::Divergent : SeriesState::Finite});
    }
    return out;
}

}  // namespace spdelab

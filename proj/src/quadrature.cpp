#include "spdelab/quadrature.hpp"

#include "spdelab/errors.hpp"

#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace spdelab::quad {

namespace {

// Kronrod abscissae on [-1, 1]; odd indices are the Gauss 7-point nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const Integrand& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double s = f(centre - dx) + f(centre + dx);
        resk += kWgk[j] * s;
        if (j % 2 == 1) resg += kWg[j / 2] * s;
    }
    resk *= half;
    resg *= half;
    // The Gauss/Kronrod difference bounds the 7-point error, so it is a
    // pessimistic estimate for the 15-point value.
    const double err = std::max(std::abs(resk - resg),
                                50.0 * std::numeric_limits<double>::epsilon() * std::abs(resk));
    return {a, b, resk, err};
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, const Options& opts) {
    Result r;
    if (a == b) {
        r.converged = true;
        return r;
    }
    if (!(std::isfinite(a) && std::isfinite(b))) throw DomainError("integrate: finite limits required");
    std::priority_queue<Panel> heap;
    Panel first = gk15(f, a, b);
    heap.push(first);
    double total = first.value;
    double err = first.error;
    int intervals = 1;
    r.evaluations = 15;
    while (true) {
        const double target = std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
        if (err <= target) {
            r.converged = true;
            break;
        }
        if (intervals >= opts.max_intervals) break;
        Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // panel at machine resolution
        heap.pop();
        Panel left = gk15(f, worst.a, mid);
        Panel right = gk15(f, mid, worst.b);
        r.evaluations += 30;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
    }
    // Re-sum to shed the drift of the running updates.
    total = 0.0;
    err = 0.0;
    std::vector<Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    for (const auto& p : panels) {
        total += p.value;
        err += p.error;
    }
    r.value = total;
    r.abs_error = err;
    if (!r.converged) r.converged = err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
    return r;
}

Result integrate_power_tail(const Integrand& f, double a, double decay, const Options& opts) {
    if (!(decay > 1.0)) throw DomainError("integrate_power_tail: decay exponent must exceed 1");
    if (!(a > 0.0)) throw DomainError("integrate_power_tail: lower limit must be > 0");
    const double k = 1.0 / (decay - 1.0);
    auto g = [&](double u) {
        const double x = a * std::pow(u, -k);
        if (!std::isfinite(x)) return 0.0;
        return f(x) * k * x / u;
    };
    return integrate(g, 0.0, 1.0, opts);
}

Result integrate_power_head(const Integrand& f, double b, double singularity, const Options& opts) {
    if (!(singularity < 1.0)) throw DomainError("integrate_power_head: singularity exponent must be < 1");
    if (singularity <= 0.0) return integrate(f, 0.0, b, opts);
    const double m = 1.0 / (1.0 - singularity);
    auto g = [&](double v) {
        const double x = b * std::pow(v, m);
        if (x == 0.0) return 0.0;
        return f(x) * m * x / v;
    };
    return integrate(g, 0.0, 1.0, opts);
}

Result integrate_fourier_cos(const Integrand& f, double omega, double rel_tol) {
    boost::math::quadrature::ooura_fourier_cos<double> integrator(rel_tol);
    auto [value, rel_err] = integrator.integrate(f, omega);
    Result r;
    r.value = value;
    r.abs_error = std::abs(rel_err * value);
    r.converged = std::isfinite(value) && rel_err <= std::max(rel_tol * 100.0, 1e-8);
    return r;
}

}  // namespace spdelab::quad

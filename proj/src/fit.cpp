#include "spdelab/fit.hpp"

#include "spdelab/errors.hpp"
#include "spdelab/moment_curve.hpp"

#include <cmath>
#include <vector>

namespace spdelab {

LinearFit ols(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DomainError("ols: x and y differ in length");
    const std::size_t n = x.size();
    if (n < 2) throw DomainError("ols: need at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw DomainError("ols: x values are all equal");
    LinearFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (n > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - fit.intercept - fit.slope * x[i];
            rss += r * r;
        }
        fit.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    }
    return fit;
}

GammaFit fit_gamma(const MomentCurve& curve, double t_from, double t_to) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < curve.times.size(); ++i) {
        const double t = curve.times[i];
        if (t >= t_from && t <= t_to && curve.moments[i] > 0.0) {
            x.push_back(t);
            y.push_back(std::log(curve.moments[i]));
        }
    }
    if (x.size() < 3) throw DomainError("fit_gamma: fewer than three positive samples in the fit window");
    const LinearFit f = ols(x, y);
    return {f.slope, f.slope_stderr, x.front(), x.back()};
}

}  // namespace spdelab

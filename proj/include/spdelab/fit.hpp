#pragma once

#include <cstddef>
#include <span>

namespace spdelab {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    std::size_t n = 0;
};

/// Ordinary least squares y = intercept + slope * x. Needs at least two
/// distinct x; the slope standard error is 0 for exactly two points.
LinearFit ols(std::span<const double> x, std::span<const double> y);

}  // namespace spdelab

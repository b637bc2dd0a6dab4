#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace blochsum {

// Least-squares line y = slope * x + intercept.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Fit log(y) = slope * log(x) + log(amplitude); points with y <= 0 are
// rejected (callers filter first when zeros are expected).
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

}  // namespace blochsum

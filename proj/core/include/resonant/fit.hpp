#pragma once

#include <vector>

namespace resonant {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
    std::vector<double> residuals;
};

// Ordinary least squares y = slope * x + intercept.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// y = c * x^p, fitted in log-log coordinates. slope is p.
LinearFit fit_power(const std::vector<double>& x, const std::vector<double>& y);

// y = a + b log x. slope is b.
LinearFit fit_log(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace resonant

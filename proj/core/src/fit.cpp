#include "resonant/fit.hpp"

#include <cmath>

#include "resonant/errors.hpp"

namespace resonant {

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw ConstraintError("fit needs at least two paired samples");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) throw ConstraintError("fit abscissae are all equal");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        f.residuals.push_back(r);
        ss += r * r;
    }
    f.rms_residual = std::sqrt(ss / n);
    return f;
}

LinearFit fit_power(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (!(x[i] > 0) || !(y[i] > 0)) throw ConstraintError("power fit needs positive samples");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    return fit_line(lx, ly);
}

LinearFit fit_log(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx;
    for (double v : x) {
        if (!(v > 0)) throw ConstraintError("log fit needs positive abscissae");
        lx.push_back(std::log(v));
    }
    return fit_line(lx, y);
}

}  // namespace resonant

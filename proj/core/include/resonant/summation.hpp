#pragma once

#include <complex>

namespace resonant {

// Neumaier's variant of Kahan summation. Order-dependent but reproducible.
struct CompensatedSum {
    double s = 0.0;
    double c = 0.0;

    void add(double x) noexcept {
        const double t = s + x;
        if ((s >= 0 ? s : -s) >= (x >= 0 ? x : -x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const noexcept { return s + c; }
};

struct CompensatedComplexSum {
    CompensatedSum re, im;

    void add(std::complex<double> z) noexcept {
        re.add(z.real());
        im.add(z.imag());
    }
    std::complex<double> value() const noexcept { return {re.value(), im.value()}; }
};

}  // namespace resonant

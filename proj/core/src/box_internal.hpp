#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "resonant/field.hpp"

namespace resonant::detail {

// |xi|^2 per FFT bin.
inline RVec xi_squared(const BoxGrid& g) {
    RVec out(g.cells());
    for (int ky = 0; ky < g.N; ++ky)
        for (int kx = 0; kx < g.N; ++kx) {
            const double a = g.freq(kx), b = g.freq(ky);
            out[static_cast<std::size_t>(ky) * g.N + kx] = a * a + b * b;
        }
    return out;
}

// e^{sign * i |xi|^2 tau} / N^2 per bin (normalization folded in).
inline CVec free_multiplier(const BoxGrid& g, double tau, double sign) {
    const RVec k2 = xi_squared(g);
    CVec m(g.cells());
    const double inv = 1.0 / static_cast<double>(g.cells());
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double th = sign * std::fmod(k2[i] * tau, 2.0 * std::numbers::pi);
        m[i] = cplx{std::cos(th), std::sin(th)} * inv;
    }
    return m;
}

inline bool field_is_zero(const cplx* f, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (f[i] != cplx{}) return false;
    return true;
}

// Forward transform, pointwise multiply, backward transform.
inline void apply_multiplier(const BoxGrid& g, cplx* f, const CVec& m) {
    fft2(f, g.N, g.N, 1, FftDir::forward);
    for (std::size_t i = 0; i < m.size(); ++i) f[i] *= m[i];
    fft2(f, g.N, g.N, 1, FftDir::backward);
}

// Lattice index of xi0; throws ConstraintError when off-lattice.
std::array<long, 2> lattice_bins(const BoxGrid& g, Vec2 xi0);
// Grid offset of x0; throws ConstraintError when off-grid.
std::array<long, 2> grid_offsets(const BoxGrid& g, Vec2 x0);

void require_window(const FrequencyWindow& a, const FrequencyWindow& b, const char* what);

}  // namespace resonant::detail

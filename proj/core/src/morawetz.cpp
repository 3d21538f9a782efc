#include <cmath>
#include <string>

#include "box_internal.hpp"
#include "resonant/errors.hpp"
#include "resonant/field.hpp"
#include "resonant/summation.hpp"

namespace resonant {

namespace {

double weight(const FrequencyWindow& w, std::size_t i, int a) {
    if (a == 0) return 1.0;
    return w.mode(i).bracket2();  // a == 2
}

void require_a(int a) {
    if (a != 0 && a != 2) throw ConstraintError("Morawetz weight exponent must be 0 or 2");
}

}  // namespace

double morawetz_functional(const FieldState& s, int a, int coarse) {
    require_a(a);
    const BoxGrid& g = s.grid();
    const int N = g.N;
    if (coarse < 2 || N % coarse != 0)
        throw ConstraintError("Morawetz grid " + std::to_string(coarse) + " must divide N=" + std::to_string(N));
    const int stride = N / coarse;
    const std::size_t cc = static_cast<std::size_t>(coarse) * coarse;
    std::vector<double> rho(cc, 0.0), jx(cc, 0.0), jy(cc, 0.0);

    CVec mx(g.cells()), my(g.cells());
    const double inv = 1.0 / static_cast<double>(g.cells());
    for (int ky = 0; ky < N; ++ky)
        for (int kx = 0; kx < N; ++kx) {
            const std::size_t p = static_cast<std::size_t>(ky) * N + kx;
            mx[p] = kx == N / 2 ? cplx{} : cplx{0.0, g.freq(kx) * inv};
            my[p] = ky == N / 2 ? cplx{} : cplx{0.0, g.freq(ky) * inv};
        }
    CVec dx(g.cells()), dy(g.cells());
    for (std::size_t i = 0; i < s.modes(); ++i) {
        const cplx* f = s.field(i);
        if (detail::field_is_zero(f, g.cells())) continue;
        const double w = weight(s.window(), i, a);
        std::copy(f, f + g.cells(), dx.begin());
        fft2(dx.data(), N, N, 1, FftDir::forward);
        for (std::size_t p = 0; p < g.cells(); ++p) {
            dy[p] = dx[p] * my[p];
            dx[p] *= mx[p];
        }
        fft2(dx.data(), N, N, 1, FftDir::backward);
        fft2(dy.data(), N, N, 1, FftDir::backward);
        for (int cy = 0; cy < coarse; ++cy)
            for (int cx = 0; cx < coarse; ++cx) {
                const std::size_t p = static_cast<std::size_t>(cy * stride) * N + static_cast<std::size_t>(cx * stride);
                const std::size_t q = static_cast<std::size_t>(cy) * coarse + cx;
                rho[q] += w * std::norm(f[p]);
                jx[q] += w * (std::conj(f[p]) * dx[p]).imag();
                jy[q] += w * (std::conj(f[p]) * dy[p]).imag();
            }
    }

    // Unit vectors z/|z| for every coarse offset, K(0) = 0.
    const int span = 2 * coarse - 1;
    std::vector<double> kx(static_cast<std::size_t>(span) * span), ky(kx.size());
    for (int oy = -(coarse - 1); oy < coarse; ++oy)
        for (int ox = -(coarse - 1); ox < coarse; ++ox) {
            const std::size_t k = static_cast<std::size_t>(oy + coarse - 1) * span + (ox + coarse - 1);
            const double r = std::hypot(static_cast<double>(ox), static_cast<double>(oy));
            kx[k] = r > 0 ? ox / r : 0.0;
            ky[k] = r > 0 ? oy / r : 0.0;
        }

    CompensatedSum total;
    for (int xy = 0; xy < coarse; ++xy)
        for (int xx = 0; xx < coarse; ++xx) {
            const std::size_t qx = static_cast<std::size_t>(xy) * coarse + xx;
            if (jx[qx] == 0.0 && jy[qx] == 0.0) continue;
            double cx = 0.0, cy = 0.0;
            for (int yy = 0; yy < coarse; ++yy) {
                const double* rrow = rho.data() + static_cast<std::size_t>(yy) * coarse;
                const std::size_t krow = static_cast<std::size_t>(xy - yy + coarse - 1) * span + (xx + coarse - 1);
                for (int yx = 0; yx < coarse; ++yx) {
                    cx += rrow[yx] * kx[krow - yx];
                    cy += rrow[yx] * ky[krow - yx];
                }
            }
            total.add(cx * jx[qx] + cy * jy[qx]);
        }
    const double hc = g.L / coarse;
    return total.value() * hc * hc * hc * hc;
}

double morawetz_lhs(const Trajectory& tr, int a) {
    require_a(a);
    if (tr.snapshots.size() < 2) throw ConstraintError("Morawetz time integral needs at least 2 snapshots");
    const BoxGrid& g = tr.grid;
    const int N = g.N;
    RVec absxi(g.cells());
    for (int ky = 0; ky < N; ++ky)
        for (int kx = 0; kx < N; ++kx) absxi[static_cast<std::size_t>(ky) * N + kx] = std::hypot(g.freq(kx), g.freq(ky));

    std::vector<double> vals, times;
    CVec rho(g.cells());
    for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
        const Snapshot& sn = tr.snapshots[k];
        std::fill(rho.begin(), rho.end(), cplx{});
        for (std::size_t m = 0; m < sn.modes.size(); ++m) {
            const double w = weight(tr.window, sn.modes[m], a);
            const cplx* f = sn.data.data() + m * g.cells();
            for (std::size_t p = 0; p < g.cells(); ++p) rho[p] += w * std::norm(f[p]);
        }
        fft2(rho.data(), N, N, 1, FftDir::forward);
        CompensatedSum acc;
        const double inv = 1.0 / static_cast<double>(g.cells());
        for (std::size_t p = 0; p < g.cells(); ++p) acc.add(absxi[p] * std::norm(rho[p] * inv));
        vals.push_back(acc.value() * g.area());
        times.push_back(sn.t);
    }
    CompensatedSum integral;
    for (std::size_t k = 1; k < vals.size(); ++k) integral.add(0.5 * (times[k] - times[k - 1]) * (vals[k] + vals[k - 1]));
    return integral.value();
}

}  // namespace resonant

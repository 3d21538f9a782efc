#include <cmath>
#include <numbers>
#include <string>

#include "box_internal.hpp"
#include "resonant/errors.hpp"
#include "resonant/field.hpp"
#include "resonant/summation.hpp"

namespace resonant {

double lp_cutoff(double r) {
    r = std::fabs(r);
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    const double a = std::exp(-1.0 / (2.0 - r));
    const double b = std::exp(-1.0 / (r - 1.0));
    return a / (a + b);
}

double lp_multiplier(double r, int l, LpMode mode) {
    auto below = [r](int k) { return k < 0 ? 0.0 : lp_cutoff(std::ldexp(r, -k)); };
    switch (mode) {
        case LpMode::below: return below(l);
        case LpMode::above: return 1.0 - below(l);
        case LpMode::at: return below(l) - below(l - 1);
    }
    return 0.0;
}

void lp_project_field(const BoxGrid& g, cplx* field, Vec2 xi0, int l, LpMode mode) {
    const auto n0 = detail::lattice_bins(g, xi0);
    const int N = g.N;
    CVec m(g.cells());
    const double inv = 1.0 / static_cast<double>(g.cells());
    auto wrap = [N](long k) { return static_cast<int>(((k % N) + N) % N); };
    for (int ky = 0; ky < N; ++ky)
        for (int kx = 0; kx < N; ++kx) {
            const double ax = g.freq(wrap(kx - n0[0])), ay = g.freq(wrap(ky - n0[1]));
            m[static_cast<std::size_t>(ky) * N + kx] = lp_multiplier(std::hypot(ax, ay), l, mode) * inv;
        }
    detail::apply_multiplier(g, field, m);
}

FieldState lp_project(const FieldState& s, Vec2 xi0, int l, LpMode mode) {
    detail::lattice_bins(s.grid(), xi0);
    FieldState out = s;
    for (std::size_t i = 0; i < out.modes(); ++i) {
        cplx* f = out.field(i);
        if (detail::field_is_zero(f, s.grid().cells())) continue;
        lp_project_field(s.grid(), f, xi0, l, mode);
    }
    return out;
}

ObservationResiduals observation_residuals(const FieldState& s, Vec2 xi0, int l2, const ResonantTable& table,
                                           double weight_power) {
    detail::require_window(s.window(), table.window(), "observation_residuals");
    ObservationResiduals res;
    const FieldState lo = lp_project(s, xi0, l2 - 5, LpMode::below);
    FieldState hi = s;
    for (std::size_t k = 0; k < hi.data().size(); ++k) hi.data()[k] -= lo.data()[k];
    const double nu = std::sqrt(mass0(s)), nl = std::sqrt(mass0(lo)), nh = std::sqrt(mass0(hi));
    if (nu == 0.0 || nh <= 1e-12 * nu) {
        res.reason = "high-frequency part vanishes";
        return res;
    }
    if (nl <= 1e-12 * nu) {
        res.reason = "low-frequency part vanishes";
        return res;
    }
    const FieldState H = lp_project(hi, xi0, l2, LpMode::below);
    const FieldState& Lf = lo;
    res.applicable = true;

    const FrequencyWindow& w = s.window();
    const std::size_t n = w.size(), cells = s.grid().cells();
    std::vector<double> wt(n);
    for (std::size_t i = 0; i < n; ++i) wt[i] = std::pow(w.mode(i).bracket2(), weight_power);

    std::vector<cplx> Lv(n), Hv(n);
    for (std::size_t p = 0; p < cells; ++p) {
        // Scale of the quartic sums at this point: (sum_j <j>^2 (|L_j|^2 + |H_j|^2))^2.
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            Lv[i] = Lf.field(i)[p];
            Hv[i] = H.field(i)[p];
            d += static_cast<double>(w.mode(i).bracket2()) * (std::norm(Lv[i]) + std::norm(Hv[i]));
        }
        if (d == 0.0) continue;
        CompensatedComplexSum s2, s3;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx cL = std::conj(Lv[i]), cH = std::conj(Hv[i]);
            cplx t2{}, t3{};
            for (PackedTriple q : table.packed(i)) {
                const std::size_t a = q.i1, b = q.i2, c = ResonantTable::i3(i, q);
                const cplx L1 = Lv[a], L2c = std::conj(Lv[b]), L3 = Lv[c];
                const cplx H1 = Hv[a], H2c = std::conj(Hv[b]), H3 = Hv[c];
                t2 += cH * L1 * L2c * L3 + cL * H1 * L2c * L3 + cL * L1 * H2c * L3 + cL * L1 * L2c * H3;
                t3 += cH * L1 * L2c * H3 + cL * H1 * H2c * L3;
            }
            s2.add(wt[i] * t2);
            s3.add(wt[i] * t3);
        }
        const double scale = d * d;
        res.obs2_max = std::max(res.obs2_max, std::fabs(s2.value().imag()) / scale);
        res.obs3_max = std::max(res.obs3_max, std::fabs(s3.value().imag()) / scale);
    }
    return res;
}

FieldState galilean_apply(const FieldState& s, double theta, Vec2 xi0, Vec2 x0) {
    const BoxGrid& g = s.grid();
    detail::lattice_bins(g, xi0);
    detail::grid_offsets(g, x0);
    const int N = g.N;
    const double dx = x0[0] + 2.0 * xi0[0] * s.t, dy = x0[1] + 2.0 * xi0[1] * s.t;

    CVec shift(g.cells());
    const double inv = 1.0 / static_cast<double>(g.cells());
    for (int ky = 0; ky < N; ++ky)
        for (int kx = 0; kx < N; ++kx) {
            const double th = -(g.freq(kx) * dx + g.freq(ky) * dy);
            shift[static_cast<std::size_t>(ky) * N + kx] = cplx{std::cos(th), std::sin(th)} * inv;
        }
    const double c0 = theta - s.t * (xi0[0] * xi0[0] + xi0[1] * xi0[1]);
    CVec mod(g.cells());
    for (int iy = 0; iy < N; ++iy)
        for (int ix = 0; ix < N; ++ix) {
            const double th = c0 + xi0[0] * g.x(ix) + xi0[1] * g.x(iy);
            mod[static_cast<std::size_t>(iy) * N + ix] = {std::cos(th), std::sin(th)};
        }

    FieldState out = s;
    for (std::size_t i = 0; i < out.modes(); ++i) {
        cplx* f = out.field(i);
        if (detail::field_is_zero(f, g.cells())) continue;
        if (dx != 0.0 || dy != 0.0) detail::apply_multiplier(g, f, shift);
        for (std::size_t p = 0; p < g.cells(); ++p) f[p] *= mod[p];
    }
    return out;
}

}  // namespace resonant

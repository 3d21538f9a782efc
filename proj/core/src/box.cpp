#include <cmath>
#include <numbers>
#include <string>

#include "box_internal.hpp"
#include "resonant/errors.hpp"
#include "resonant/field.hpp"
#include "resonant/summation.hpp"

namespace resonant {

namespace detail {

namespace {

long snap(double v, double unit, const char* what) {
    const double q = v / unit;
    const double r = std::nearbyint(q);
    if (std::fabs(q - r) > 1e-9 * std::max(1.0, std::fabs(q)))
        throw ConstraintError(std::string(what) + " component " + std::to_string(v) + " is not a multiple of " +
                              std::to_string(unit));
    return static_cast<long>(r);
}

}  // namespace

std::array<long, 2> lattice_bins(const BoxGrid& g, Vec2 xi0) {
    return {snap(xi0[0], g.dk(), "xi0"), snap(xi0[1], g.dk(), "xi0")};
}

std::array<long, 2> grid_offsets(const BoxGrid& g, Vec2 x0) {
    return {snap(x0[0], g.h(), "x0"), snap(x0[1], g.h(), "x0")};
}

void require_window(const FrequencyWindow& a, const FrequencyWindow& b, const char* what) {
    if (!(a == b))
        throw WindowError(std::string(what) + ": state window K=" + std::to_string(a.K()) +
                          " does not match table window K=" + std::to_string(b.K()));
}

}  // namespace detail

double BoxGrid::dk() const noexcept { return 2.0 * std::numbers::pi / L; }

FieldState::FieldState(const BoxGrid& g, const FrequencyWindow& w, double t0)
    : t(t0), grid_(g), window_(w), data_(g.cells() * w.size()) {
    if (!(g.L > 0) || g.N < 2 || g.N % 2 != 0) throw ConstraintError("box grid needs L > 0 and even N >= 2");
}

std::vector<bool> FieldState::support() const {
    std::vector<bool> s(modes());
    for (std::size_t i = 0; i < modes(); ++i) s[i] = !detail::field_is_zero(field(i), grid_.cells());
    return s;
}

bool FieldState::all_finite() const noexcept {
    for (const cplx& v : data_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

void linear_step(FieldState& s, double dt) {
    if (dt == 0.0) return;
    const BoxGrid& g = s.grid();
    const CVec m = detail::free_multiplier(g, dt, -1.0);
    for (std::size_t i = 0; i < s.modes(); ++i) {
        cplx* f = s.field(i);
        if (detail::field_is_zero(f, g.cells())) continue;
        detail::apply_multiplier(g, f, m);
    }
}

FieldState pull_back(const FieldState& s) {
    FieldState out = s;
    const BoxGrid& g = s.grid();
    if (s.t == 0.0) return out;
    const CVec m = detail::free_multiplier(g, s.t, +1.0);
    for (std::size_t i = 0; i < out.modes(); ++i) {
        cplx* f = out.field(i);
        if (detail::field_is_zero(f, g.cells())) continue;
        detail::apply_multiplier(g, f, m);
    }
    return out;
}

namespace {

double field_mass(const cplx* f, std::size_t n) {
    CompensatedSum s;
    for (std::size_t i = 0; i < n; ++i) s.add(std::norm(f[i]));
    return s.value();
}

}  // namespace

double mass0(const FieldState& s) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < s.modes(); ++i) acc.add(field_mass(s.field(i), s.grid().cells()));
    return acc.value() * s.grid().h() * s.grid().h();
}

double mass1(const FieldState& s) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < s.modes(); ++i)
        acc.add(s.window().mode(i).bracket2() * field_mass(s.field(i), s.grid().cells()));
    return acc.value() * s.grid().h() * s.grid().h();
}

double norm_l2h1(const FieldState& s) { return std::sqrt(mass1(s)); }

double distance_l2h1(const FieldState& a, const FieldState& b) {
    if (!(a.window() == b.window()) || !(a.grid() == b.grid())) throw WindowError("distance between mismatched states");
    CompensatedSum acc;
    const std::size_t n = a.grid().cells();
    for (std::size_t i = 0; i < a.modes(); ++i) {
        const cplx* x = a.field(i);
        const cplx* y = b.field(i);
        CompensatedSum m;
        for (std::size_t p = 0; p < n; ++p) m.add(std::norm(x[p] - y[p]));
        acc.add(a.window().mode(i).bracket2() * m.value());
    }
    return std::sqrt(acc.value()) * a.grid().h();
}

Vec2 momentum(const FieldState& s) {
    CompensatedSum px, py;
    for (std::size_t i = 0; i < s.modes(); ++i) {
        const ModeIndex j = s.window().mode(i);
        if (j.x == 0 && j.y == 0) continue;
        const double m = field_mass(s.field(i), s.grid().cells());
        px.add(static_cast<double>(j.x) * m);
        py.add(static_cast<double>(j.y) * m);
    }
    const double h2 = s.grid().h() * s.grid().h();
    return {px.value() * h2, py.value() * h2};
}

double boundary_mass_fraction(const FieldState& s) {
    const BoxGrid& g = s.grid();
    const int N = g.N;
    auto near_edge = [N](int k) { return k == 0 || k == 1 || k == N - 1; };
    CompensatedSum edge, total;
    for (std::size_t i = 0; i < s.modes(); ++i) {
        const cplx* f = s.field(i);
        for (int iy = 0; iy < N; ++iy)
            for (int ix = 0; ix < N; ++ix) {
                const double m = std::norm(f[static_cast<std::size_t>(iy) * N + ix]);
                if (m == 0.0) continue;
                total.add(m);
                if (near_edge(ix) || near_edge(iy)) edge.add(m);
            }
    }
    return total.value() > 0 ? edge.value() / total.value() : 0.0;
}

double l4_density_integral(const FieldState& s, int weight) {
    const std::size_t n = s.grid().cells();
    std::vector<double> rho(n, 0.0);
    for (std::size_t i = 0; i < s.modes(); ++i) {
        const cplx* f = s.field(i);
        if (detail::field_is_zero(f, n)) continue;
        const double w = weight == 0 ? 1.0 : s.window().mode(i).bracket2();
        for (std::size_t p = 0; p < n; ++p) rho[p] += w * std::norm(f[p]);
    }
    CompensatedSum acc;
    for (double r : rho) acc.add(r * r);
    return acc.value() * s.grid().h() * s.grid().h();
}

FieldState plane_wave(const BoxGrid& g, const FrequencyWindow& w, ModeIndex j0, std::array<int, 2> k, cplx A) {
    FieldState s(g, w);
    cplx* f = s.field(j0);
    const double kx = g.dk() * k[0], ky = g.dk() * k[1];
    for (int iy = 0; iy < g.N; ++iy)
        for (int ix = 0; ix < g.N; ++ix) {
            const double th = kx * g.x(ix) + ky * g.x(iy);
            f[static_cast<std::size_t>(iy) * g.N + ix] = A * cplx{std::cos(th), std::sin(th)};
        }
    return s;
}

void add_gaussian(FieldState& s, ModeIndex j0, cplx A, double width, Vec2 center, Vec2 v) {
    const BoxGrid& g = s.grid();
    cplx* f = s.field(j0);
    const double inv = 1.0 / (2.0 * width * width);
    for (int iy = 0; iy < g.N; ++iy)
        for (int ix = 0; ix < g.N; ++ix) {
            const double x = g.x(ix), y = g.x(iy);
            const double dx = x - center[0], dy = y - center[1];
            const double th = v[0] * x + v[1] * y;
            f[static_cast<std::size_t>(iy) * g.N + ix] +=
                A * std::exp(-(dx * dx + dy * dy) * inv) * cplx{std::cos(th), std::sin(th)};
        }
}

}  // namespace resonant

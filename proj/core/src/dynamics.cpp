#include <algorithm>
#include <cmath>
#include <string>

#include "box_internal.hpp"
#include "resonant/errors.hpp"
#include "resonant/field.hpp"
#include "resonant/summation.hpp"
#include "stepper.hpp"

namespace resonant {

void validate(const SimConfig& c) {
    if (!(c.dt > 0)) throw ConstraintError("dt must be positive");
    if (!(c.t_end >= 0)) throw ConstraintError("t_end must be non-negative");
    if (c.diagnostics_stride < 1) throw ConstraintError("diagnostics_stride must be at least 1");
    if (c.nonlinear_substeps < 1) throw ConstraintError("nonlinear_substeps must be at least 1");
    if (!c.table) throw ConstraintError("simulation needs a resonance table");
    if (c.snapshot_stride < 0) throw ConstraintError("snapshot_stride must be non-negative");
    if (c.morawetz_grid < 2) throw ConstraintError("morawetz_grid must be at least 2");
}

namespace detail {

Stepper::Stepper(const FieldState& proto, const SimConfig& c)
    : grid_(proto.grid()), window_(proto.window()), substeps_(c.nonlinear_substeps) {
    require_window(window_, c.table->window(), "simulation");
    const std::vector<bool> act = resonant_closure(*c.table, proto.support());
    for (std::size_t i = 0; i < act.size(); ++i)
        if (act[i]) active_.push_back(static_cast<std::uint32_t>(i));
    kernel_ = ResonanceKernel(*c.table, act);
}

void Stepper::linear(FieldState& s, double dt) {
    if (dt == 0.0) return;
    auto it = multipliers_.find(dt);
    if (it == multipliers_.end()) it = multipliers_.emplace(dt, free_multiplier(grid_, dt, -1.0)).first;
    for (std::uint32_t i : active_) apply_multiplier(grid_, s.field(i), it->second);
}

double Stepper::nonlinear(FieldState& s, double dt) {
    const std::size_t n = window_.size();
    const std::size_t cells = grid_.cells();
    const std::size_t L = kLanes;
    std::vector<double> ur(n * L, 0.0), ui(n * L, 0.0), tr(n * L, 0.0), ti(n * L, 0.0);
    std::vector<double> fr(n * L), fi(n * L), ar(n * L, 0.0), ai(n * L, 0.0);
    const double h = dt / substeps_;
    CompensatedSum before, after;

    for (std::size_t p0 = 0; p0 < cells; p0 += L) {
        const std::size_t nb = std::min(L, cells - p0);
        for (std::uint32_t i : active_) {
            const cplx* f = s.field(i) + p0;
            for (std::size_t l = 0; l < nb; ++l) {
                ur[i * L + l] = f[l].real();
                ui[i * L + l] = f[l].imag();
                before.add(std::norm(f[l]));
            }
            for (std::size_t l = nb; l < L; ++l) ur[i * L + l] = ui[i * L + l] = 0.0;
        }
        for (int sub = 0; sub < substeps_; ++sub) {
            // stage c: tmp = u + c * k, where k = -i F(arg)
            auto stage = [&](const std::vector<double>& xr, const std::vector<double>& xi, double wacc, double c,
                             bool first) {
                kernel_.apply(xr.data(), xi.data(), L, fr.data(), fi.data());
                for (std::uint32_t i : active_) {
                    double* Ar = ar.data() + i * L;
                    double* Ai = ai.data() + i * L;
                    double* Tr = tr.data() + i * L;
                    double* Ti = ti.data() + i * L;
                    const double* Ur = ur.data() + i * L;
                    const double* Ui = ui.data() + i * L;
                    const double* Fr = fr.data() + i * L;
                    const double* Fi = fi.data() + i * L;
                    for (std::size_t l = 0; l < L; ++l) {
                        const double kr = Fi[l], ki = -Fr[l];
                        Ar[l] = first ? wacc * kr : Ar[l] + wacc * kr;
                        Ai[l] = first ? wacc * ki : Ai[l] + wacc * ki;
                        Tr[l] = Ur[l] + c * kr;
                        Ti[l] = Ui[l] + c * ki;
                    }
                }
            };
            stage(ur, ui, 1.0, 0.5 * h, true);
            stage(tr, ti, 2.0, 0.5 * h, false);
            stage(tr, ti, 2.0, h, false);
            stage(tr, ti, 1.0, 0.0, false);
            const double w = h / 6.0;
            for (std::uint32_t i : active_)
                for (std::size_t l = 0; l < L; ++l) {
                    ur[i * L + l] += w * ar[i * L + l];
                    ui[i * L + l] += w * ai[i * L + l];
                }
        }
        for (std::uint32_t i : active_) {
            cplx* f = s.field(i) + p0;
            for (std::size_t l = 0; l < nb; ++l) {
                f[l] = {ur[i * L + l], ui[i * L + l]};
                after.add(std::norm(f[l]));
            }
        }
    }
    const double b = before.value();
    return b > 0 ? std::fabs(after.value() - b) / b : 0.0;
}

cplx Stepper::quartic(const FieldState& s) const {
    const std::size_t n = window_.size();
    const std::size_t cells = grid_.cells();
    const std::size_t L = kLanes;
    std::vector<double> ur(n * L, 0.0), ui(n * L, 0.0), fr(n * L), fi(n * L);
    CompensatedComplexSum acc;
    for (std::size_t p0 = 0; p0 < cells; p0 += L) {
        const std::size_t nb = std::min(L, cells - p0);
        for (std::uint32_t i : active_) {
            const cplx* f = s.field(i) + p0;
            for (std::size_t l = 0; l < nb; ++l) {
                ur[i * L + l] = f[l].real();
                ui[i * L + l] = f[l].imag();
            }
            for (std::size_t l = nb; l < L; ++l) ur[i * L + l] = ui[i * L + l] = 0.0;
        }
        kernel_.apply(ur.data(), ui.data(), L, fr.data(), fi.data());
        for (std::uint32_t i : active_)
            for (std::size_t l = 0; l < nb; ++l) {
                // conj(u) * F
                const double a = ur[i * L + l], b = ui[i * L + l];
                const double c = fr[i * L + l], d = fi[i * L + l];
                acc.add(cplx{a * c + b * d, a * d - b * c});
            }
    }
    const double h = grid_.h();
    return 0.25 * h * h * acc.value();
}

}  // namespace detail

CVec nonlinear_rhs(const FieldState& s, const ResonantTable& table) {
    detail::require_window(s.window(), table.window(), "nonlinear_rhs");
    const std::size_t n = s.modes(), cells = s.grid().cells();
    const ResonanceKernel kernel(table, resonant_closure(table, s.support()));
    constexpr std::size_t L = 64;
    std::vector<double> ur(n * L, 0.0), ui(n * L, 0.0), fr(n * L), fi(n * L);
    CVec out(n * cells);
    for (std::size_t p0 = 0; p0 < cells; p0 += L) {
        const std::size_t nb = std::min(L, cells - p0);
        for (std::uint32_t i : kernel.active()) {
            const cplx* f = s.field(i) + p0;
            for (std::size_t l = 0; l < L; ++l) {
                ur[i * L + l] = l < nb ? f[l].real() : 0.0;
                ui[i * L + l] = l < nb ? f[l].imag() : 0.0;
            }
        }
        kernel.apply(ur.data(), ui.data(), L, fr.data(), fi.data());
        for (std::uint32_t i : kernel.active())
            for (std::size_t l = 0; l < nb; ++l) out[i * cells + p0 + l] = {fr[i * L + l], fi[i * L + l]};
    }
    return out;
}

void strang_step(FieldState& s, double dt, const SimConfig& c) {
    validate(c);
    detail::Stepper st(s, c);
    const FieldState backup = s;
    st.linear(s, 0.5 * dt);
    if (c.nonlinear) {
        const double drift = st.nonlinear(s, dt);
        if (drift > c.mass_tolerance) {
            const double t = s.t;
            s = backup;
            throw InstabilityError(t, drift,
                                   "step at t=" + std::to_string(t) + " changed mass0 by relative " +
                                       std::to_string(drift) + "; reduce dt");
        }
    }
    st.linear(s, 0.5 * dt);
    s.t += dt;
}

EnergyParts energy_parts(const FieldState& s, const ResonantTable& table) {
    detail::require_window(s.window(), table.window(), "energy");
    const BoxGrid& g = s.grid();
    const RVec k2 = detail::xi_squared(g);
    CVec buf(g.cells());
    CompensatedSum kin;
    for (std::size_t i = 0; i < s.modes(); ++i) {
        const cplx* f = s.field(i);
        if (detail::field_is_zero(f, g.cells())) continue;
        std::copy(f, f + g.cells(), buf.begin());
        fft2(buf.data(), g.N, g.N, 1, FftDir::forward);
        CompensatedSum m;
        for (std::size_t p = 0; p < buf.size(); ++p) m.add(k2[p] * std::norm(buf[p]));
        kin.add(m.value());
    }
    EnergyParts e;
    e.kinetic = 0.5 * kin.value() * g.h() * g.h() / static_cast<double>(g.cells());
    SimConfig c;
    c.table = std::shared_ptr<const ResonantTable>(&table, [](const ResonantTable*) {});
    e.quartic = detail::Stepper(s, c).quartic(s);
    return e;
}

double energy(const FieldState& s, const ResonantTable& table) { return energy_parts(s, table).value(); }

}  // namespace resonant

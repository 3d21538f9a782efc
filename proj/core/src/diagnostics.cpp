#include <algorithm>
#include <cmath>
#include <string>

#include "box_internal.hpp"
#include "resonant/errors.hpp"
#include "resonant/field.hpp"
#include "resonant/summation.hpp"
#include "stepper.hpp"

namespace resonant {

std::optional<double> Trajectory::first_warning_time() const {
    if (warnings.empty()) return std::nullopt;
    return warnings.front().t;
}

FieldState Trajectory::state(std::size_t k) const {
    const Snapshot& sn = snapshots.at(k);
    FieldState s(grid, window, sn.t);
    for (std::size_t m = 0; m < sn.modes.size(); ++m)
        std::copy(sn.data.begin() + m * grid.cells(), sn.data.begin() + (m + 1) * grid.cells(),
                  s.field(sn.modes[m]));
    return s;
}

namespace {

double kinetic_energy(const FieldState& s, const std::vector<std::uint32_t>& active) {
    const BoxGrid& g = s.grid();
    const RVec k2 = detail::xi_squared(g);
    CVec buf(g.cells());
    CompensatedSum kin;
    for (std::uint32_t i : active) {
        const cplx* f = s.field(i);
        std::copy(f, f + g.cells(), buf.begin());
        fft2(buf.data(), g.N, g.N, 1, FftDir::forward);
        CompensatedSum m;
        for (std::size_t p = 0; p < buf.size(); ++p) m.add(k2[p] * std::norm(buf[p]));
        kin.add(m.value());
    }
    return 0.5 * kin.value() * g.h() * g.h() / static_cast<double>(g.cells());
}

Snapshot take_snapshot(const FieldState& s, const std::vector<std::uint32_t>& active) {
    Snapshot sn;
    sn.t = s.t;
    sn.modes = active;
    sn.data.resize(active.size() * s.grid().cells());
    for (std::size_t m = 0; m < active.size(); ++m)
        std::copy(s.field(active[m]), s.field(active[m]) + s.grid().cells(), sn.data.begin() + m * s.grid().cells());
    return sn;
}

}  // namespace

Trajectory evolve(const FieldState& initial, const SimConfig& c) {
    validate(c);
    detail::require_window(initial.window(), c.table->window(), "evolve");
    if (c.t_end < initial.t) throw ConstraintError("t_end precedes the state's time");

    detail::Stepper st(initial, c);
    Trajectory tr;
    tr.grid = initial.grid();
    tr.window = initial.window();
    tr.nonlinear = c.nonlinear;

    const double t0 = initial.t;
    const auto steps = static_cast<long>(std::ceil((c.t_end - t0) / c.dt - 1e-9));
    FieldState u = initial;
    FieldState prev_pull;
    double l4a = 0, l4b = 0, prev_t = t0, prev_l4 = 0, prev_l4h = 0;

    auto record = [&](long n) {
        DiagnosticsRecord r;
        r.t = u.t;
        r.mass0 = mass0(u);
        r.mass1 = mass1(u);
        r.momentum = momentum(u);
        r.energy = kinetic_energy(u, st.active()) + (c.nonlinear ? st.quartic(u).real() : 0.0);
        const double d0 = l4_density_integral(u, 0), d1 = l4_density_integral(u, 1);
        if (n > 0) {
            l4a += 0.5 * (u.t - prev_t) * (d0 + prev_l4);
            l4b += 0.5 * (u.t - prev_t) * (d1 + prev_l4h);
        }
        prev_t = u.t;
        prev_l4 = d0;
        prev_l4h = d1;
        r.l4_l2_accum = l4a;
        r.l4_h1_accum = l4b;
        r.boundary_frac = boundary_mass_fraction(u);
        if (c.morawetz_in_records) {
            r.morawetz_M0 = morawetz_functional(u, 0, c.morawetz_grid);
            r.morawetz_M2 = morawetz_functional(u, 2, c.morawetz_grid);
        }
        FieldState pull = pull_back(u);
        r.cauchy = n > 0 ? distance_l2h1(pull, prev_pull) : 0.0;
        prev_pull = std::move(pull);
        if (r.boundary_frac > c.boundary_mass_threshold && tr.warnings.empty()) {
            tr.warnings.push_back({u.t, r.boundary_frac,
                                   "boundary mass fraction " + std::to_string(r.boundary_frac) + " exceeds " +
                                       std::to_string(c.boundary_mass_threshold) +
                                       "; later diagnostics are not representative of the whole plane"});
        }
        const std::size_t k = tr.records.size();
        if (c.snapshot_stride > 0 && (k % static_cast<std::size_t>(c.snapshot_stride) == 0 || n == steps))
            tr.snapshots.push_back(take_snapshot(u, st.active()));
        tr.records.push_back(r);
    };

    record(0);
    bool synced = true;
    for (long n = 0; n < steps; ++n) {
        const bool sync_after = ((n + 1) % c.diagnostics_stride == 0) || (n + 1 == steps) || !c.fuse_linear_halves;
        if (synced) st.linear(u, 0.5 * c.dt);
        if (c.nonlinear) {
            const double drift = st.nonlinear(u, c.dt);
            if (drift > c.mass_tolerance) {
                const double t = t0 + n * c.dt;
                throw InstabilityError(t, drift,
                                       "step at t=" + std::to_string(t) + " changed mass0 by relative " +
                                           std::to_string(drift) + "; reduce dt");
            }
        }
        st.linear(u, sync_after ? 0.5 * c.dt : c.dt);
        synced = sync_after;
        u.t = t0 + static_cast<double>(n + 1) * c.dt;
        if ((n + 1) % c.diagnostics_stride == 0 || n + 1 == steps) record(n + 1);
    }
    tr.final_state = std::move(u);
    return tr;
}

ScatteringReport scattering_diagnostic(const Trajectory& tr) {
    if (tr.snapshots.size() < 3) throw ConstraintError("scattering diagnostic needs at least 3 snapshots");
    ScatteringReport rep;
    FieldState prev = pull_back(tr.state(0));
    for (std::size_t k = 1; k < tr.snapshots.size(); ++k) {
        FieldState cur = pull_back(tr.state(k));
        rep.times.push_back(cur.t);
        rep.cauchy.push_back(distance_l2h1(cur, prev));
        prev = std::move(cur);
    }

    // Accumulated integral at time t by linear interpolation between records.
    auto accum_at = [&](double t) {
        const auto& r = tr.records;
        if (t <= r.front().t) return r.front().l4_l2_accum;
        for (std::size_t k = 1; k < r.size(); ++k)
            if (r[k].t >= t) {
                const double w = (t - r[k - 1].t) / (r[k].t - r[k - 1].t);
                return (1 - w) * r[k - 1].l4_l2_accum + w * r[k].l4_l2_accum;
            }
        return r.back().l4_l2_accum;
    };
    auto tail = [&](double t_stop) {
        const double t0 = tr.records.front().t;
        const double total = accum_at(t_stop);
        if (total <= 0) return 0.0;
        return (total - accum_at(0.5 * (t0 + t_stop))) / total;
    };
    const double t_last = tr.records.back().t;
    rep.l4_tail_fraction = tail(t_last);
    rep.valid_until = tr.first_warning_time().value_or(t_last);
    rep.l4_tail_fraction_valid = tail(rep.valid_until);
    return rep;
}

}  // namespace resonant

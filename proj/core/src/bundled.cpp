#include <cmath>
#include <numbers>

#include "resonant/errors.hpp"
#include "resonant/field.hpp"
#include "resonant/rng.hpp"

namespace resonant {

std::vector<std::string> bundled_names() {
    return {"single-gaussian", "square", "full-window", "small-data", "small-data-single"};
}

BundledConfig bundled_config(const std::string& name, const BoxGrid& g, int K) {
    const FrequencyWindow w(K);
    if (name != "single-gaussian" && name != "small-data-single" && K < 1)
        throw ConstraintError("bundled configuration '" + name + "' needs a window with K >= 1");
    BundledConfig b;
    b.name = name;
    b.initial = FieldState(g, w);
    b.sim.table = std::make_shared<const ResonantTable>(build_table(w));
    b.sim.dt = 1e-3;
    b.sim.t_end = 1.0;
    b.sim.diagnostics_stride = 100;

    const ModeIndex square[4] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    if (name == "single-gaussian") {
        add_gaussian(b.initial, {0, 0}, 1.0, 1.0);
    } else if (name == "square") {
        for (int k = 0; k < 4; ++k)
            add_gaussian(b.initial, square[k], 0.5 * std::polar(1.0, 0.5 * std::numbers::pi * k), 1.0);
    } else if (name == "full-window") {
        CounterRng rng(2024, "bundled/full-window", 0);
        std::vector<cplx> c(w.size());
        double s = 0.0;
        for (auto& v : c) {
            v = rng.complex_normal();
            s += std::norm(v);
        }
        for (std::size_t i = 0; i < w.size(); ++i) add_gaussian(b.initial, w.mode(i), c[i] / std::sqrt(s), 1.0);
    } else if (name == "small-data") {
        // mass1 = 8 pi A^2 = 1e-2 for the four unit-square modes
        const double A = std::sqrt(1e-2 / (8.0 * std::numbers::pi));
        for (const ModeIndex& j : square) add_gaussian(b.initial, j, A, 1.0);
        b.sim.dt = 1e-2;
        b.sim.t_end = 3.0;
        b.sim.diagnostics_stride = 10;
        b.sim.snapshot_stride = 1;
        b.sim.morawetz_grid = 64;
    } else if (name == "small-data-single") {
        // mass1 = pi A^2 = 1e-2, moving slowly off center
        add_gaussian(b.initial, {0, 0}, std::sqrt(1e-2 / std::numbers::pi), 1.0, {0, 0}, {0.5, 0.25});
        b.sim.dt = 1e-2;
        b.sim.t_end = 3.0;
        b.sim.diagnostics_stride = 10;
        b.sim.snapshot_stride = 1;
        b.sim.morawetz_grid = 64;
    } else {
        throw ConstraintError("unknown bundled configuration '" + name + "'");
    }
    return b;
}

}  // namespace resonant

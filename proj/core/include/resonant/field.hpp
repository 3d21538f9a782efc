#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "resonant/fft.hpp"
#include "resonant/kernel.hpp"
#include "resonant/lattice.hpp"

namespace resonant {

using Vec2 = std::array<double, 2>;

// Periodic box [-L/2, L/2)^2 with N points per side.
struct BoxGrid {
    double L = 32.0;
    int N = 128;

    double h() const noexcept { return L / N; }
    std::size_t cells() const noexcept { return static_cast<std::size_t>(N) * N; }
    double x(int k) const noexcept { return -0.5 * L + k * h(); }
    double dk() const noexcept;  // 2 pi / L
    // Signed wavenumber index of FFT bin k, in [-N/2, N/2).
    int signed_bin(int k) const noexcept { return k < N / 2 ? k : k - N; }
    double freq(int k) const noexcept { return dk() * signed_bin(k); }
    double area() const noexcept { return L * L; }

    friend bool operator==(const BoxGrid&, const BoxGrid&) = default;
};

// One N x N field per window mode, stored mode-major in window order with
// grid index iy * N + ix.
class FieldState {
public:
    FieldState() = default;
    FieldState(const BoxGrid& g, const FrequencyWindow& w, double t = 0.0);

    const BoxGrid& grid() const noexcept { return grid_; }
    const FrequencyWindow& window() const noexcept { return window_; }
    double t = 0.0;

    std::size_t modes() const noexcept { return window_.size(); }
    cplx* field(std::size_t i) noexcept { return data_.data() + i * grid_.cells(); }
    const cplx* field(std::size_t i) const noexcept { return data_.data() + i * grid_.cells(); }
    cplx* field(ModeIndex j) { return field(window_.checked_index(j)); }
    const cplx* field(ModeIndex j) const { return field(window_.checked_index(j)); }

    CVec& data() noexcept { return data_; }
    const CVec& data() const noexcept { return data_; }

    std::vector<bool> support() const;  // modes with any nonzero sample
    bool all_finite() const noexcept;

private:
    BoxGrid grid_;
    FrequencyWindow window_;
    CVec data_;
};

enum class Integrator { strang };

struct SimConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    std::shared_ptr<const ResonantTable> table;
    int diagnostics_stride = 1;
    double boundary_mass_threshold = 1e-4;
    Integrator integrator = Integrator::strang;
    int nonlinear_substeps = 1;

    // Extensions beyond the core parameter set.
    bool nonlinear = true;             // false: free linear flow only
    double mass_tolerance = 1e-6;      // per-step relative mass0 change before rejection
    bool fuse_linear_halves = true;    // merge adjacent half steps between records
    int snapshot_stride = 0;           // in records; 0 stores none
    bool morawetz_in_records = true;
    int morawetz_grid = 32;
};

void validate(const SimConfig& c);

struct DiagnosticsRecord {
    double t = 0.0;
    double mass0 = 0.0;
    double mass1 = 0.0;
    Vec2 momentum{0.0, 0.0};
    double energy = 0.0;
    double l4_l2_accum = 0.0;
    double l4_h1_accum = 0.0;
    double boundary_frac = 0.0;
    double morawetz_M0 = 0.0;
    double morawetz_M2 = 0.0;
    double cauchy = 0.0;  // against the previous record; 0 for the first
};

struct Snapshot {
    double t = 0.0;
    std::vector<std::uint32_t> modes;  // window indices stored
    CVec data;                         // modes.size() fields
};

struct WarningEvent {
    double t = 0.0;
    double boundary_frac = 0.0;
    std::string message;
};

struct Trajectory {
    BoxGrid grid;
    FrequencyWindow window;
    std::vector<DiagnosticsRecord> records;
    std::vector<Snapshot> snapshots;
    std::vector<WarningEvent> warnings;
    FieldState final_state;
    bool nonlinear = true;

    std::optional<double> first_warning_time() const;
    FieldState state(std::size_t snapshot) const;
};

// Multiplies each mode in Fourier space by e^{-i |xi|^2 dt}.
void linear_step(FieldState& s, double dt);

// Pointwise F(u(x))_j for every mode. Result has the state's layout.
CVec nonlinear_rhs(const FieldState& s, const ResonantTable& table);

// Half linear, RK4 nonlinear over dt, half linear. Throws InstabilityError.
void strang_step(FieldState& s, double dt, const SimConfig& c);

Trajectory evolve(const FieldState& initial, const SimConfig& c);

struct EnergyParts {
    double kinetic = 0.0;
    cplx quartic{};  // (1/4) integral of sum_j conj(u_j) F_j; imaginary part is roundoff
    double value() const noexcept { return kinetic + quartic.real(); }
};

EnergyParts energy_parts(const FieldState& s, const ResonantTable& table);
double energy(const FieldState& s, const ResonantTable& table);

double mass0(const FieldState& s);
double mass1(const FieldState& s);
Vec2 momentum(const FieldState& s);  // sum_j j ||u_j||^2
double boundary_mass_fraction(const FieldState& s);
// ||u||_{L^2 h^1} = (sum_j <j>^2 ||u_j||^2)^{1/2}
double norm_l2h1(const FieldState& s);
double distance_l2h1(const FieldState& a, const FieldState& b);
// Integral of (sum_j <j>^{2w} |u_j|^2)^2, w in {0, 1}.
double l4_density_integral(const FieldState& s, int weight);

// ---- projections and group actions ---------------------------------------

enum class LpMode { at, below, above };

double lp_cutoff(double r);  // smooth, 1 on [0,1], 0 on [2, inf)
// Multiplier value at |xi - xi0| = r. below uses phi(2^-l r) for l >= 0 and
// 0 for l < 0, so below(l) - below(l-1) = at(l).
double lp_multiplier(double r, int l, LpMode mode);

// Throws ConstraintError if xi0 is off the box lattice.
void lp_project_field(const BoxGrid& g, cplx* field, Vec2 xi0, int l, LpMode mode);
FieldState lp_project(const FieldState& s, Vec2 xi0, int l, LpMode mode);

struct ObservationResiduals {
    bool applicable = false;
    std::string reason;
    double obs2_max = 0.0;
    double obs3_max = 0.0;
};

// Maxima over the grid of |Im| of the one-high and two-high weighted sums,
// each divided by (sum_j <j>^2 (|u^l_j|^2 + |u^h_j|^2))^2 at that point.
// weight_power 1 gives the <j>^2 weight; 0.5 gives <j> (symmetry broken).
ObservationResiduals observation_residuals(const FieldState& s, Vec2 xi0, int l2, const ResonantTable& table,
                                           double weight_power = 1.0);

// T_g with lambda = 1 at the state's time. xi0 must be on the box lattice and
// x0 on the grid.
FieldState galilean_apply(const FieldState& s, double theta, Vec2 xi0, Vec2 x0);

// ---- scattering and Morawetz ---------------------------------------------

// e^{-i t Delta} applied at the state's time.
FieldState pull_back(const FieldState& s);

struct ScatteringReport {
    std::vector<double> times;   // right endpoint of each pair
    std::vector<double> cauchy;  // ||pullback(t_b) - pullback(t_a)||_{L2h1}
    double l4_tail_fraction = 0.0;
    // Restricted to records before the first boundary warning.
    double l4_tail_fraction_valid = 0.0;
    double valid_until = 0.0;
};

ScatteringReport scattering_diagnostic(const Trajectory& tr);

// coarse: points per side of the convolution grid; must divide N.
double morawetz_functional(const FieldState& s, int a, int coarse = 32);
double morawetz_lhs(const Trajectory& tr, int a);

// ---- bundled initial data ------------------------------------------------

struct BundledConfig {
    std::string name;
    FieldState initial;
    SimConfig sim;
};

std::vector<std::string> bundled_names();
// Defaults are K=3, N=128, L=32. The small-data configurations need K >= 1.
BundledConfig bundled_config(const std::string& name, const BoxGrid& g = {}, int K = 3);

// A e^{i k.x} in mode j0, k on the box lattice as integer bin indices.
FieldState plane_wave(const BoxGrid& g, const FrequencyWindow& w, ModeIndex j0, std::array<int, 2> k, cplx A);
// A e^{-|x - c|^2 / (2 width^2)} e^{i v.x} in mode j0.
void add_gaussian(FieldState& s, ModeIndex j0, cplx A, double width, Vec2 center = {0, 0}, Vec2 v = {0, 0});

}  // namespace resonant

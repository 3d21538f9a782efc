#pragma once

#include <map>

#include "resonant/field.hpp"
#include "resonant/kernel.hpp"

namespace resonant::detail {

// Reusable integrator state for one closed set of active modes.
class Stepper {
public:
    Stepper(const FieldState& proto, const SimConfig& c);

    void linear(FieldState& s, double dt);
    // RK4 over dt with the configured substeps. Returns the relative mass0
    // change; the caller decides on rejection.
    double nonlinear(FieldState& s, double dt);
    // (1/4) integral of sum_j conj(u_j) F_j.
    cplx quartic(const FieldState& s) const;

    const std::vector<std::uint32_t>& active() const noexcept { return active_; }

private:
    static constexpr std::size_t kLanes = 16;  // keeps the working set in L1
    BoxGrid grid_;
    FrequencyWindow window_;
    std::vector<std::uint32_t> active_;
    ResonanceKernel kernel_;
    int substeps_ = 1;
    std::map<double, CVec> multipliers_;
};

}  // namespace resonant::detail

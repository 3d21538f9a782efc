#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "resonant/lattice.hpp"

namespace resonant {

// Modes reachable from `support` through nontrivial resonances inside the
// window (trivial resonances never leave the support).
std::vector<bool> resonant_closure(const ResonantTable& table, std::vector<bool> support);

// Resonant sum evaluated on many independent "lanes" at once, where a lane is
// either a grid point or one member of a batch of sequences. Data layout is
// [window index][lane]. The trivial part is applied in closed form
// (2 sum_k |a_k|^2 - |a_j|^2) a_j, and each nontrivial pair (j1,j2,j3),
// (j3,j2,j1) contributes one product with weight 2.
class ResonanceKernel {
public:
    ResonanceKernel() = default;
    explicit ResonanceKernel(const ResonantTable& table);
    // Only modes flagged active take part; `active` should be closed under
    // resonant_closure for the restriction to be exact.
    ResonanceKernel(const ResonantTable& table, const std::vector<bool>& active);

    const FrequencyWindow& window() const noexcept { return window_; }
    const std::vector<std::uint32_t>& active() const noexcept { return active_; }
    std::uint64_t pair_count() const noexcept { return pairs_.size(); }

    // f[i][lane] = F(a)_i for active i; inactive rows are set to zero.
    void apply(const double* re, const double* im, std::size_t lanes, double* fre, double* fim) const;
    // Same sums with Neumaier compensation in every accumulator.
    void apply_compensated(const double* re, const double* im, std::size_t lanes, double* fre,
                           double* fim) const;

private:
    void apply_chunk(const double* re, const double* im, std::size_t stride, double* fre, double* fim) const;

    struct Pair {
        std::uint16_t i1, i2, i3;
    };
    FrequencyWindow window_;
    std::vector<std::uint32_t> active_;
    std::vector<std::uint64_t> offsets_;  // per entry of active_
    std::vector<Pair> pairs_;
};

}  // namespace resonant

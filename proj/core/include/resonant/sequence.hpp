#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "resonant/fit.hpp"
#include "resonant/lattice.hpp"
#include "resonant/rng.hpp"

namespace resonant {

using cplx = std::complex<double>;

// Dense amplitudes over a window, indexed like FrequencyWindow.
class CoefSequence {
public:
    CoefSequence() = default;
    explicit CoefSequence(const FrequencyWindow& w) : window_(w), values_(w.size()) {}
    CoefSequence(const FrequencyWindow& w, std::initializer_list<std::pair<ModeIndex, cplx>> entries);

    const FrequencyWindow& window() const noexcept { return window_; }
    std::size_t size() const noexcept { return values_.size(); }

    cplx& operator[](std::size_t i) noexcept { return values_[i]; }
    const cplx& operator[](std::size_t i) const noexcept { return values_[i]; }
    cplx& at(ModeIndex j) { return values_[window_.checked_index(j)]; }
    const cplx& at(ModeIndex j) const { return values_[window_.checked_index(j)]; }

    std::vector<cplx>& values() noexcept { return values_; }
    const std::vector<cplx>& values() const noexcept { return values_; }

    bool all_finite() const noexcept;
    bool is_zero() const noexcept;

private:
    FrequencyWindow window_;
    std::vector<cplx> values_;
};

// (sum <j>^{2s} |a_j|^2)^{1/2} with <j>^2 = 1 + |j|^2.
double norm_hs(const CoefSequence& a, double s);

// Canonical-order compensated evaluation of F(a)_j = sum_R a_{j1} conj(a_{j2}) a_{j3}.
CoefSequence apply_nonlinearity_direct(const CoefSequence& a, const ResonantTable& table);

// Batched evaluation through ResonanceKernel (compensated, pair-folded).
// Agrees with the canonical evaluator to roundoff.
std::vector<CoefSequence> apply_nonlinearity_batch(std::span<const CoefSequence> batch,
                                                   const ResonantTable& table, unsigned workers = 0);
class ResonanceKernel;
std::vector<CoefSequence> apply_nonlinearity_batch(std::span<const CoefSequence> batch,
                                                   const ResonanceKernel& kernel, unsigned workers = 0);

struct SpectralSizes {
    int G = 1;           // spatial grid side
    std::int64_t M = 1;  // time samples
    std::uint64_t cost() const noexcept { return static_cast<std::uint64_t>(G) * G * static_cast<std::uint64_t>(M); }
};

// G = smallest 2^a 3^b 5^c 7^d >= 4K+1, M = 8K^2+1.
SpectralSizes spectral_sizes(int K);

struct SpectralOptions {
    std::uint64_t budget = 20'000'000'000ULL;  // cap on G^2 * M
    unsigned workers = 0;
};

// F(a) through the torus: synthesize v(t_m), cube pointwise, extract window
// coefficients, undo the phase and average over t_m = 2 pi m / M.
CoefSequence apply_nonlinearity_spectral(const CoefSequence& a, const SpectralOptions& opt = {});

// sum_j <j>^{2 alpha} a_j conj(F(a)_j).
cplx weighted_quartic_form(const CoefSequence& a, double alpha, const ResonantTable& table);
// Same contraction for a precomputed F.
cplx weighted_pairing(const CoefSequence& a, const CoefSequence& F, double alpha);

struct EstimateReport {
    double beta = 0.0;
    bool applicable = false;
    double r_l2 = 0.0;
    double r_h1 = 0.0;
    double r_fail = 0.0;
    double interp_l2 = 0.0;  // ||F||_l2 / (||a||_l2^d1 ||a||_h1^(3-d1)), d1 = 3 - 2 beta
    double interp_h1 = 0.0;  // ||F||_h1 / (||a||_l2^d2 ||a||_h1^(3-d2)), d2 = 2 - 2 beta
};

// Ratios from a and a precomputed F(a). Zero data gives applicable = false.
EstimateReport ratios_from(const CoefSequence& a, const CoefSequence& F, double beta);

// Throws ConstraintError for zero a or beta outside (0, 1].
EstimateReport estimate_ratios(const CoefSequence& a, double beta, const ResonantTable& table);

// Constant amplitude 1 on every mode of the window.
CoefSequence window_indicator(const FrequencyWindow& w);

// Complex Gaussian amplitudes with unit l2 norm.
CoefSequence random_sequence(const FrequencyWindow& w, CounterRng& rng);

// Complex Gaussian amplitudes damped by <j>^{-sigma}, sigma ~ U[2, 3],
// normalized to unit h1 norm.
CoefSequence random_decaying_sequence(const FrequencyWindow& w, CounterRng& rng);

struct FailurePoint {
    int K = 0;
    double r_fail = 0.0;
};

struct FailureScan {
    std::vector<FailurePoint> series;
    LinearFit power;  // log r_fail against log K, K > 0
    LinearFit log;    // r_fail against log K, K > 0
    bool fitted = false;
};

FailureScan failure_scan(const std::vector<int>& K_list, const SpectralOptions& opt = {});

struct EstimateRow {
    int K = 0;
    double beta = 0.0;
    double r_l2 = 0.0;
    double r_h1 = 0.0;
    double r_fail = 0.0;
    std::uint64_t seed = 0;  // per-trial key
};

struct EstimateSummary {
    int K = 0;
    double beta = 0.0;
    double max_r_l2 = 0.0;
    double max_r_h1 = 0.0;
    double max_interp_l2 = 0.0;
    double max_interp_h1 = 0.0;
};

struct EstimateCampaign {
    std::vector<EstimateRow> rows;
    std::vector<EstimateSummary> summary;
};

struct CampaignOptions {
    std::uint64_t seed = 1;
    int trials = 1000;
    std::size_t batch = 256;  // sequences held in memory at once
    unsigned workers = 0;
    TableOptions table;
};

// Random decaying ensemble per K; each draw is scored for every beta.
EstimateCampaign estimates_campaign(const std::vector<int>& K_list, const std::vector<double>& betas,
                                    const CampaignOptions& opt);

// Classical RK4 for i da/dt = F(a) with `steps` equal steps over [0, T].
CoefSequence sequence_flow(const CoefSequence& a, const ResonantTable& table, double T, int steps);

}  // namespace resonant

#pragma once

#include <cstdint>
#include <vector>

#include "resonant/fft.hpp"
#include "resonant/fit.hpp"
#include "resonant/sequence.hpp"

namespace resonant {

// Samples of a trigonometric polynomial on the G x G grid x_k = 2 pi k / G,
// stored with index iy * G + ix. The Fourier support is kept inside `window`.
class TorusField {
public:
    TorusField() = default;
    // Projects `samples` onto the window (out-of-window coefficients are zeroed).
    TorusField(const FrequencyWindow& w, int G, CVec samples);

    int G() const noexcept { return G_; }
    const FrequencyWindow& window() const noexcept { return window_; }
    const CVec& values() const noexcept { return values_; }
    const cplx& at(int ix, int iy) const { return values_[static_cast<std::size_t>(iy) * G_ + ix]; }

    // (2 pi) * sqrt(mean |v|^2), the L2 norm on [0, 2 pi)^2.
    double l2_norm() const;
    CoefSequence coefficients() const;

private:
    friend TorusField torus_propagate(const CoefSequence& a, double t, int G);
    FrequencyWindow window_;
    int G_ = 0;
    CVec values_;
};

// sum_j a_j e^{i j.x} e^{i |j|^2 t} sampled on G x G. Requires G >= 2K+1.
TorusField torus_propagate(const CoefSequence& a, double t, int G);

// (2 pi)^{-3} times the exact quadrature of the integral over [0, 2 pi] x T^2 of
// |v|^2 v conj(g), where v and g are the propagated a and b.
cplx torus_quartic_pairing(const CoefSequence& a, const CoefSequence& b);

// Random complex Gaussian data on N/2 < |j| <= N inside the window K = N,
// normalized to unit l2.
CoefSequence annulus_data(int N, CounterRng& rng);

struct RatioStats {
    int N = 0;  // N for L4 runs, N1 for bilinear runs
    int N2 = 0;
    double max = 0.0;
    double mean = 0.0;
    double min = 0.0;
    std::vector<double> ratios;
};

struct StrichartzOptions {
    std::uint64_t budget = 20'000'000'000ULL;  // cap on G^2 * M
    unsigned workers = 0;
};

// ||v||_{L4([0,2pi] x T^2)} / ||a||_{l2}, exact quadrature.
double l4_ratio(const CoefSequence& a, const StrichartzOptions& opt = {});
// ||(e^{it Delta}u)(e^{it Delta}v)||_{L2([0,2pi] x T^2)} / (||u|| ||v||), exact quadrature.
double bilinear_ratio(const CoefSequence& u, const CoefSequence& v, const StrichartzOptions& opt = {});

struct L4Campaign {
    std::vector<RatioStats> series;
    LinearFit max_fit;   // log max ratio against log N
    LinearFit mean_fit;  // log mean ratio against log N
    bool fitted = false;
};

L4Campaign strichartz_l4_measure(const std::vector<int>& N_list, int trials, std::uint64_t seed,
                                 const StrichartzOptions& opt = {});

RatioStats bilinear_measure(int N1, int N2, int trials, std::uint64_t seed, const StrichartzOptions& opt = {});

}  // namespace resonant

#include <cmath>
#include <numbers>
#include <string>

#include "resonant/errors.hpp"
#include "resonant/fft.hpp"
#include "resonant/parallel.hpp"
#include "resonant/sequence.hpp"
#include "resonant/summation.hpp"

namespace resonant {

SpectralSizes spectral_sizes(int K) {
    SpectralSizes s;
    s.G = fft_friendly_size(4 * K + 1);
    s.M = 8 * static_cast<std::int64_t>(K) * K + 1;
    return s;
}

CoefSequence apply_nonlinearity_spectral(const CoefSequence& a, const SpectralOptions& opt) {
    const FrequencyWindow& w = a.window();
    const SpectralSizes sz = spectral_sizes(w.K());
    if (sz.cost() > opt.budget)
        throw CapacityError("spectral", "G^2*M=" + std::to_string(sz.cost()) + " above cap " +
                                            std::to_string(opt.budget));
    const int G = sz.G;
    const std::int64_t M = sz.M;
    const std::size_t n = w.size();
    const std::size_t cells = static_cast<std::size_t>(G) * G;

    std::vector<std::size_t> pos(n);
    std::vector<std::int64_t> nrm(n);
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < n; ++i) {
        const ModeIndex j = w.mode(i);
        const auto gx = static_cast<std::size_t>(((j.x % G) + G) % G);
        const auto gy = static_cast<std::size_t>(((j.y % G) + G) % G);
        pos[i] = gy * G + gx;
        nrm[i] = j.norm2() % M;
        if (a[i] != cplx{}) support.push_back(i);
    }
    std::vector<cplx> phase(static_cast<std::size_t>(M));
    for (std::int64_t r = 0; r < M; ++r) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(M);
        phase[r] = {std::cos(th), std::sin(th)};
    }

    // Fixed block layout so the reduction order does not depend on workers.
    constexpr std::int64_t kBlock = 256;
    const std::size_t blocks = static_cast<std::size_t>((M + kBlock - 1) / kBlock);
    std::vector<std::vector<cplx>> partial(blocks, std::vector<cplx>(n));
    const double inv_cells = 1.0 / static_cast<double>(cells);

    parallel_for(blocks, opt.workers, [&](std::size_t bb, std::size_t be, unsigned) {
        CVec grid(cells);
        std::vector<CompensatedComplexSum> acc(n);
        for (std::size_t b = bb; b < be; ++b) {
            std::fill(acc.begin(), acc.end(), CompensatedComplexSum{});
            const std::int64_t m0 = static_cast<std::int64_t>(b) * kBlock;
            const std::int64_t m1 = std::min(M, m0 + kBlock);
            for (std::int64_t m = m0; m < m1; ++m) {
                std::fill(grid.begin(), grid.end(), cplx{});
                for (std::size_t i : support) grid[pos[i]] = a[i] * phase[(nrm[i] * m) % M];
                fft2(grid.data(), G, G, 1, FftDir::backward);
                for (cplx& v : grid) v *= std::norm(v);
                fft2(grid.data(), G, G, 1, FftDir::forward);
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx ph = phase[(nrm[i] * m) % M];
                    acc[i].add(grid[pos[i]] * inv_cells * std::conj(ph));
                }
            }
            for (std::size_t i = 0; i < n; ++i) partial[b][i] = acc[i].value();
        }
    });

    // Pairwise tree over blocks in index order.
    for (std::size_t stride = 1; stride < blocks; stride *= 2)
        for (std::size_t b = 0; b + stride < blocks; b += 2 * stride)
            for (std::size_t i = 0; i < n; ++i) partial[b][i] += partial[b + stride][i];

    CoefSequence F(w);
    const double invM = 1.0 / static_cast<double>(M);
    for (std::size_t i = 0; i < n; ++i) F[i] = partial[0][i] * invM;
    return F;
}

}  // namespace resonant

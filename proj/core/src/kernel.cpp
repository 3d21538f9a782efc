#include "resonant/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "resonant/errors.hpp"

namespace resonant {

std::vector<bool> resonant_closure(const ResonantTable& table, std::vector<bool> support) {
    const std::size_t n = table.window().size();
    if (support.size() != n) throw WindowError("support mask size does not match the table window");
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (support[i]) continue;
            for (PackedTriple p : table.packed(i)) {
                if (support[p.i1] && support[p.i2] && support[ResonantTable::i3(i, p)]) {
                    support[i] = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    return support;
}

ResonanceKernel::ResonanceKernel(const ResonantTable& table)
    : ResonanceKernel(table, std::vector<bool>(table.window().size(), true)) {}

ResonanceKernel::ResonanceKernel(const ResonantTable& table, const std::vector<bool>& active) : window_(table.window()) {
    const std::size_t n = window_.size();
    if (active.size() != n) throw WindowError("active mask size does not match the table window");
    offsets_.push_back(0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!active[i]) continue;
        active_.push_back(static_cast<std::uint32_t>(i));
        for (PackedTriple p : table.packed(i)) {
            const std::size_t i3 = ResonantTable::i3(i, p);
            if (ResonantTable::kind(i, p) != TripleKind::nontrivial || p.i1 > i3) continue;
            if (!active[p.i1] || !active[p.i2] || !active[i3]) continue;
            pairs_.push_back({p.i1, p.i2, static_cast<std::uint16_t>(i3)});
        }
        offsets_.push_back(pairs_.size());
    }
}

namespace {

constexpr std::size_t kBlock = 64;

inline void neumaier(double& s, double& c, double x) {
    const double t = s + x;
    c += (std::fabs(s) >= std::fabs(x)) ? (s - t) + x : (x - t) + s;
    s = t;
}

// One AVX-512 register, or two AVX2 ones.
constexpr std::size_t kChunk = 8;
using Vd = double __attribute__((vector_size(kChunk * sizeof(double))));

inline Vd load(const double* p) {
    Vd v;
    std::memcpy(&v, p, sizeof v);
    return v;
}

inline void store(double* p, Vd v) { std::memcpy(p, &v, sizeof v); }

}  // namespace

// Every lane runs the same instruction sequence, so results do not depend on
// lane position.
void ResonanceKernel::apply_chunk(const double* re, const double* im, std::size_t stride, double* fre,
                                  double* fim) const {
    Vd S{};
    for (std::uint32_t k : active_) {
        const Vd xr = load(re + k * stride), xi = load(im + k * stride);
        S += xr * xr + xi * xi;
    }
    for (std::size_t t = 0; t < active_.size(); ++t) {
        const std::size_t i = active_[t];
        Vd ar{}, ai{};
        for (std::uint64_t q = offsets_[t]; q < offsets_[t + 1]; ++q) {
            const Pair p = pairs_[q];
            const Vd r1 = load(re + p.i1 * stride), m1 = load(im + p.i1 * stride);
            const Vd r2 = load(re + p.i2 * stride), m2 = load(im + p.i2 * stride);
            const Vd r3 = load(re + p.i3 * stride), m3 = load(im + p.i3 * stride);
            const Vd tr = r2 * r3 + m2 * m3;
            const Vd ti = r2 * m3 - m2 * r3;
            ar += r1 * tr - m1 * ti;
            ai += r1 * ti + m1 * tr;
        }
        const Vd xr = load(re + i * stride), xi = load(im + i * stride);
        const Vd c = 2.0 * S - (xr * xr + xi * xi);
        store(fre + i * stride, c * xr + 2.0 * ar);
        store(fim + i * stride, c * xi + 2.0 * ai);
    }
}

void ResonanceKernel::apply(const double* re, const double* im, std::size_t lanes, double* fre,
                            double* fim) const {
    const std::size_t n = window_.size();
    std::fill(fre, fre + n * lanes, 0.0);
    std::fill(fim, fim + n * lanes, 0.0);
    const std::size_t full = lanes - lanes % kChunk;
    for (std::size_t l0 = 0; l0 < full; l0 += kChunk) apply_chunk(re + l0, im + l0, lanes, fre + l0, fim + l0);
    if (full == lanes) return;

    // Ragged tail: pad to a whole chunk so it takes the same code path.
    const std::size_t nb = lanes - full;
    std::vector<double> buf(4 * n * kChunk, 0.0);
    double* br = buf.data();
    double* bi = br + n * kChunk;
    double* gr = bi + n * kChunk;
    double* gi = gr + n * kChunk;
    for (std::uint32_t k : active_)
        for (std::size_t l = 0; l < nb; ++l) {
            br[k * kChunk + l] = re[k * lanes + full + l];
            bi[k * kChunk + l] = im[k * lanes + full + l];
        }
    apply_chunk(br, bi, kChunk, gr, gi);
    for (std::uint32_t k : active_)
        for (std::size_t l = 0; l < nb; ++l) {
            fre[k * lanes + full + l] = gr[k * kChunk + l];
            fim[k * lanes + full + l] = gi[k * kChunk + l];
        }
}

void ResonanceKernel::apply_compensated(const double* re, const double* im, std::size_t lanes, double* fre,
                                        double* fim) const {
    const std::size_t n = window_.size();
    std::fill(fre, fre + n * lanes, 0.0);
    std::fill(fim, fim + n * lanes, 0.0);
    alignas(64) double S[kBlock], Sc[kBlock], ar[kBlock], arc[kBlock], ai[kBlock], aic[kBlock];

    for (std::size_t l0 = 0; l0 < lanes; l0 += kBlock) {
        const std::size_t nb = std::min(kBlock, lanes - l0);
        std::fill(S, S + kBlock, 0.0);
        std::fill(Sc, Sc + kBlock, 0.0);
        for (std::uint32_t k : active_) {
            const double* xr = re + k * lanes + l0;
            const double* xi = im + k * lanes + l0;
            for (std::size_t l = 0; l < nb; ++l) neumaier(S[l], Sc[l], xr[l] * xr[l] + xi[l] * xi[l]);
        }
        for (std::size_t l = 0; l < nb; ++l) S[l] += Sc[l];

        for (std::size_t t = 0; t < active_.size(); ++t) {
            const std::size_t i = active_[t];
            std::fill(ar, ar + kBlock, 0.0);
            std::fill(ai, ai + kBlock, 0.0);
            std::fill(arc, arc + kBlock, 0.0);
            std::fill(aic, aic + kBlock, 0.0);
            for (std::uint64_t q = offsets_[t]; q < offsets_[t + 1]; ++q) {
                const Pair p = pairs_[q];
                const double* __restrict r1 = re + p.i1 * lanes + l0;
                const double* __restrict m1 = im + p.i1 * lanes + l0;
                const double* __restrict r2 = re + p.i2 * lanes + l0;
                const double* __restrict m2 = im + p.i2 * lanes + l0;
                const double* __restrict r3 = re + p.i3 * lanes + l0;
                const double* __restrict m3 = im + p.i3 * lanes + l0;
                for (std::size_t l = 0; l < nb; ++l) {
                    const double tr = r2[l] * r3[l] + m2[l] * m3[l];
                    const double ti = r2[l] * m3[l] - m2[l] * r3[l];
                    neumaier(ar[l], arc[l], r1[l] * tr - m1[l] * ti);
                    neumaier(ai[l], aic[l], r1[l] * ti + m1[l] * tr);
                }
            }
            const double* xr = re + i * lanes + l0;
            const double* xi = im + i * lanes + l0;
            double* yr = fre + i * lanes + l0;
            double* yi = fim + i * lanes + l0;
            for (std::size_t l = 0; l < nb; ++l) {
                const double c = 2.0 * S[l] - (xr[l] * xr[l] + xi[l] * xi[l]);
                yr[l] = c * xr[l] + 2.0 * (ar[l] + arc[l]);
                yi[l] = c * xi[l] + 2.0 * (ai[l] + aic[l]);
            }
        }
    }
}

}  // namespace resonant

#include "resonant/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "resonant/errors.hpp"
#include "resonant/parallel.hpp"
#include "resonant/summation.hpp"

namespace resonant {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t grid_pos(ModeIndex j, int G) {
    const auto gx = static_cast<std::size_t>(((j.x % G) + G) % G);
    const auto gy = static_cast<std::size_t>(((j.y % G) + G) % G);
    return gy * static_cast<std::size_t>(G) + gx;
}

// Synthesizes fields at the exact quadrature times t_m = 2 pi m / M.
class Synth {
public:
    Synth(const CoefSequence& a, int G, std::int64_t M) : a_(a), G_(G), M_(M), phase_(static_cast<std::size_t>(M)) {
        const FrequencyWindow& w = a.window();
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == cplx{}) continue;
            idx_.push_back(i);
            pos_.push_back(grid_pos(w.mode(i), G));
            nrm_.push_back(w.mode(i).norm2() % M);
        }
        for (std::int64_t r = 0; r < M; ++r) {
            const double th = kTwoPi * static_cast<double>(r) / static_cast<double>(M);
            phase_[r] = {std::cos(th), std::sin(th)};
        }
    }

    void at(std::int64_t m, cplx* grid) const {
        std::fill(grid, grid + static_cast<std::size_t>(G_) * G_, cplx{});
        for (std::size_t k = 0; k < idx_.size(); ++k) grid[pos_[k]] = a_[idx_[k]] * phase_[(nrm_[k] * m) % M_];
        fft2(grid, G_, G_, 1, FftDir::backward);
    }

private:
    const CoefSequence& a_;
    int G_;
    std::int64_t M_;
    std::vector<cplx> phase_;
    std::vector<std::size_t> idx_, pos_;
    std::vector<std::int64_t> nrm_;
};

void check_budget(int G, std::int64_t M, std::uint64_t budget, const char* what) {
    const std::uint64_t cost = static_cast<std::uint64_t>(G) * G * static_cast<std::uint64_t>(M);
    if (cost > budget)
        throw CapacityError("quadrature", std::string(what) + " needs G^2*M=" + std::to_string(cost) + ", cap " +
                                              std::to_string(budget));
}

// Compensated sum of per-sample values computed in parallel over m.
template <class PerSample>
double time_sum(std::int64_t M, unsigned workers, int G, PerSample&& f) {
    std::vector<double> s(static_cast<std::size_t>(M));
    parallel_for(static_cast<std::size_t>(M), workers, [&](std::size_t b, std::size_t e, unsigned) {
        CVec g1(static_cast<std::size_t>(G) * G), g2(static_cast<std::size_t>(G) * G);
        for (std::size_t m = b; m < e; ++m) s[m] = f(static_cast<std::int64_t>(m), g1, g2);
    });
    CompensatedSum acc;
    for (double v : s) acc.add(v);
    return acc.value();
}

}  // namespace

TorusField::TorusField(const FrequencyWindow& w, int G, CVec samples) : window_(w), G_(G), values_(std::move(samples)) {
    if (G < 2 * w.K() + 1) throw ConstraintError("grid G=" + std::to_string(G) + " too small for window K=" + std::to_string(w.K()));
    if (values_.size() != static_cast<std::size_t>(G) * G) throw ConstraintError("sample count does not match G*G");
    CVec spec = values_;
    fft2(spec.data(), G, G, 1, FftDir::forward);
    const double inv = 1.0 / (static_cast<double>(G) * G);
    CVec kept(spec.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const std::size_t p = grid_pos(w.mode(i), G);
        kept[p] = spec[p] * inv;
    }
    fft2(kept.data(), G, G, 1, FftDir::backward);
    values_ = std::move(kept);
}

double TorusField::l2_norm() const {
    CompensatedSum s;
    for (const cplx& v : values_) s.add(std::norm(v));
    return kTwoPi * std::sqrt(s.value() / static_cast<double>(values_.size()));
}

CoefSequence TorusField::coefficients() const {
    CVec spec = values_;
    fft2(spec.data(), G_, G_, 1, FftDir::forward);
    const double inv = 1.0 / (static_cast<double>(G_) * G_);
    CoefSequence a(window_);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = spec[grid_pos(window_.mode(i), G_)] * inv;
    return a;
}

TorusField torus_propagate(const CoefSequence& a, double t, int G) {
    const FrequencyWindow& w = a.window();
    if (G < 2 * w.K() + 1)
        throw ConstraintError("grid G=" + std::to_string(G) + " too small for window K=" + std::to_string(w.K()));
    const double tr = std::fmod(t, kTwoPi);
    TorusField f;
    f.window_ = w;
    f.G_ = G;
    f.values_.assign(static_cast<std::size_t>(G) * G, cplx{});
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == cplx{}) continue;
        const ModeIndex j = w.mode(i);
        const double th = std::fmod(static_cast<double>(j.norm2()) * tr, kTwoPi);
        f.values_[grid_pos(j, G)] = a[i] * cplx{std::cos(th), std::sin(th)};
    }
    fft2(f.values_.data(), G, G, 1, FftDir::backward);
    return f;
}

cplx torus_quartic_pairing(const CoefSequence& a, const CoefSequence& b) {
    if (!(a.window() == b.window())) throw WindowError("torus_quartic_pairing: window mismatch");
    const int K = a.window().K();
    const int G = fft_friendly_size(4 * K + 1);
    const std::int64_t M = 8 * static_cast<std::int64_t>(K) * K + 1;
    const Synth sa(a, G, M), sb(b, G, M);
    const std::size_t cells = static_cast<std::size_t>(G) * G;
    CVec gv(cells), gg(cells);
    CompensatedComplexSum acc;
    for (std::int64_t m = 0; m < M; ++m) {
        sa.at(m, gv.data());
        sb.at(m, gg.data());
        CompensatedComplexSum s;
        for (std::size_t x = 0; x < cells; ++x) s.add(std::norm(gv[x]) * gv[x] * std::conj(gg[x]));
        acc.add(s.value());
    }
    return acc.value() / (static_cast<double>(M) * static_cast<double>(cells));
}

CoefSequence annulus_data(int N, CounterRng& rng) {
    if (N < 1) throw ConstraintError("annulus scale N must be positive");
    const FrequencyWindow w(N);
    CoefSequence a(w);
    const std::int64_t hi = static_cast<std::int64_t>(N) * N;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::int64_t r2 = w.mode(i).norm2();
        // N/2 < |j| <= N  <=>  N^2 < 4|j|^2 and |j|^2 <= N^2
        if (4 * r2 > hi && r2 <= hi) a[i] = rng.complex_normal();
    }
    const double n = norm_hs(a, 0.0);
    for (auto& v : a.values()) v /= n;
    return a;
}

double l4_ratio(const CoefSequence& a, const StrichartzOptions& opt) {
    const int K = a.window().K();
    const int G = fft_friendly_size(4 * K + 1);
    const std::int64_t M = 8 * static_cast<std::int64_t>(K) * K + 1;
    check_budget(G, M, opt.budget, "L4 quadrature");
    const double norm = norm_hs(a, 0.0);
    if (norm == 0.0) return 0.0;
    const Synth s(a, G, M);
    const double total = time_sum(M, opt.workers, G, [&](std::int64_t m, CVec& g, CVec&) {
        s.at(m, g.data());
        double acc = 0.0;
        for (const cplx& v : g) {
            const double q = std::norm(v);
            acc += q * q;
        }
        return acc;
    });
    const double integral = total * (kTwoPi / static_cast<double>(M)) *
                            (kTwoPi * kTwoPi / (static_cast<double>(G) * G));
    return std::pow(integral, 0.25) / norm;
}

double bilinear_ratio(const CoefSequence& u, const CoefSequence& v, const StrichartzOptions& opt) {
    const std::int64_t K1 = u.window().K(), K2 = v.window().K();
    const int G = fft_friendly_size(static_cast<int>(2 * (K1 + K2) + 1));
    const std::int64_t M = 2 * (K1 * K1 + K2 * K2) + 1;
    check_budget(G, M, opt.budget, "bilinear quadrature");
    const double nu = norm_hs(u, 0.0), nv = norm_hs(v, 0.0);
    if (nu == 0.0 || nv == 0.0) return 0.0;
    const Synth su(u, G, M), sv(v, G, M);
    const double total = time_sum(M, opt.workers, G, [&](std::int64_t m, CVec& g1, CVec& g2) {
        su.at(m, g1.data());
        sv.at(m, g2.data());
        double acc = 0.0;
        for (std::size_t x = 0; x < g1.size(); ++x) acc += std::norm(g1[x]) * std::norm(g2[x]);
        return acc;
    });
    const double integral = total * (kTwoPi / static_cast<double>(M)) *
                            (kTwoPi * kTwoPi / (static_cast<double>(G) * G));
    return std::sqrt(integral) / (nu * nv);
}

namespace {

RatioStats summarize(int N, int N2, std::vector<double> r) {
    RatioStats s;
    s.N = N;
    s.N2 = N2;
    s.max = *std::max_element(r.begin(), r.end());
    s.min = *std::min_element(r.begin(), r.end());
    CompensatedSum acc;
    for (double x : r) acc.add(x);
    s.mean = acc.value() / static_cast<double>(r.size());
    s.ratios = std::move(r);
    return s;
}

}  // namespace

L4Campaign strichartz_l4_measure(const std::vector<int>& N_list, int trials, std::uint64_t seed,
                                 const StrichartzOptions& opt) {
    if (trials < 1) throw ConstraintError("trials must be positive");
    for (int N : N_list) {
        if (N < 1) throw ConstraintError("N must be positive");
        check_budget(fft_friendly_size(4 * N + 1), 8 * static_cast<std::int64_t>(N) * N + 1, opt.budget,
                     "L4 quadrature");
    }
    L4Campaign out;
    StrichartzOptions inner = opt;
    inner.workers = 1;
    for (int N : N_list) {
        std::vector<double> r(static_cast<std::size_t>(trials));
        parallel_for(r.size(), opt.workers, [&](std::size_t b, std::size_t e, unsigned) {
            for (std::size_t t = b; t < e; ++t) {
                CounterRng rng(seed, "strichartz/l4/N" + std::to_string(N), t);
                r[t] = l4_ratio(annulus_data(N, rng), inner);
            }
        });
        out.series.push_back(summarize(N, 0, std::move(r)));
    }
    if (out.series.size() >= 2) {
        std::vector<double> x, ymax, ymean;
        for (const auto& s : out.series) {
            x.push_back(s.N);
            ymax.push_back(s.max);
            ymean.push_back(s.mean);
        }
        out.max_fit = fit_power(x, ymax);
        out.mean_fit = fit_power(x, ymean);
        out.fitted = true;
    }
    return out;
}

RatioStats bilinear_measure(int N1, int N2, int trials, std::uint64_t seed, const StrichartzOptions& opt) {
    if (trials < 1) throw ConstraintError("trials must be positive");
    if (N2 > N1) throw ConstraintError("bilinear_measure expects N2 <= N1");
    check_budget(fft_friendly_size(2 * (N1 + N2) + 1),
                 2 * (static_cast<std::int64_t>(N1) * N1 + static_cast<std::int64_t>(N2) * N2) + 1, opt.budget,
                 "bilinear quadrature");
    StrichartzOptions inner = opt;
    inner.workers = 1;
    std::vector<double> r(static_cast<std::size_t>(trials));
    parallel_for(r.size(), opt.workers, [&](std::size_t b, std::size_t e, unsigned) {
        for (std::size_t t = b; t < e; ++t) {
            CounterRng ru(seed, "strichartz/bilinear/u/N" + std::to_string(N1) + "/" + std::to_string(N2), t);
            CounterRng rv(seed, "strichartz/bilinear/v/N" + std::to_string(N2), t);
            r[t] = bilinear_ratio(annulus_data(N1, ru), annulus_data(N2, rv), inner);
        }
    });
    return summarize(N1, N2, std::move(r));
}

}  // namespace resonant

#include "resonant/sequence.hpp"

#include <cmath>
#include <string>

#include "resonant/errors.hpp"
#include "resonant/kernel.hpp"
#include "resonant/parallel.hpp"
#include "resonant/summation.hpp"

namespace resonant {

CoefSequence::CoefSequence(const FrequencyWindow& w, std::initializer_list<std::pair<ModeIndex, cplx>> entries)
    : CoefSequence(w) {
    for (const auto& [j, v] : entries) at(j) = v;
}

bool CoefSequence::all_finite() const noexcept {
    for (const cplx& v : values_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

bool CoefSequence::is_zero() const noexcept {
    for (const cplx& v : values_)
        if (v != cplx{}) return false;
    return true;
}

double norm_hs(const CoefSequence& a, double s) {
    CompensatedSum acc;
    const auto& w = a.window();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double m = std::norm(a[i]);
        if (m == 0.0) continue;
        acc.add(s == 0.0 ? m : std::pow(w.mode(i).bracket2(), s) * m);
    }
    return std::sqrt(acc.value());
}

namespace {

void require_same(const FrequencyWindow& a, const FrequencyWindow& b, const char* what) {
    if (!(a == b))
        throw WindowError(std::string(what) + ": window K=" + std::to_string(a.K()) + " does not match K=" +
                          std::to_string(b.K()));
}

}  // namespace

CoefSequence apply_nonlinearity_direct(const CoefSequence& a, const ResonantTable& table) {
    require_same(a.window(), table.window(), "apply_nonlinearity_direct");
    CoefSequence F(a.window());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CompensatedComplexSum acc;
        for (PackedTriple p : table.packed(i)) {
            const cplx a1 = a[p.i1], a2 = a[p.i2], a3 = a[ResonantTable::i3(i, p)];
            acc.add(a1 * std::conj(a2) * a3);
        }
        F[i] = acc.value();
    }
    return F;
}

std::vector<CoefSequence> apply_nonlinearity_batch(std::span<const CoefSequence> batch, const ResonantTable& table,
                                                   unsigned workers) {
    for (const auto& a : batch) require_same(a.window(), table.window(), "apply_nonlinearity_batch");
    if (batch.empty()) return {};
    return apply_nonlinearity_batch(batch, ResonanceKernel(table), workers);
}

std::vector<CoefSequence> apply_nonlinearity_batch(std::span<const CoefSequence> batch, const ResonanceKernel& kernel,
                                                   unsigned workers) {
    const FrequencyWindow& w = kernel.window();
    for (const auto& a : batch) require_same(a.window(), w, "apply_nonlinearity_batch");
    std::vector<CoefSequence> out(batch.size(), CoefSequence(w));
    if (batch.empty()) return out;

    const std::size_t n = w.size();
    constexpr std::size_t kLanes = 16;
    const std::size_t chunks = (batch.size() + kLanes - 1) / kLanes;
    parallel_for(chunks, workers, [&](std::size_t cb, std::size_t ce, unsigned) {
        std::vector<double> re(n * kLanes), im(n * kLanes), fr(n * kLanes), fi(n * kLanes);
        for (std::size_t c = cb; c < ce; ++c) {
            const std::size_t b0 = c * kLanes;
            const std::size_t nb = std::min(kLanes, batch.size() - b0);
            std::fill(re.begin(), re.end(), 0.0);
            std::fill(im.begin(), im.end(), 0.0);
            for (std::size_t b = 0; b < nb; ++b)
                for (std::size_t i = 0; i < n; ++i) {
                    re[i * kLanes + b] = batch[b0 + b][i].real();
                    im[i * kLanes + b] = batch[b0 + b][i].imag();
                }
            kernel.apply_compensated(re.data(), im.data(), kLanes, fr.data(), fi.data());
            for (std::size_t b = 0; b < nb; ++b)
                for (std::size_t i = 0; i < n; ++i) out[b0 + b][i] = {fr[i * kLanes + b], fi[i * kLanes + b]};
        }
    });
    return out;
}

cplx weighted_pairing(const CoefSequence& a, const CoefSequence& F, double alpha) {
    require_same(a.window(), F.window(), "weighted_pairing");
    CompensatedComplexSum acc;
    const auto& w = a.window();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double wt = alpha == 0.0 ? 1.0 : std::pow(w.mode(i).bracket2(), alpha);
        acc.add(wt * a[i] * std::conj(F[i]));
    }
    return acc.value();
}

cplx weighted_quartic_form(const CoefSequence& a, double alpha, const ResonantTable& table) {
    return weighted_pairing(a, apply_nonlinearity_direct(a, table), alpha);
}

EstimateReport ratios_from(const CoefSequence& a, const CoefSequence& F, double beta) {
    EstimateReport r;
    r.beta = beta;
    const double l2 = norm_hs(a, 0.0), h1 = norm_hs(a, 1.0), hb = norm_hs(a, beta);
    if (l2 == 0.0) return r;
    const double Fl2 = norm_hs(F, 0.0), Fh1 = norm_hs(F, 1.0);
    r.applicable = true;
    r.r_l2 = Fl2 / (l2 * l2 * hb);
    r.r_h1 = Fh1 / (h1 * hb * l2);
    r.r_fail = Fl2 / (l2 * l2 * l2);
    const double d1 = 3.0 - 2.0 * beta, d2 = 2.0 - 2.0 * beta;
    r.interp_l2 = Fl2 / (std::pow(l2, d1) * std::pow(h1, 3.0 - d1));
    r.interp_h1 = Fh1 / (std::pow(l2, d2) * std::pow(h1, 3.0 - d2));
    return r;
}

EstimateReport estimate_ratios(const CoefSequence& a, double beta, const ResonantTable& table) {
    if (!(beta > 0.0 && beta <= 1.0)) throw ConstraintError("beta must lie in (0, 1]");
    if (a.is_zero()) throw ConstraintError("estimate ratios are undefined for the zero sequence");
    return ratios_from(a, apply_nonlinearity_direct(a, table), beta);
}

CoefSequence window_indicator(const FrequencyWindow& w) {
    CoefSequence a(w);
    for (auto& v : a.values()) v = 1.0;
    return a;
}

CoefSequence random_sequence(const FrequencyWindow& w, CounterRng& rng) {
    CoefSequence a(w);
    for (auto& v : a.values()) v = rng.complex_normal();
    const double n = norm_hs(a, 0.0);
    for (auto& v : a.values()) v /= n;
    return a;
}

CoefSequence random_decaying_sequence(const FrequencyWindow& w, CounterRng& rng) {
    CoefSequence a(w);
    const double sigma = rng.uniform(2.0, 3.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] = rng.complex_normal() * std::pow(w.mode(i).bracket2(), -0.5 * sigma);
    const double n = norm_hs(a, 1.0);
    for (auto& v : a.values()) v /= n;
    return a;
}

CoefSequence sequence_flow(const CoefSequence& a, const ResonantTable& table, double T, int steps) {
    require_same(a.window(), table.window(), "sequence_flow");
    if (steps < 1) throw ConstraintError("sequence_flow needs at least one step");
    const double h = T / steps;
    const cplx mi{0.0, -1.0};
    auto rhs = [&](const CoefSequence& x) {
        CoefSequence F = apply_nonlinearity_direct(x, table);
        for (auto& v : F.values()) v *= mi;
        return F;
    };
    auto axpy = [](const CoefSequence& x, double s, const CoefSequence& k) {
        CoefSequence y = x;
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * k[i];
        return y;
    };
    CoefSequence x = a;
    for (int s = 0; s < steps; ++s) {
        const CoefSequence k1 = rhs(x);
        const CoefSequence k2 = rhs(axpy(x, h / 2, k1));
        const CoefSequence k3 = rhs(axpy(x, h / 2, k2));
        const CoefSequence k4 = rhs(axpy(x, h, k3));
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += h / 6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return x;
}

}  // namespace resonant

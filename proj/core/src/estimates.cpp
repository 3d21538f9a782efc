#include <algorithm>
#include <string>

#include "resonant/errors.hpp"
#include "resonant/kernel.hpp"
#include "resonant/sequence.hpp"

namespace resonant {

FailureScan failure_scan(const std::vector<int>& K_list, const SpectralOptions& opt) {
    if (!std::is_sorted(K_list.begin(), K_list.end()))
        throw ConstraintError("failure_scan expects an ascending K list");
    for (int K : K_list) {
        const SpectralSizes sz = spectral_sizes(K);
        if (sz.cost() > opt.budget)
            throw CapacityError("spectral", "K=" + std::to_string(K) + " needs G^2*M=" + std::to_string(sz.cost()));
    }
    FailureScan scan;
    std::vector<double> xs, ys;
    for (int K : K_list) {
        const FrequencyWindow w(K);
        const CoefSequence a = window_indicator(w);
        const CoefSequence F = apply_nonlinearity_spectral(a, opt);
        const double l2 = norm_hs(a, 0.0);
        const double r = norm_hs(F, 0.0) / (l2 * l2 * l2);
        scan.series.push_back({K, r});
        if (K > 0) {
            xs.push_back(K);
            ys.push_back(r);
        }
    }
    if (xs.size() >= 2) {
        scan.power = fit_power(xs, ys);
        scan.log = fit_log(xs, ys);
        scan.fitted = true;
    }
    return scan;
}

EstimateCampaign estimates_campaign(const std::vector<int>& K_list, const std::vector<double>& betas,
                                    const CampaignOptions& opt) {
    for (double b : betas)
        if (!(b > 0.0 && b <= 1.0)) throw ConstraintError("beta grid entries must lie in (0, 1]");
    if (opt.trials < 1) throw ConstraintError("campaign needs at least one trial");
    if (opt.batch < 1) throw ConstraintError("campaign batch must be positive");

    EstimateCampaign out;
    for (int K : K_list) {
        const FrequencyWindow w(K);
        const ResonanceKernel kernel(build_table(w, opt.table));
        std::vector<EstimateSummary> sums;
        for (double b : betas) sums.push_back({K, b, 0, 0, 0, 0});

        for (int t0 = 0; t0 < opt.trials; t0 += static_cast<int>(opt.batch)) {
            const int nb = std::min<int>(static_cast<int>(opt.batch), opt.trials - t0);
            std::vector<CoefSequence> batch;
            std::vector<std::uint64_t> keys;
            for (int t = t0; t < t0 + nb; ++t) {
                CounterRng rng(opt.seed, "estimates/K" + std::to_string(K), static_cast<std::uint64_t>(t));
                keys.push_back(rng.key());
                batch.push_back(random_decaying_sequence(w, rng));
            }
            const auto Fs = apply_nonlinearity_batch(batch, kernel, opt.workers);
            for (int t = 0; t < nb; ++t) {
                for (std::size_t bi = 0; bi < betas.size(); ++bi) {
                    const EstimateReport r = ratios_from(batch[t], Fs[t], betas[bi]);
                    out.rows.push_back({K, betas[bi], r.r_l2, r.r_h1, r.r_fail, keys[t]});
                    auto& s = sums[bi];
                    s.max_r_l2 = std::max(s.max_r_l2, r.r_l2);
                    s.max_r_h1 = std::max(s.max_r_h1, r.r_h1);
                    s.max_interp_l2 = std::max(s.max_interp_l2, r.interp_l2);
                    s.max_interp_h1 = std::max(s.max_interp_h1, r.interp_h1);
                }
            }
        }
        out.summary.insert(out.summary.end(), sums.begin(), sums.end());
    }
    return out;
}

}  // namespace resonant

#include <algorithm>
#include <cmath>
#include <numeric>

#include "artifacts.hpp"
#include "harness.hpp"
#include "resonant/errors.hpp"
#include "resonant/field.hpp"
#include "resonant/fit.hpp"
#include "resonant/lattice.hpp"
#include "resonant/parallel.hpp"
#include "resonant/sequence.hpp"
#include "resonant/snapshot.hpp"
#include "resonant/torus.hpp"

namespace resonant::harness {

using ojson = nlohmann::ordered_json;

namespace {

TableOptions table_options(const ExperimentConfig& c) {
    TableOptions t;
    t.memory_cap_bytes = c.memory_budget;
    return t;
}

ojson fit_json(const LinearFit& f) { return {{"slope", f.slope}, {"intercept", f.intercept}, {"rms", f.rms_residual}}; }

// ---- resonances -------------------------------------------------------------

ojson cmd_resonances(const ExperimentConfig& c, ArtifactSink& out) {
    const FrequencyWindow w(c.window);
    std::vector<TripleCounts> per(w.size());
    parallel_for(w.size(), default_workers(), [&](std::size_t b, std::size_t e, unsigned) {
        for (std::size_t i = b; i < e; ++i) per[i] = count_triples(w.mode(i), w);
    });
    Csv csv(out.hash(), {"jx", "jy", "total", "trivial", "nontrivial"});
    TripleCounts sum;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const ModeIndex j = w.mode(i);
        csv.row(static_cast<long long>(j.x), static_cast<long long>(j.y), per[i].total, per[i].trivial,
                per[i].nontrivial);
        sum.total += per[i].total;
        sum.trivial += per[i].trivial;
        sum.nontrivial += per[i].nontrivial;
    }
    out.write_text("resonances.csv", csv.str());
    const TripleCounts& o = per[w.index({0, 0})];
    const std::uint64_t bytes = sum.total * sizeof(PackedTriple);
    ojson s;
    s["K"] = c.window;
    s["modes"] = w.size();
    s["total"] = sum.total;
    s["trivial"] = sum.trivial;
    s["nontrivial"] = sum.nontrivial;
    s["origin"] = {{"total", o.total}, {"trivial", o.trivial}, {"nontrivial", o.nontrivial}};
    s["table_bytes"] = bytes;
    s["table_fits_budget"] = bytes <= c.memory_budget && w.size() <= 65535;
    out.write_json("resonances.json", s);
    return s;
}

// ---- nonlin -----------------------------------------------------------------

ojson cmd_nonlin(const ExperimentConfig& c, ArtifactSink& out) {
    const FrequencyWindow w(c.window);
    CounterRng rng(c.seed, "nonlin", 0);
    const CoefSequence a = random_sequence(w, rng);
    SpectralOptions so;
    so.budget = static_cast<double>(c.quadrature_budget);
    const CoefSequence Fs = apply_nonlinearity_spectral(a, so);
    std::optional<CoefSequence> Fd;
    std::string direct_status = "computed";
    try {
        Fd = apply_nonlinearity_direct(a, build_table(w, table_options(c)));
    } catch (const CapacityError& e) {
        direct_status = std::string("skipped: ") + e.what();
    }
    Csv csv(out.hash(), {"jx", "jy", "a_re", "a_im", "F_re", "F_im"});
    for (std::size_t i = 0; i < w.size(); ++i) {
        const ModeIndex j = w.mode(i);
        const cplx F = Fd ? (*Fd)[i] : Fs[i];
        csv.row(static_cast<long long>(j.x), static_cast<long long>(j.y), a[i].real(), a[i].imag(), F.real(),
                F.imag());
    }
    out.write_text("nonlin.csv", csv.str());
    ojson s;
    s["K"] = c.window;
    s["norm_l2_a"] = norm_hs(a, 0.0);
    s["norm_l2_F"] = norm_hs(Fs, 0.0);
    s["spectral_grid"] = spectral_sizes(c.window).G;
    s["spectral_times"] = spectral_sizes(c.window).M;
    s["direct"] = direct_status;
    if (Fd) {
        double num = 0, den = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            num += std::norm(Fs[i] - (*Fd)[i]);
            den += std::norm((*Fd)[i]);
        }
        s["spectral_vs_direct_rel_l2"] = den > 0 ? std::sqrt(num / den) : 0.0;
    }
    out.write_json("nonlin.json", s);
    return s;
}

// ---- identities -------------------------------------------------------------

FieldState identity_state(const BoxGrid& g, const FrequencyWindow& w, CounterRng& rng) {
    FieldState s(g, w);
    for (std::size_t i = 0; i < s.modes(); ++i)
        add_gaussian(s, w.mode(i), 0.3 * rng.complex_normal(), rng.uniform(0.8, 1.5),
                     {rng.uniform(-2, 2), rng.uniform(-2, 2)}, {rng.uniform(-1, 1), rng.uniform(-1, 1)});
    return s;
}

ojson cmd_identities(const ExperimentConfig& c, ArtifactSink& out) {
    const FrequencyWindow w(c.window);
    const ResonantTable table = build_table(w, table_options(c));
    Csv csv(out.hash(), {"trial", "h1_norm", "im_alpha0", "im_alpha1", "im_alpha_half"});
    double m0 = 0, m1 = 0;
    for (int t = 0; t < c.trials; ++t) {
        CounterRng rng(c.seed, "identities/sequence", static_cast<std::uint64_t>(t));
        const CoefSequence a = random_sequence(w, rng);
        const double h4 = std::pow(norm_hs(a, 1.0), 4);
        const double i0 = std::fabs(weighted_quartic_form(a, 0.0, table).imag()) / h4;
        const double i1 = std::fabs(weighted_quartic_form(a, 1.0, table).imag()) / h4;
        const double ih = std::fabs(weighted_quartic_form(a, 0.5, table).imag()) / h4;
        m0 = std::max(m0, i0);
        m1 = std::max(m1, i1);
        csv.row(t, norm_hs(a, 1.0), i0, i1, ih);
    }
    out.write_text("identities.csv", csv.str());

    // Four corners of the unit square with one rotated phase.
    const FrequencyWindow ww(std::max(c.window, 1));
    const CoefSequence wit(ww, {{{0, 0}, 1.0}, {{1, 0}, cplx{0, 1}}, {{1, 1}, 1.0}, {{0, 1}, 1.0}});
    const cplx q = weighted_quartic_form(wit, 0.5, ww == w ? table : build_table(ww, table_options(c)));

    // Projected identities on a small box with a K = 1 window.
    const BoxGrid g{16.0, 32};
    const FrequencyWindow fw(1);
    const ResonantTable ft = build_table(fw);
    const int draws = std::min(c.trials, 20);
    double o2 = 0, o3 = 0;
    int applicable = 0;
    for (int t = 0; t < draws; ++t) {
        CounterRng rng(c.seed, "identities/field", static_cast<std::uint64_t>(t));
        const FieldState s = identity_state(g, fw, rng);
        const Vec2 xi0{g.dk() * (static_cast<double>(rng.below(7)) - 3), g.dk() * (static_cast<double>(rng.below(7)) - 3)};
        const int l2 = 5 + static_cast<int>(rng.below(3));
        const auto r = observation_residuals(s, xi0, l2, ft);
        if (!r.applicable) continue;
        ++applicable;
        o2 = std::max(o2, r.obs2_max);
        o3 = std::max(o3, r.obs3_max);
    }

    ojson s;
    s["K"] = c.window;
    s["trials"] = c.trials;
    s["max_im_alpha0"] = m0;
    s["max_im_alpha1"] = m1;
    s["witness_alpha_half"] = {{"re", q.real()}, {"im", q.imag()}, {"abs_im", std::fabs(q.imag())}};
    s["observations"] = {{"draws", draws}, {"applicable", applicable}, {"obs2_max", o2}, {"obs3_max", o3}};
    out.write_json("identities.json", s);
    return s;
}

// ---- estimates --------------------------------------------------------------

ojson cmd_estimates(const ExperimentConfig& c, ArtifactSink& out) {
    CampaignOptions o;
    o.seed = c.seed;
    o.trials = c.trials;
    o.table = table_options(c);
    const EstimateCampaign camp = estimates_campaign(c.windows, c.beta, o);
    Csv csv(out.hash(), {"K", "beta", "r_l2", "r_h1", "r_fail", "trial_key"});
    for (const auto& r : camp.rows) csv.row(r.K, r.beta, r.r_l2, r.r_h1, r.r_fail, static_cast<unsigned long long>(r.seed));
    out.write_text("estimates.csv", csv.str());

    SpectralOptions so;
    so.budget = static_cast<double>(c.quadrature_budget);
    const FailureScan scan = failure_scan(c.windows, so);
    Csv fcsv(out.hash(), {"K", "r_fail"});
    for (const auto& p : scan.series) fcsv.row(p.K, p.r_fail);
    out.write_text("failure.csv", fcsv.str());

    ojson s;
    ojson sum = ojson::array();
    for (const auto& r : camp.summary)
        sum.push_back({{"K", r.K},
                       {"beta", r.beta},
                       {"max_r_l2", r.max_r_l2},
                       {"max_r_h1", r.max_r_h1},
                       {"max_interp_l2", r.max_interp_l2},
                       {"max_interp_h1", r.max_interp_h1}});
    // Per beta: spread of the maxima across windows. A spread near 1 means the
    // constants look bounded; growth marks where boundedness degrades.
    ojson spread = ojson::array();
    for (double b : c.beta) {
        double lo2 = INFINITY, hi2 = 0, loh = INFINITY, hih = 0;
        for (const auto& r : camp.summary) {
            if (r.beta != b) continue;
            lo2 = std::min(lo2, r.max_r_l2);
            hi2 = std::max(hi2, r.max_r_l2);
            loh = std::min(loh, r.max_r_h1);
            hih = std::max(hih, r.max_r_h1);
        }
        const double v2 = hi2 / lo2, vh = hih / loh;
        spread.push_back({{"beta", b}, {"r_l2_spread", v2}, {"r_h1_spread", vh}, {"within_factor_2", v2 < 2 && vh < 2}});
    }
    s["windows"] = c.windows;
    s["trials"] = c.trials;
    s["summary"] = sum;
    s["spread_across_windows"] = spread;
    ojson fs = ojson::array();
    for (const auto& p : scan.series) fs.push_back({{"K", p.K}, {"r_fail", p.r_fail}});
    s["failure"] = {{"series", fs}};
    if (scan.fitted) {
        s["failure"]["power_fit"] = fit_json(scan.power);
        s["failure"]["log_fit"] = fit_json(scan.log);
    }
    out.write_json("estimates.json", s);
    return s;
}

// ---- strichartz -------------------------------------------------------------

ojson stats_json(const RatioStats& r) {
    return {{"N", r.N}, {"N2", r.N2}, {"max", r.max}, {"mean", r.mean}, {"min", r.min}};
}

ojson cmd_strichartz(const ExperimentConfig& c, ArtifactSink& out) {
    StrichartzOptions o;
    o.budget = c.quadrature_budget;
    const L4Campaign l4 = strichartz_l4_measure(c.windows, c.trials, c.seed, o);
    Csv csv(out.hash(), {"N", "trial", "ratio"});
    for (const auto& s : l4.series)
        for (std::size_t t = 0; t < s.ratios.size(); ++t) csv.row(s.N, static_cast<unsigned long long>(t), s.ratios[t]);
    out.write_text("strichartz_l4.csv", csv.str());

    Csv bcsv(out.hash(), {"N1", "N2", "trial", "ratio"});
    ojson bil = ojson::array();
    std::vector<double> bmax;
    for (int N1 : c.bilinear_N1) {
        const RatioStats r = bilinear_measure(N1, c.bilinear_N2, c.trials, c.seed, o);
        for (std::size_t t = 0; t < r.ratios.size(); ++t) bcsv.row(N1, c.bilinear_N2, static_cast<unsigned long long>(t), r.ratios[t]);
        bil.push_back(stats_json(r));
        bmax.push_back(r.max);
    }
    out.write_text("strichartz_bilinear.csv", bcsv.str());

    ojson s;
    ojson series = ojson::array();
    for (const auto& r : l4.series) series.push_back(stats_json(r));
    s["l4"] = {{"series", series}};
    if (l4.fitted) {
        s["l4"]["max_fit"] = fit_json(l4.max_fit);
        s["l4"]["mean_fit"] = fit_json(l4.mean_fit);
    }
    s["bilinear"] = {{"series", bil}};
    if (!bmax.empty())
        s["bilinear"]["max_spread"] = *std::max_element(bmax.begin(), bmax.end()) / *std::min_element(bmax.begin(), bmax.end());
    out.write_json("strichartz.json", s);
    return s;
}

// ---- simulate / morawetz ----------------------------------------------------

BundledConfig prepared(const ExperimentConfig& c, const std::string& name) {
    BundledConfig b = bundled_config(name, BoxGrid{c.grid_L, c.grid_N}, c.window);
    if (c.dt) b.sim.dt = *c.dt;
    if (c.t_end) b.sim.t_end = *c.t_end;
    if (c.diagnostics_stride) b.sim.diagnostics_stride = *c.diagnostics_stride;
    if (c.snapshot_stride) b.sim.snapshot_stride = *c.snapshot_stride;
    b.sim.morawetz_grid = std::gcd(b.sim.morawetz_grid, c.grid_N);
    if (b.sim.morawetz_grid < 2) b.sim.morawetz_grid = c.grid_N;
    return b;
}

std::string diagnostics_csv(const Trajectory& tr, const std::string& hash) {
    Csv csv(hash, {"t", "mass0", "mass1", "momx", "momy", "energy", "l4_l2_accum", "l4_h1_accum", "boundary_frac", "M0",
                   "M2", "cauchy"});
    for (const auto& r : tr.records)
        csv.row(r.t, r.mass0, r.mass1, r.momentum[0], r.momentum[1], r.energy, r.l4_l2_accum, r.l4_h1_accum,
                r.boundary_frac, r.morawetz_M0, r.morawetz_M2, r.cauchy);
    return csv.str();
}

ojson drift_json(const Trajectory& tr) {
    const auto& r0 = tr.records.front();
    double d0 = 0, d1 = 0, dp = 0, de = 0;
    for (const auto& r : tr.records) {
        if (r0.mass0 > 0) {
            d0 = std::max(d0, std::fabs(r.mass0 - r0.mass0) / r0.mass0);
            dp = std::max(dp, std::max(std::fabs(r.momentum[0] - r0.momentum[0]), std::fabs(r.momentum[1] - r0.momentum[1])) /
                                  r0.mass0);
        }
        if (r0.mass1 > 0) d1 = std::max(d1, std::fabs(r.mass1 - r0.mass1) / r0.mass1);
        if (r0.energy != 0) de = std::max(de, std::fabs(r.energy - r0.energy) / std::fabs(r0.energy));
    }
    return {{"mass0", d0}, {"mass1", d1}, {"momentum", dp}, {"energy", de}};
}

std::string snap_name(std::size_t k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snapshots/snap_%04zu.rsns", k);
    return buf;
}

void write_snap(ArtifactSink& out, const std::string& name, const FieldState& s) {
    std::filesystem::create_directories((out.dir() / name).parent_path());
    write_snapshot(out.dir() / name, s, SnapshotMeta{out.hash()});
    out.add_file(name);
    out.add_file(name + ".json");
}

ojson cmd_simulate(const ExperimentConfig& c, ArtifactSink& out) {
    const BundledConfig b = prepared(c, c.initial);
    const Trajectory tr = evolve(b.initial, b.sim);
    out.write_text("diagnostics.csv", diagnostics_csv(tr, out.hash()));
    if (c.write_snapshots == "all")
        for (std::size_t k = 0; k < tr.snapshots.size(); ++k) write_snap(out, snap_name(k), tr.state(k));
    if (c.write_snapshots != "none") write_snap(out, "snapshots/final.rsns", tr.final_state);

    ojson s;
    s["initial"] = c.initial;
    s["dt"] = b.sim.dt;
    s["t_end"] = b.sim.t_end;
    s["records"] = tr.records.size();
    s["snapshots_in_memory"] = tr.snapshots.size();
    s["relative_drift"] = drift_json(tr);
    ojson warn = ojson::array();
    for (const auto& w : tr.warnings) warn.push_back({{"t", w.t}, {"boundary_frac", w.boundary_frac}, {"message", w.message}});
    s["warnings"] = warn;
    if (tr.snapshots.size() >= 3) {
        const ScatteringReport rep = scattering_diagnostic(tr);
        s["scattering"] = {{"l4_tail_fraction", rep.l4_tail_fraction},
                           {"l4_tail_fraction_valid", rep.l4_tail_fraction_valid},
                           {"valid_until", rep.valid_until},
                           {"last_cauchy", rep.cauchy.back()}};
        Csv csv(out.hash(), {"t", "cauchy"});
        for (std::size_t k = 0; k < rep.cauchy.size(); ++k) csv.row(rep.times[k], rep.cauchy[k]);
        out.write_text("cauchy.csv", csv.str());
    }
    out.write_json("simulate.json", s);
    return s;
}

ojson cmd_morawetz(const ExperimentConfig& c, ArtifactSink& out) {
    ojson runs = ojson::array();
    Csv csv(out.hash(), {"config", "a", "lhs", "sup_M", "ratio"});
    double worst = 0;
    for (const auto& name : c.morawetz_configs) {
        BundledConfig b = prepared(c, name);
        if (b.sim.snapshot_stride == 0) b.sim.snapshot_stride = 1;
        const Trajectory tr = evolve(b.initial, b.sim);
        ojson r;
        r["config"] = name;
        r["valid_until"] = tr.first_warning_time().value_or(tr.records.back().t);
        for (int a : {0, 2}) {
            double sup = 0;
            for (const auto& rec : tr.records) sup = std::max(sup, std::fabs(a == 0 ? rec.morawetz_M0 : rec.morawetz_M2));
            const double lhs = morawetz_lhs(tr, a);
            const double ratio = sup > 0 ? lhs / sup : (lhs > 0 ? INFINITY : 0.0);
            worst = std::max(worst, ratio);
            r["a" + std::to_string(a)] = {{"lhs", lhs}, {"sup_M", sup}, {"ratio", ratio}};
            csv.row(name, a, lhs, sup, ratio);
        }
        runs.push_back(r);
    }
    out.write_text("morawetz.csv", csv.str());
    ojson s;
    s["runs"] = runs;
    s["max_ratio"] = worst;
    out.write_json("morawetz.json", s);
    return s;
}

}  // namespace

RunResult run(const ExperimentConfig& raw) {
    const ExperimentConfig c = resolve(raw);
    ArtifactSink out(c.output, config_hash(c));
    ojson summary;
    if (c.subcommand == "resonances") summary = cmd_resonances(c, out);
    else if (c.subcommand == "nonlin") summary = cmd_nonlin(c, out);
    else if (c.subcommand == "identities") summary = cmd_identities(c, out);
    else if (c.subcommand == "estimates") summary = cmd_estimates(c, out);
    else if (c.subcommand == "strichartz") summary = cmd_strichartz(c, out);
    else if (c.subcommand == "simulate") summary = cmd_simulate(c, out);
    else if (c.subcommand == "morawetz") summary = cmd_morawetz(c, out);
    RunResult r;
    r.summary = summary;
    r.manifest = out.write_manifest(to_json(c), summary);
    r.message = c.subcommand + " finished; manifest at " + r.manifest.string();
    return r;
}

}  // namespace resonant::harness

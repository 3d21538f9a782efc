#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "resonant/errors.hpp"
#include "resonant/kernel.hpp"
#include "resonant/sequence.hpp"

using namespace resonant;
using namespace std::complex_literals;

namespace {

double rel_l2(const CoefSequence& a, const CoefSequence& b) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return std::sqrt(num / den);
}

oracle::Amp to_map(const CoefSequence& a) {
    oracle::Amp m;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != cplx{}) m[{a.window().mode(i).x, a.window().mode(i).y}] = a[i];
    return m;
}

}  // namespace

TEST_CASE("norm_hs examples") {
    const FrequencyWindow w(4);
    const CoefSequence a(w, {{{3, 4}, 2.0}});
    CHECK(norm_hs(a, 1.0) == doctest::Approx(2.0 * std::sqrt(26.0)).epsilon(1e-15));
    CHECK(norm_hs(a, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
    const CoefSequence b(w, {{{0, 0}, 1.0}, {{1, 0}, 1.0}});
    CHECK(norm_hs(b, 1.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
}

TEST_CASE("norm interpolation inequality") {
    for (std::uint64_t t = 0; t < 50; ++t) {
        CounterRng rng(11, "seq/interp", t);
        const auto a = random_sequence(FrequencyWindow(5), rng);
        for (double beta : {0.1, 0.5, 0.8, 0.9, 0.95}) {
            const double lhs = norm_hs(a, beta);
            const double rhs = std::pow(norm_hs(a, 0.0), 1 - beta) * std::pow(norm_hs(a, 1.0), beta);
            CHECK(lhs <= rhs * (1 + 1e-14));
        }
    }
}

TEST_CASE("direct nonlinearity examples") {
    const FrequencyWindow w(2);
    const ResonantTable table = build_table(w);
    SUBCASE("single mode") {
        const cplx c{0.3, -1.2};
        const auto F = apply_nonlinearity_direct(CoefSequence(w, {{{0, 0}, c}}), table);
        CHECK(std::abs(F.at({0, 0}) - std::norm(c) * c) < 1e-15);
        for (std::size_t i = 0; i < F.size(); ++i)
            if (w.mode(i) != ModeIndex{0, 0}) CHECK(F[i] == cplx{});
    }
    SUBCASE("unit square indicator") {
        const CoefSequence a(w, {{{0, 0}, 1.0}, {{1, 0}, 1.0}, {{0, 1}, 1.0}, {{1, 1}, 1.0}});
        const cplx ref = oracle::F_at(to_map(a), {0, 0}, 2);
        CHECK(ref == cplx{9.0, 0.0});  // frozen from the six-fold loop
        CHECK(apply_nonlinearity_direct(a, table).at({0, 0}) == ref);
    }
    SUBCASE("two-mode law") {
        const cplx ap{0.7, 0.2}, aq{-0.4, 0.9};
        const CoefSequence a(w, {{{-1, 2}, ap}, {{2, 1}, aq}});
        const auto F = apply_nonlinearity_direct(a, table);
        CHECK(std::abs(F.at({-1, 2}) - (std::norm(ap) + 2 * std::norm(aq)) * ap) < 1e-15);
        CHECK(std::abs(F.at({2, 1}) - (std::norm(aq) + 2 * std::norm(ap)) * aq) < 1e-15);
        CHECK(std::abs(oracle::F_at(to_map(a), {-1, 2}, 2) - F.at({-1, 2})) < 1e-15);
    }
    SUBCASE("window mismatch") {
        CHECK_THROWS_AS(apply_nonlinearity_direct(CoefSequence(FrequencyWindow(1)), table), WindowError);
    }
}

TEST_CASE("direct evaluator matches the six-fold oracle on random data") {
    const FrequencyWindow w(2);
    const ResonantTable table = build_table(w);
    CounterRng rng(5, "seq/oracle", 0);
    const auto a = random_sequence(w, rng);
    const auto F = apply_nonlinearity_direct(a, table);
    const auto m = to_map(a);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const ModeIndex j = w.mode(i);
        CHECK(std::abs(F[i] - oracle::F_at(m, {j.x, j.y}, 2)) < 1e-14);
    }
}

TEST_CASE("batched kernel agrees with the canonical evaluator") {
    const FrequencyWindow w(6);
    const ResonantTable table = build_table(w);
    std::vector<CoefSequence> batch;
    for (std::uint64_t t = 0; t < 21; ++t) {
        CounterRng rng(9, "seq/batch", t);
        batch.push_back(t % 2 ? random_sequence(w, rng) : random_decaying_sequence(w, rng));
    }
    const auto Fb = apply_nonlinearity_batch(batch, table, 2);
    for (std::size_t t = 0; t < batch.size(); ++t)
        CHECK(rel_l2(Fb[t], apply_nonlinearity_direct(batch[t], table)) < 1e-14);
}

TEST_CASE("resonant closure is exact for sparse supports") {
    const FrequencyWindow w(3);
    const ResonantTable table = build_table(w);
    const CoefSequence a(w, {{{0, 0}, 1.0}, {{1, 0}, 0.5i}, {{0, 1}, -0.3}, {{1, 1}, 0.2}});
    std::vector<bool> sup(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) sup[i] = a[i] != cplx{};
    const auto closed = resonant_closure(table, sup);
    CHECK(closed == sup);  // three corners of a rectangle fix the fourth
    const auto F = apply_nonlinearity_direct(a, table);
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!closed[i]) CHECK(F[i] == cplx{});
    std::vector<bool> line(w.size());
    line[w.index({0, 0})] = line[w.index({1, 0})] = line[w.index({0, 1})] = true;
    CHECK(resonant_closure(table, line)[w.index({1, 1})]);
}

TEST_CASE("spectral evaluator") {
    SUBCASE("sizes") {
        CHECK(spectral_sizes(0).G == 1);
        CHECK(spectral_sizes(1).G == 5);
        CHECK(spectral_sizes(3).G == 14);
        CHECK(spectral_sizes(4).G == 18);
        CHECK(spectral_sizes(4).M == 129);
        CHECK(spectral_sizes(32).G == 135);
    }
    SUBCASE("single mode") {
        const FrequencyWindow w(2);
        const auto F = apply_nonlinearity_spectral(CoefSequence(w, {{{0, 0}, 1.0}}));
        CHECK(std::abs(F.at({0, 0}) - 1.0) < 1e-14);
        CHECK(norm_hs(F, 0.0) == doctest::Approx(1.0).epsilon(1e-13));
    }
    SUBCASE("random data, K=4") {
        const FrequencyWindow w(4);
        const ResonantTable table = build_table(w);
        for (std::uint64_t t = 0; t < 10; ++t) {
            CounterRng rng(1, "seq/spectral", t);
            const auto a = random_sequence(w, rng);
            CHECK(rel_l2(apply_nonlinearity_spectral(a), apply_nonlinearity_direct(a, table)) < 1e-10);
        }
    }
    SUBCASE("two-mode law") {
        const FrequencyWindow w(2);
        const cplx ap{0.6, -0.1}, aq{0.2, 0.8};
        const auto F = apply_nonlinearity_spectral(CoefSequence(w, {{{0, 0}, ap}, {{2, 1}, aq}}));
        CHECK(std::abs(F.at({0, 0}) - (std::norm(ap) + 2 * std::norm(aq)) * ap) < 1e-12);
        CHECK(std::abs(F.at({2, 1}) - (std::norm(aq) + 2 * std::norm(ap)) * aq) < 1e-12);
    }
    SUBCASE("result does not depend on worker count") {
        const FrequencyWindow w(3);
        CounterRng rng(2, "seq/spectral/workers", 0);
        const auto a = random_sequence(w, rng);
        SpectralOptions o1, o3;
        o1.workers = 1;
        o3.workers = 3;
        const auto F1 = apply_nonlinearity_spectral(a, o1), F3 = apply_nonlinearity_spectral(a, o3);
        CHECK(F1.values() == F3.values());
    }
    SUBCASE("budget") {
        SpectralOptions o;
        o.budget = 1000;
        CHECK_THROWS_AS(apply_nonlinearity_spectral(CoefSequence(FrequencyWindow(4)), o), CapacityError);
    }
}

TEST_CASE("weighted quartic form symmetries") {
    const FrequencyWindow w(4);
    const ResonantTable table = build_table(w);
    for (std::uint64_t t = 0; t < 20; ++t) {
        CounterRng rng(4, "seq/quartic", t);
        const auto a = random_sequence(w, rng);
        const double h1 = norm_hs(a, 1.0);
        CHECK(std::fabs(weighted_quartic_form(a, 0.0, table).imag()) <= 1e-12 * std::pow(h1, 4));
        CHECK(std::fabs(weighted_quartic_form(a, 1.0, table).imag()) <= 1e-12 * std::pow(h1, 4));
    }
}

TEST_CASE("broken symmetry witness at alpha = 1/2") {
    const FrequencyWindow w(1);
    const ResonantTable table = build_table(w);
    const CoefSequence a(w, {{{0, 0}, 1.0}, {{1, 0}, 1i}, {{1, 1}, 1.0}, {{0, 1}, 1.0}});
    // Independent value: sum over the six-fold loop of <j> a_j conj(a1) a2 conj(a3).
    const auto m = to_map(a);
    cplx ref{};
    for (auto& [key, aj] : m) {
        const oracle::P j{key.first, key.second};
        ref += std::sqrt(1.0 + oracle::n2(j)) * aj * std::conj(oracle::F_at(m, j, 1));
    }
    const cplx q = weighted_quartic_form(a, 0.5, table);
    MESSAGE("alpha=1/2 witness: " << q);
    CHECK(std::abs(q - ref) < 1e-13);
    CHECK(std::fabs(q.imag()) >= 1e-3);
}

TEST_CASE("estimate ratios") {
    const FrequencyWindow w(3);
    const ResonantTable table = build_table(w);
    const auto r = estimate_ratios(CoefSequence(w, {{{0, 0}, 1.0}}), 0.9, table);
    CHECK(r.applicable);
    CHECK(r.r_l2 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.r_h1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.r_fail == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(estimate_ratios(CoefSequence(w), 0.9, table), ConstraintError);
    CHECK_THROWS_AS(estimate_ratios(CoefSequence(w, {{{0, 0}, 1.0}}), 1.5, table), ConstraintError);
    const auto z = ratios_from(CoefSequence(w), CoefSequence(w), 0.9);
    CHECK_FALSE(z.applicable);
    CHECK(z.r_l2 == 0.0);
}

TEST_CASE("sequence flow conservation") {
    const FrequencyWindow w(2);
    const ResonantTable table = build_table(w);
    CounterRng rng(8, "seq/flow", 0);
    const auto a0 = random_sequence(w, rng);
    const auto a1 = sequence_flow(a0, table, 0.5, 400);
    auto momentum = [&](const CoefSequence& a) {
        double px = 0, py = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            px += w.mode(i).x * std::norm(a[i]);
            py += w.mode(i).y * std::norm(a[i]);
        }
        return std::pair{px, py};
    };
    auto grad = [&](const CoefSequence& a) {
        double s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s += w.mode(i).norm2() * std::norm(a[i]);
        return s;
    };
    CHECK(norm_hs(a1, 0.0) == doctest::Approx(norm_hs(a0, 0.0)).epsilon(1e-10));
    CHECK(grad(a1) == doctest::Approx(grad(a0)).epsilon(1e-10));
    CHECK(momentum(a1).first == doctest::Approx(momentum(a0).first).epsilon(1e-9));
    CHECK(momentum(a1).second == doctest::Approx(momentum(a0).second).epsilon(1e-9));
    const double q0 = weighted_quartic_form(a0, 0.0, table).real();
    const double q1 = weighted_quartic_form(a1, 0.0, table).real();
    CHECK(q1 == doctest::Approx(q0).epsilon(1e-10));
    // The data must actually move for the check to mean anything.
    CHECK(rel_l2(a1, a0) > 1e-2);
}

TEST_CASE("failure scan") {
    const auto s0 = failure_scan({0});
    CHECK(s0.series.at(0).r_fail == doctest::Approx(1.0).epsilon(1e-14));
    const auto s = failure_scan({1, 2, 4, 8});
    for (std::size_t k = 1; k < s.series.size(); ++k) CHECK(s.series[k].r_fail > s.series[k - 1].r_fail);
    CHECK(s.fitted);
    MESSAGE("power exponent " << s.power.slope << ", log slope " << s.log.slope);
    CHECK_THROWS_AS(failure_scan({8, 4}), ConstraintError);
}

TEST_CASE("estimates campaign is deterministic") {
    CampaignOptions o;
    o.seed = 3;
    o.trials = 20;
    o.batch = 7;
    const auto a = estimates_campaign({2, 4}, {0.8, 1.0}, o);
    o.workers = 3;
    const auto b = estimates_campaign({2, 4}, {0.8, 1.0}, o);
    REQUIRE(a.rows.size() == 2 * 2 * 20);
    for (std::size_t k = 0; k < a.rows.size(); ++k) {
        CHECK(a.rows[k].r_l2 == b.rows[k].r_l2);
        CHECK(a.rows[k].seed == b.rows[k].seed);
    }
}

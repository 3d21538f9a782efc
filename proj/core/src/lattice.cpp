#include "resonant/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <string>

#include "resonant/errors.hpp"
#include "resonant/parallel.hpp"

namespace resonant {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

// Narrow [lo, hi] to the m with -K <= c + m*e <= K.
void clip(std::int64_t c, std::int64_t e, std::int64_t K, std::int64_t& lo, std::int64_t& hi) {
    if (e == 0) return;
    std::int64_t a = -K - c, b = K - c;
    if (e > 0) {
        lo = std::max(lo, ceil_div(a, e));
        hi = std::min(hi, floor_div(b, e));
    } else {
        lo = std::max(lo, ceil_div(b, e));
        hi = std::min(hi, floor_div(a, e));
    }
}

// Primitive direction perpendicular to p, oriented so that increasing m walks
// the line in lexicographic order.
ModeIndex perpendicular(ModeIndex p) {
    const std::int64_t g = std::gcd(p.x, p.y);
    ModeIndex e{-p.y / g, p.x / g};
    if (e.x < 0 || (e.x == 0 && e.y < 0)) e = ModeIndex{-e.x, -e.y};
    return e;
}

struct LineRange {
    ModeIndex e;
    std::int64_t lo, hi;
};

LineRange line_range(ModeIndex j, ModeIndex j1, std::int64_t K) {
    const ModeIndex e = perpendicular(j1 - j);
    std::int64_t lo = INT64_MIN / 4, hi = INT64_MAX / 4;
    clip(j1.x, e.x, K, lo, hi);
    clip(j1.y, e.y, K, lo, hi);
    clip(j.x, e.x, K, lo, hi);
    clip(j.y, e.y, K, lo, hi);
    return {e, lo, hi};
}

void require_member(ModeIndex j, const FrequencyWindow& w) {
    if (!w.contains(j)) {
        throw WindowError("mode (" + std::to_string(j.x) + "," + std::to_string(j.y) +
                          ") outside window K=" + std::to_string(w.K()));
    }
}

// Calls emit(j1, j2, kind) in canonical order.
template <class Emit>
void walk(ModeIndex j, const FrequencyWindow& w, Emit&& emit) {
    const std::int64_t K = w.K();
    for (std::int64_t x1 = -K; x1 <= K; ++x1) {
        for (std::int64_t y1 = -K; y1 <= K; ++y1) {
            const ModeIndex j1{x1, y1};
            if (j1 == j) {
                for (std::int64_t x2 = -K; x2 <= K; ++x2)
                    for (std::int64_t y2 = -K; y2 <= K; ++y2) emit(j1, ModeIndex{x2, y2}, TripleKind::trivial_j1);
                continue;
            }
            const LineRange r = line_range(j, j1, K);
            for (std::int64_t m = r.lo; m <= r.hi; ++m)
                emit(j1, j1 + m * r.e, m == 0 ? TripleKind::trivial_j3 : TripleKind::nontrivial);
        }
    }
}

}  // namespace

std::ostream& operator<<(std::ostream& os, ModeIndex j) { return os << '(' << j.x << ',' << j.y << ')'; }

FrequencyWindow::FrequencyWindow(int K) : K_(K) {
    if (K < 0) throw ConstraintError("window K must be non-negative, got " + std::to_string(K));
    if (K > (1 << 30)) throw ConstraintError("window K exceeds the overflow-safe range 2^30");
}

std::size_t FrequencyWindow::checked_index(ModeIndex j) const {
    require_member(j, *this);
    return index(j);
}

const char* to_string(TripleKind k) noexcept {
    switch (k) {
        case TripleKind::trivial_j1: return "trivial-j1";
        case TripleKind::trivial_j3: return "trivial-j3";
        case TripleKind::nontrivial: return "nontrivial";
    }
    return "?";
}

bool canonical_less(const ResonantTriple& a, const ResonantTriple& b) noexcept {
    if (a.j1 != b.j1) return a.j1 < b.j1;
    return a.j2 < b.j2;
}

bool is_resonant(ModeIndex j, ModeIndex j1, ModeIndex j2, ModeIndex j3) noexcept {
    return j1 - j2 + j3 == j && j1.norm2() - j2.norm2() + j3.norm2() == j.norm2();
}

TripleKind classify(ModeIndex j, ModeIndex j1, ModeIndex j3) noexcept {
    if (j1 == j) return TripleKind::trivial_j1;
    if (j3 == j) return TripleKind::trivial_j3;
    return TripleKind::nontrivial;
}

std::vector<ResonantTriple> enumerate_triples_oracle(ModeIndex j, const FrequencyWindow& w) {
    require_member(j, w);
    std::vector<ResonantTriple> out;
    const std::int64_t K = w.K();
    for (std::int64_t x1 = -K; x1 <= K; ++x1)
        for (std::int64_t y1 = -K; y1 <= K; ++y1)
            for (std::int64_t x2 = -K; x2 <= K; ++x2)
                for (std::int64_t y2 = -K; y2 <= K; ++y2) {
                    const ModeIndex j1{x1, y1}, j2{x2, y2};
                    const ModeIndex j3 = j - j1 + j2;
                    if (!w.contains(j3) || !is_resonant(j, j1, j2, j3)) continue;
                    out.push_back({j1, j2, j3, classify(j, j1, j3)});
                }
    return out;
}

std::vector<ResonantTriple> enumerate_triples(ModeIndex j, const FrequencyWindow& w) {
    require_member(j, w);
    std::vector<ResonantTriple> out;
    walk(j, w, [&](ModeIndex j1, ModeIndex j2, TripleKind k) { out.push_back({j1, j2, j - j1 + j2, k}); });
    return out;
}

TripleCounts count_triples(ModeIndex j, const FrequencyWindow& w) {
    require_member(j, w);
    const std::int64_t K = w.K();
    TripleCounts c;
    c.trivial = 2 * static_cast<std::uint64_t>(w.size()) - 1;
    for (std::int64_t x1 = -K; x1 <= K; ++x1)
        for (std::int64_t y1 = -K; y1 <= K; ++y1) {
            const ModeIndex j1{x1, y1};
            if (j1 == j) continue;
            const LineRange r = line_range(j, j1, K);
            c.nontrivial += static_cast<std::uint64_t>(r.hi - r.lo);
        }
    c.total = c.trivial + c.nontrivial;
    return c;
}

TripleCounts count_window(const FrequencyWindow& w, unsigned workers) {
    const std::size_t n = w.size();
    std::vector<TripleCounts> per(n);
    parallel_for(n, workers, [&](std::size_t b, std::size_t e, unsigned) {
        for (std::size_t i = b; i < e; ++i) per[i] = count_triples(w.mode(i), w);
    });
    TripleCounts c;
    for (const auto& p : per) {
        c.total += p.total;
        c.trivial += p.trivial;
        c.nontrivial += p.nontrivial;
    }
    return c;
}

std::vector<ResonantTriple> ResonantTable::triples(ModeIndex j) const {
    const std::size_t i = window_.checked_index(j);
    std::vector<ResonantTriple> out;
    out.reserve(size(i));
    for (PackedTriple p : packed(i)) {
        const ModeIndex j1 = window_.mode(p.i1), j2 = window_.mode(p.i2);
        out.push_back({j1, j2, window_.mode(i3(i, p)), kind(i, p)});
    }
    return out;
}

std::uint64_t ResonantTable::bytes() const noexcept {
    return triples_.size() * sizeof(PackedTriple) + offsets_.size() * sizeof(std::uint64_t);
}

bool operator==(const ResonantTable& a, const ResonantTable& b) noexcept {
    if (!(a.window_ == b.window_) || !(a.counts_ == b.counts_) || a.offsets_ != b.offsets_) return false;
    return std::equal(a.triples_.begin(), a.triples_.end(), b.triples_.begin(), b.triples_.end(),
                      [](PackedTriple x, PackedTriple y) { return x.i1 == y.i1 && x.i2 == y.i2; });
}

ResonantTable build_table(const FrequencyWindow& w, const TableOptions& opt) {
    if (w.K() > opt.max_K)
        throw CapacityError("window", "K=" + std::to_string(w.K()) + " above configured maximum " +
                                          std::to_string(opt.max_K));
    if (w.size() > 65535)
        throw CapacityError("window", "K=" + std::to_string(w.K()) + " exceeds the 16-bit packed index range");

    const std::size_t n = w.size();
    std::vector<TripleCounts> per(n);
    parallel_for(n, opt.workers, [&](std::size_t b, std::size_t e, unsigned) {
        for (std::size_t i = b; i < e; ++i) per[i] = count_triples(w.mode(i), w);
    });

    ResonantTable t;
    t.window_ = w;
    t.offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        t.offsets_[i + 1] = t.offsets_[i] + per[i].total;
        t.counts_.total += per[i].total;
        t.counts_.trivial += per[i].trivial;
        t.counts_.nontrivial += per[i].nontrivial;
    }
    const std::uint64_t need = t.counts_.total * sizeof(PackedTriple) + (n + 1) * sizeof(std::uint64_t);
    if (need > opt.memory_cap_bytes)
        throw CapacityError("memory", "table needs " + std::to_string(need) + " bytes, cap is " +
                                          std::to_string(opt.memory_cap_bytes));

    t.triples_.resize(t.counts_.total);
    parallel_for(n, opt.workers, [&](std::size_t b, std::size_t e, unsigned) {
        for (std::size_t i = b; i < e; ++i) {
            PackedTriple* out = t.triples_.data() + t.offsets_[i];
            walk(w.mode(i), w, [&](ModeIndex j1, ModeIndex j2, TripleKind) {
                *out++ = {static_cast<std::uint16_t>(w.index(j1)), static_cast<std::uint16_t>(w.index(j2))};
            });
        }
    });
    return t;
}

}  // namespace resonant

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace resonant {

struct ModeIndex {
    std::int64_t x = 0;
    std::int64_t y = 0;

    constexpr std::int64_t norm2() const noexcept { return x * x + y * y; }
    // <j>^2 = 1 + |j|^2
    constexpr double bracket2() const noexcept { return 1.0 + static_cast<double>(norm2()); }

    friend constexpr ModeIndex operator+(ModeIndex a, ModeIndex b) noexcept { return {a.x + b.x, a.y + b.y}; }
    friend constexpr ModeIndex operator-(ModeIndex a, ModeIndex b) noexcept { return {a.x - b.x, a.y - b.y}; }
    friend constexpr ModeIndex operator*(std::int64_t m, ModeIndex a) noexcept { return {m * a.x, m * a.y}; }
    friend constexpr bool operator==(ModeIndex, ModeIndex) noexcept = default;
    friend constexpr auto operator<=>(ModeIndex, ModeIndex) noexcept = default;
};

constexpr std::int64_t dot(ModeIndex a, ModeIndex b) noexcept { return a.x * b.x + a.y * b.y; }

std::ostream& operator<<(std::ostream& os, ModeIndex j);

// The square {-K..K}^2. Linear index is row-major with y outer, x inner.
class FrequencyWindow {
public:
    constexpr FrequencyWindow() = default;
    explicit FrequencyWindow(int K);

    constexpr int K() const noexcept { return K_; }
    constexpr std::int64_t side() const noexcept { return 2 * static_cast<std::int64_t>(K_) + 1; }
    constexpr std::size_t size() const noexcept { return static_cast<std::size_t>(side() * side()); }

    constexpr bool contains(ModeIndex j) const noexcept {
        return j.x >= -K_ && j.x <= K_ && j.y >= -K_ && j.y <= K_;
    }
    constexpr std::size_t index(ModeIndex j) const noexcept {
        return static_cast<std::size_t>((j.y + K_) * side() + (j.x + K_));
    }
    // Throws WindowError when j is outside.
    std::size_t checked_index(ModeIndex j) const;
    constexpr ModeIndex mode(std::size_t i) const noexcept {
        const auto s = side();
        const auto ii = static_cast<std::int64_t>(i);
        return {ii % s - K_, ii / s - K_};
    }

    friend constexpr bool operator==(FrequencyWindow, FrequencyWindow) noexcept = default;

private:
    int K_ = 0;
};

enum class TripleKind : std::uint8_t { trivial_j1, trivial_j3, nontrivial };

const char* to_string(TripleKind k) noexcept;

struct ResonantTriple {
    ModeIndex j1, j2, j3;
    TripleKind kind = TripleKind::nontrivial;

    friend bool operator==(const ResonantTriple&, const ResonantTriple&) = default;
};

// Lexicographic on (j1.x, j1.y, j2.x, j2.y).
bool canonical_less(const ResonantTriple& a, const ResonantTriple& b) noexcept;

bool is_resonant(ModeIndex j, ModeIndex j1, ModeIndex j2, ModeIndex j3) noexcept;

// Kind of a triple already known to be resonant. (j,j,j) counts as trivial_j1.
TripleKind classify(ModeIndex j, ModeIndex j1, ModeIndex j3) noexcept;

// O(K^4) brute force over (j1, j2) in window^2.
std::vector<ResonantTriple> enumerate_triples_oracle(ModeIndex j, const FrequencyWindow& w);

// Walks the perpendicular line through each j1 != j. Same output as the oracle.
std::vector<ResonantTriple> enumerate_triples(ModeIndex j, const FrequencyWindow& w);

struct TripleCounts {
    std::uint64_t total = 0;
    std::uint64_t trivial = 0;
    std::uint64_t nontrivial = 0;

    friend bool operator==(const TripleCounts&, const TripleCounts&) = default;
};

// Exact counts without materializing the list. O(K^2) per j.
TripleCounts count_triples(ModeIndex j, const FrequencyWindow& w);

// Window-index pair; i3 = i - i1 + i2 follows from linearity of the index.
struct PackedTriple {
    std::uint16_t i1;
    std::uint16_t i2;
};

struct TableOptions {
    int max_K = 64;
    std::uint64_t memory_cap_bytes = 2ULL << 30;
    unsigned workers = 0;  // 0: use the process default
};

class ResonantTable {
public:
    ResonantTable() = default;

    const FrequencyWindow& window() const noexcept { return window_; }
    const TripleCounts& counts() const noexcept { return counts_; }

    std::span<const PackedTriple> packed(std::size_t i) const noexcept {
        return {triples_.data() + offsets_[i], triples_.data() + offsets_[i + 1]};
    }
    static constexpr std::size_t i3(std::size_t i, PackedTriple p) noexcept {
        return i - p.i1 + p.i2;
    }
    static constexpr TripleKind kind(std::size_t i, PackedTriple p) noexcept {
        if (p.i1 == i) return TripleKind::trivial_j1;
        if (i3(i, p) == i) return TripleKind::trivial_j3;
        return TripleKind::nontrivial;
    }

    // Materialized canonical list for one j.
    std::vector<ResonantTriple> triples(ModeIndex j) const;
    std::size_t size(std::size_t i) const noexcept { return offsets_[i + 1] - offsets_[i]; }
    std::uint64_t bytes() const noexcept;

    friend bool operator==(const ResonantTable& a, const ResonantTable& b) noexcept;
    friend ResonantTable build_table(const FrequencyWindow& w, const TableOptions& opt);

private:
    FrequencyWindow window_;
    TripleCounts counts_;
    std::vector<std::uint64_t> offsets_;
    std::vector<PackedTriple> triples_;
};

// Capacity errors when K > opt.max_K or the exact storage estimate exceeds
// opt.memory_cap_bytes. Output is identical for any worker count.
ResonantTable build_table(const FrequencyWindow& w, const TableOptions& opt = {});

// Exact total over the window, used for the capacity check.
TripleCounts count_window(const FrequencyWindow& w, unsigned workers = 0);

// ---- lattice circles ------------------------------------------------------

struct Doubled {
    std::int64_t x = 0;
    std::int64_t y = 0;
};

// All p with (2p.x - c.x)^2 + (2p.y - c.y)^2 = radius_sq4, lexicographic.
std::vector<ModeIndex> circle_lattice_points(Doubled center2, std::int64_t radius_sq4);

struct CircleTail {
    double sum = 0.0;
    double bound_ratio = 0.0;
};

// Sum of <p>^{-2 beta} over circle points with |p| >= A, and its ratio to
// A^{1 - 2 beta}. Requires 3/4 < beta <= 1 and A > 0.
CircleTail circle_tail_sum(Doubled center2, std::int64_t radius_sq4, double A, double beta);

}  // namespace resonant

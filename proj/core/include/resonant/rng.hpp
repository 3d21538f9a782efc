#pragma once

#include <complex>
#include <cstdint>
#include <string_view>

namespace resonant {

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t fnv1a64(std::string_view s) noexcept;

// Counter-based generator keyed by (master seed, campaign, trial). Draw k of a
// stream depends only on the key and k, so trials can run in any order.
class CounterRng {
public:
    CounterRng(std::uint64_t master, std::string_view campaign, std::uint64_t trial) noexcept;
    explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

    std::uint64_t next_u64() noexcept;
    double uniform() noexcept;  // [0, 1)
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    double normal() noexcept;
    // Standard complex Gaussian: E|z|^2 = 1.
    std::complex<double> complex_normal() noexcept;
    std::uint64_t below(std::uint64_t n) noexcept;  // uniform in [0, n)

    std::uint64_t key() const noexcept { return key_; }
    std::uint64_t counter() const noexcept { return ctr_; }

private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace resonant

#include "resonant/rng.hpp"

#include <cmath>
#include <numbers>

namespace resonant {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

CounterRng::CounterRng(std::uint64_t master, std::string_view campaign,
                       std::uint64_t trial) noexcept {
    std::uint64_t k = splitmix64(master);
    k = splitmix64(k ^ fnv1a64(campaign));
    k = splitmix64(k ^ splitmix64(trial + 0x632be59bd9b4e019ULL));
    key_ = k;
}

std::uint64_t CounterRng::next_u64() noexcept {
    return splitmix64(key_ ^ splitmix64(ctr_++));
}

double CounterRng::uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t CounterRng::below(std::uint64_t n) noexcept {
    // Lemire's multiply-shift with rejection.
    if (n == 0) return 0;
    for (;;) {
        const unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        const std::uint64_t lo = static_cast<std::uint64_t>(m);
        if (lo >= n || lo >= (-n) % n) return static_cast<std::uint64_t>(m >> 64);
    }
}

double CounterRng::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
}

std::complex<double> CounterRng::complex_normal() noexcept {
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

}  // namespace resonant

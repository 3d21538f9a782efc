#include "resonant/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace resonant {

void* fft_alloc_bytes(std::size_t bytes) {
    void* p = fftw_malloc(bytes == 0 ? 1 : bytes);
    if (!p) throw std::bad_alloc();
    return p;
}

void fft_free_bytes(void* p) noexcept { fftw_free(p); }

namespace {

using Key = std::tuple<int, int, int, int, int>;

struct PlanCache {
    std::mutex mu;
    std::map<Key, fftw_plan> plans;

    ~PlanCache() {
        for (auto& [k, p] : plans) fftw_destroy_plan(p);
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

fftw_plan get_plan(cplx* data, int n0, int n1, int howmany, FftDir dir) {
    auto* d = reinterpret_cast<fftw_complex*>(data);
    const int align = fftw_alignment_of(reinterpret_cast<double*>(d));
    const Key key{n0, n1, howmany, dir == FftDir::forward ? 0 : 1, align};
    auto& c = cache();
    std::lock_guard lock(c.mu);
    if (auto it = c.plans.find(key); it != c.plans.end()) return it->second;

    // Plan on scratch storage with the same alignment so the caller's data is
    // never touched during planning.
    const std::size_t count = static_cast<std::size_t>(n0) * n1 * howmany;
    auto* raw = static_cast<char*>(fftw_malloc(count * sizeof(fftw_complex) + 64));
    auto* scratch = reinterpret_cast<fftw_complex*>(raw + align);
    const int n[2] = {n0, n1};
    const int dist = n0 * n1;
    fftw_plan p = fftw_plan_many_dft(2, n, howmany, scratch, nullptr, 1, dist, scratch, nullptr, 1, dist,
                                     dir == FftDir::forward ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_free(raw);
    c.plans.emplace(key, p);
    return p;
}

}  // namespace

void fft2(cplx* data, int n0, int n1, int howmany, FftDir dir) {
    if (howmany <= 0) return;
    fftw_plan p = get_plan(data, n0, n1, howmany, dir);
    auto* d = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, d, d);
}

int fft_friendly_size(int lo) {
    if (lo <= 1) return 1;
    for (int n = lo;; ++n) {
        int m = n;
        for (int f : {2, 3, 5, 7})
            while (m % f == 0) m /= f;
        if (m == 1) return n;
    }
}

}  // namespace resonant

#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <vector>

namespace resonant {

void* fft_alloc_bytes(std::size_t bytes);
void fft_free_bytes(void* p) noexcept;

// Allocator returning SIMD-aligned storage suitable for the transform backend.
template <class T>
struct FftAllocator {
    using value_type = T;
    FftAllocator() = default;
    template <class U>
    FftAllocator(const FftAllocator<U>&) noexcept {}
    T* allocate(std::size_t n) { return static_cast<T*>(fft_alloc_bytes(n * sizeof(T))); }
    void deallocate(T* p, std::size_t) noexcept { fft_free_bytes(p); }
    template <class U>
    bool operator==(const FftAllocator<U>&) const noexcept { return true; }
};

using cplx = std::complex<double>;
using CVec = std::vector<cplx, FftAllocator<cplx>>;
using RVec = std::vector<double, FftAllocator<double>>;

enum class FftDir { forward, backward };

// In-place unnormalized 2D DFT of `howmany` contiguous n0 x n1 arrays.
// forward uses e^{-2 pi i k n / N}, backward uses e^{+2 pi i k n / N}.
// Plans are cached and built deterministically, so repeated runs give
// identical bits.
void fft2(cplx* data, int n0, int n1, int howmany, FftDir dir);

// Smallest n >= lo of the form 2^a 3^b 5^c 7^d.
int fft_friendly_size(int lo);

}  // namespace resonant

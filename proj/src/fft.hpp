#pragma once

// Thin RAII layer over FFTW's real transforms. Plans are created once per
// size under a lock and executed with the new-array interface, so the
// functions here are safe to call from several threads.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

#include <fftw3.h>

namespace echomark::fft {

struct FftwDeleter {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

using RealBuffer = std::unique_ptr<double[], FftwDeleter>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

RealBuffer alloc_real(std::size_t n);
ComplexBuffer alloc_complex(std::size_t n);

/// Forward transform of n reals into n/2 + 1 bins. `in` is preserved.
void forward(std::size_t n, double* in, fftw_complex* out);

/// Unnormalised inverse of `forward`; `in` is destroyed.
void inverse(std::size_t n, fftw_complex* in, double* out);

/// Smallest m >= n whose only prime factors are 2, 3, 5 and 7.
std::size_t good_size(std::size_t n);

} // namespace echomark::fft

#pragma once

#include <complex>
#include <cstddef>

// Internal FFT entry points. Unitary scaling (1/sqrt(n) in each direction)
// is applied by the callers in operators.cpp, not here.
namespace uq::detail {

enum class FftDir { Forward, Backward };

// Out-of-place 2-D complex DFT, unscaled. in and out may alias.
// Thread-safe: plans are cached per thread, planner calls are serialized.
void fft2(std::size_t height, std::size_t width, const std::complex<double>* in,
          std::complex<double>* out, FftDir dir);

}  // namespace uq::detail

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "uq/grid.hpp"

namespace uq {

/// Fourier-domain subsampling pattern. `keep[i]` marks observed coefficients
/// in unshifted DFT indexing; the zero-frequency entry (0,0) is always kept.
struct SamplingMask {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint8_t> keep;
  double fraction = 0.0;

  std::size_t size() const { return keep.size(); }
  bool kept(std::size_t r, std::size_t c) const { return keep[r * width + c]; }
  std::size_t kept_count() const;
};

/// Convolution kernel. Taps are stored as a small image; the kernel center
/// (floor of each dimension / 2) maps to lag zero.
struct PointSpreadFunction {
  GridImage kernel;
  bool normalized = false;
};

/// Per-pixel forward differences of an image, periodic boundary.
struct GradientField {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> dx;  // horizontal differences
  std::vector<double> dy;  // vertical differences

  GradientField() = default;
  GradientField(std::size_t h, std::size_t w)
      : height(h), width(w), dx(h * w, 0.0), dy(h * w, 0.0) {}

  std::size_t size() const { return dx.size(); }
  bool same_shape(const GradientField& o) const {
    return height == o.height && width == o.width;
  }
};

// ---- Fourier transform (unitary normalization, 1/sqrt(n) both ways) ----

ComplexGrid dft2(const GridImage& img);
ComplexGrid dft2(const ComplexGrid& grid);
ComplexGrid idft2(const ComplexGrid& grid);
/// Real part of the inverse transform (adjoint of dft2 restricted to
/// real-valued images).
GridImage idft2_real(const ComplexGrid& grid);

// ---- Fourier subsampling (tomographic measurement) ----

ComplexGrid fourier_subsample(const GridImage& img, const SamplingMask& mask);
/// Adjoint of fourier_subsample under the real inner product
/// <u, v> = Re(sum conj(u_i) v_i).
GridImage fourier_subsample_adjoint(const ComplexGrid& coeffs,
                                    const SamplingMask& mask);

SamplingMask make_radial_mask(std::size_t height, std::size_t width,
                              std::size_t lines, std::uint64_t seed);
SamplingMask make_uniform_mask(std::size_t height, std::size_t width,
                               double fraction, std::uint64_t seed);

// ---- Circular convolution ----

PointSpreadFunction make_gaussian_psf(std::size_t width);
PointSpreadFunction make_airy_psf(std::size_t width);

/// Kernel spectrum on an height x width grid (kernel center at lag zero),
/// unnormalized DFT of the embedded taps.
ComplexGrid psf_spectrum(const PointSpreadFunction& psf, std::size_t height,
                         std::size_t width);

GridImage convolve(const GridImage& img, const PointSpreadFunction& psf);
GridImage convolve_adjoint(const GridImage& img, const PointSpreadFunction& psf);

// ---- Discrete gradient ----

GradientField grad2(const GridImage& img);
/// Divergence with div2 = -grad2^T, so <grad2(x), u> + <x, div2(u)> = 0.
GridImage div2(const GradientField& field);

double dot(const GradientField& a, const GradientField& b);
double sq_norm(const GradientField& a);

// ---- Operator norm via power iteration ----

/// Abstract linear map on flat real vectors. Complex ranges are viewed as
/// R^{2m} (matching the real inner product used by the adjoint tests).
struct LinearMap {
  std::size_t input_size = 0;
  std::size_t output_size = 0;
  std::function<std::vector<double>(const std::vector<double>&)> forward;
  std::function<std::vector<double>(const std::vector<double>&)> adjoint;
};

/// Largest singular value estimate: power iteration on A^T A with a seeded
/// start vector, reported through the Rayleigh quotient (nondecreasing in
/// the iteration count). Returns 0 for the zero operator.
double operator_norm(const LinearMap& op, int iters, std::uint64_t seed);

LinearMap gradient_map(std::size_t height, std::size_t width);
LinearMap subsample_map(const SamplingMask& mask);
LinearMap convolution_map(const PointSpreadFunction& psf, std::size_t height,
                          std::size_t width);

}  // namespace uq

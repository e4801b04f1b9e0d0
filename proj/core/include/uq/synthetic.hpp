#pragma once

#include <cstdint>

#include "uq/grid.hpp"
#include "uq/operators.hpp"
#include "uq/region.hpp"

namespace uq {

/// Shepp-Logan head phantom (the [0,1]-intensity variant) rendered at
/// size x size. Deterministic.
GridImage make_phantom(std::size_t size);

/// Bounding box of the three small bright spots near the bottom of the
/// phantom (intensity ~0.3 over ~0.2 background): the knockout target.
PixelRect phantom_spot_roi(std::size_t size);

/// n_sources unit impulses at seeded uniform positions, no duplicates.
GridImage make_sparse_scene(std::size_t size, std::size_t n_sources,
                            std::uint64_t seed);

struct SimulatedObservation {
  ComplexGrid fourier;     // tomography path
  GridImage image;         // deconvolution path
  double realized_snr_db = 0.0;
  std::uint64_t seed = 0;
};

/// y = mask o DFT(truth) + w, with circular complex Gaussian noise of
/// std sigma per kept coefficient. sigma may be zero.
SimulatedObservation simulate_tomography(const GridImage& truth,
                                         const SamplingMask& mask, double sigma,
                                         std::uint64_t seed);

/// y = psf * truth + w, real Gaussian noise of std sigma per pixel.
SimulatedObservation simulate_deconvolution(const GridImage& truth,
                                            const PointSpreadFunction& psf,
                                            double sigma, std::uint64_t seed);

/// Noise level that realizes the requested blurred SNR (dB) for a clean
/// blurred image: 10 log10(||clean||^2 / (n sigma^2)) = snr_db.
double sigma_for_snr_db(const GridImage& clean, double snr_db);

}  // namespace uq

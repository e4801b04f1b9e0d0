#include "uq/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "uq/rng.hpp"

namespace uq {

namespace {

struct Ellipse {
  double value;  // additive intensity
  double a, b;   // semi-axes (x, y) before rotation
  double x0, y0;
  double phi_deg;
};

// Head phantom with intensities in [0,1]; the last three entries are the
// small bright spots near the bottom.
constexpr Ellipse kPhantom[] = {
    {1.0, 0.6900, 0.9200, 0.00, 0.0000, 0.0},
    {-0.8, 0.6624, 0.8740, 0.00, -0.0184, 0.0},
    {-0.2, 0.1100, 0.3100, 0.22, 0.0000, -18.0},
    {-0.2, 0.1600, 0.4100, -0.22, 0.0000, 18.0},
    {0.1, 0.2100, 0.2500, 0.00, 0.3500, 0.0},
    {0.1, 0.0460, 0.0460, 0.00, 0.1000, 0.0},
    {0.1, 0.0460, 0.0460, 0.00, -0.1000, 0.0},
    {0.1, 0.0460, 0.0230, -0.08, -0.6050, 0.0},
    {0.1, 0.0230, 0.0230, 0.00, -0.6060, 0.0},
    {0.1, 0.0230, 0.0460, 0.06, -0.6050, 0.0},
};
constexpr std::size_t kSpotFirst = 7;  // index of the first bottom spot

}  // namespace

GridImage make_phantom(std::size_t size) {
  if (size < 32) throw InvalidInputError("make_phantom: size must be >= 32");
  GridImage img(size, size);
  const double half = (static_cast<double>(size) - 1.0) / 2.0;
  for (std::size_t r = 0; r < size; ++r) {
    const double y = (half - static_cast<double>(r)) / half;
    for (std::size_t c = 0; c < size; ++c) {
      const double x = (static_cast<double>(c) - half) / half;
      double v = 0.0;
      for (const auto& e : kPhantom) {
        const double phi = e.phi_deg * std::numbers::pi / 180.0;
        const double dx = x - e.x0, dy = y - e.y0;
        const double xr = std::cos(phi) * dx + std::sin(phi) * dy;
        const double yr = -std::sin(phi) * dx + std::cos(phi) * dy;
        if ((xr * xr) / (e.a * e.a) + (yr * yr) / (e.b * e.b) <= 1.0) {
          v += e.value;
        }
      }
      // the additive composition is nonnegative in exact arithmetic
      img.at(r, c) = std::max(v, 0.0);
    }
  }
  return img;
}

PixelRect phantom_spot_roi(std::size_t size) {
  const double half = (static_cast<double>(size) - 1.0) / 2.0;
  double xmin = 1.0, xmax = -1.0, ymin = 1.0, ymax = -1.0;
  for (std::size_t i = kSpotFirst; i < std::size(kPhantom); ++i) {
    const auto& e = kPhantom[i];
    xmin = std::min(xmin, e.x0 - e.a);
    xmax = std::max(xmax, e.x0 + e.a);
    ymin = std::min(ymin, e.y0 - e.b);
    ymax = std::max(ymax, e.y0 + e.b);
  }
  // Two-pixel margin around the exact bounding box.
  const long c0 = std::lround(xmin * half + half) - 2;
  const long c1 = std::lround(xmax * half + half) + 2;
  const long r0 = std::lround(half - ymax * half) - 2;
  const long r1 = std::lround(half - ymin * half) + 2;
  PixelRect roi;
  roi.x = static_cast<std::size_t>(std::max(c0, 0L));
  roi.y = static_cast<std::size_t>(std::max(r0, 0L));
  roi.w = static_cast<std::size_t>(std::min<long>(c1, static_cast<long>(size) - 1) -
                                   static_cast<long>(roi.x) + 1);
  roi.h = static_cast<std::size_t>(std::min<long>(r1, static_cast<long>(size) - 1) -
                                   static_cast<long>(roi.y) + 1);
  return roi;
}

GridImage make_sparse_scene(std::size_t size, std::size_t n_sources,
                            std::uint64_t seed) {
  if (n_sources >= size * size) {
    throw InvalidInputError("make_sparse_scene: too many sources");
  }
  GridImage img(size, size);
  Rng rng(seed);
  std::set<std::uint64_t> used;
  while (used.size() < n_sources) {
    const std::uint64_t pos = rng.integer(size * size);
    if (used.insert(pos).second) img.data[pos] = 1.0;
  }
  return img;
}

SimulatedObservation simulate_tomography(const GridImage& truth,
                                         const SamplingMask& mask, double sigma,
                                         std::uint64_t seed) {
  if (sigma < 0.0) throw InvalidInputError("simulate_tomography: sigma < 0");
  SimulatedObservation out;
  out.seed = seed;
  out.fourier = fourier_subsample(truth, mask);
  Rng rng(seed);
  double signal_sq = 0.0, noise_sq = 0.0;
  const double comp = sigma / std::numbers::sqrt2;
  for (std::size_t i = 0; i < out.fourier.size(); ++i) {
    if (!mask.keep[i]) continue;
    signal_sq += std::norm(out.fourier.data[i]);
    const std::complex<double> w{comp * rng.normal(), comp * rng.normal()};
    noise_sq += std::norm(w);
    out.fourier.data[i] += w;
  }
  out.realized_snr_db =
      noise_sq > 0.0 ? 10.0 * std::log10(signal_sq / noise_sq)
                     : std::numeric_limits<double>::infinity();
  return out;
}

SimulatedObservation simulate_deconvolution(const GridImage& truth,
                                            const PointSpreadFunction& psf,
                                            double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw InvalidInputError("simulate_deconvolution: sigma < 0");
  SimulatedObservation out;
  out.seed = seed;
  out.image = convolve(truth, psf);
  Rng rng(seed);
  double signal_sq = sq_norm(out.image), noise_sq = 0.0;
  for (auto& v : out.image.data) {
    const double w = sigma * rng.normal();
    noise_sq += w * w;
    v += w;
  }
  out.realized_snr_db =
      noise_sq > 0.0 ? 10.0 * std::log10(signal_sq / noise_sq)
                     : std::numeric_limits<double>::infinity();
  return out;
}

double sigma_for_snr_db(const GridImage& clean, double snr_db) {
  const double power = sq_norm(clean) / static_cast<double>(clean.size());
  return std::sqrt(power / std::pow(10.0, snr_db / 10.0));
}

}  // namespace uq

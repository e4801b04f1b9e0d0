#include "uq/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "uq/rng.hpp"

namespace uq {

namespace {

void require_positive_dims(std::size_t h, std::size_t w, const char* what) {
  if (h == 0 || w == 0) {
    throw InvalidInputError(std::string(what) + ": dimensions must be positive");
  }
}

ComplexGrid to_complex(const GridImage& img) {
  ComplexGrid out(img.height, img.width);
  for (std::size_t i = 0; i < img.size(); ++i) out.data[i] = {img.data[i], 0.0};
  return out;
}

void scale_unitary(ComplexGrid& g) {
  const double s = 1.0 / std::sqrt(static_cast<double>(g.size()));
  for (auto& z : g.data) z *= s;
}

}  // namespace

std::size_t SamplingMask::kept_count() const {
  std::size_t c = 0;
  for (auto k : keep) c += (k != 0);
  return c;
}

ComplexGrid dft2(const GridImage& img) {
  require_positive_dims(img.height, img.width, "dft2");
  if (img.data.size() != img.height * img.width) {
    throw InvalidInputError("dft2: data length does not match dimensions");
  }
  ComplexGrid in = to_complex(img);
  ComplexGrid out(img.height, img.width);
  detail::fft2(img.height, img.width, in.data.data(), out.data.data(),
               detail::FftDir::Forward);
  scale_unitary(out);
  return out;
}

ComplexGrid dft2(const ComplexGrid& grid) {
  require_positive_dims(grid.height, grid.width, "dft2");
  ComplexGrid out(grid.height, grid.width);
  detail::fft2(grid.height, grid.width, grid.data.data(), out.data.data(),
               detail::FftDir::Forward);
  scale_unitary(out);
  return out;
}

ComplexGrid idft2(const ComplexGrid& grid) {
  require_positive_dims(grid.height, grid.width, "idft2");
  ComplexGrid out(grid.height, grid.width);
  detail::fft2(grid.height, grid.width, grid.data.data(), out.data.data(),
               detail::FftDir::Backward);
  scale_unitary(out);
  return out;
}

GridImage idft2_real(const ComplexGrid& grid) {
  ComplexGrid full = idft2(grid);
  GridImage out(grid.height, grid.width);
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] = full.data[i].real();
  return out;
}

ComplexGrid fourier_subsample(const GridImage& img, const SamplingMask& mask) {
  if (mask.height != img.height || mask.width != img.width) {
    throw InvalidInputError("fourier_subsample: mask/image dimension mismatch");
  }
  ComplexGrid spec = dft2(img);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (!mask.keep[i]) spec.data[i] = {0.0, 0.0};
  }
  return spec;
}

GridImage fourier_subsample_adjoint(const ComplexGrid& coeffs,
                                    const SamplingMask& mask) {
  if (mask.height != coeffs.height || mask.width != coeffs.width) {
    throw InvalidInputError(
        "fourier_subsample_adjoint: mask/grid dimension mismatch");
  }
  ComplexGrid masked = coeffs;
  for (std::size_t i = 0; i < masked.size(); ++i) {
    if (!mask.keep[i]) masked.data[i] = {0.0, 0.0};
  }
  return idft2_real(masked);
}

namespace {

// A kept frequency implies its mirror -k is kept. Real images have
// Hermitian spectra, so the pair carries one measurement; symmetry also
// makes the real-valued adjoint an exact inverse on the observed set.
void symmetrize_mask(SamplingMask& mask) {
  const std::size_t h = mask.height, w = mask.width;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t i = r * w + c;
      const std::size_t j = ((h - r) % h) * w + (w - c) % w;
      if (mask.keep[i]) mask.keep[j] = 1;
    }
  }
}

}  // namespace

SamplingMask make_radial_mask(std::size_t height, std::size_t width,
                              std::size_t lines, std::uint64_t seed) {
  require_positive_dims(height, width, "make_radial_mask");
  if (lines == 0) throw InvalidInputError("make_radial_mask: lines must be >= 1");
  SamplingMask mask;
  mask.height = height;
  mask.width = width;
  mask.keep.assign(height * width, 0);

  Rng rng(seed);
  const double angle0 = rng.uniform() * std::numbers::pi;
  const double cy = static_cast<double>(height) / 2.0;
  const double cx = static_cast<double>(width) / 2.0;
  const double rmax = std::hypot(cy, cx);

  // Rasterize each line through the centered k-space origin, then map the
  // centered coordinates back to unshifted DFT indexing.
  for (std::size_t l = 0; l < lines; ++l) {
    const double theta =
        angle0 + std::numbers::pi * static_cast<double>(l) / static_cast<double>(lines);
    const double dy = std::sin(theta), dx = std::cos(theta);
    const int steps = static_cast<int>(std::ceil(rmax)) * 2;
    for (int s = -steps; s <= steps; ++s) {
      const double t = 0.5 * static_cast<double>(s);
      const long r = std::lround(cy + t * dy);
      const long c = std::lround(cx + t * dx);
      if (r < 0 || c < 0 || r >= static_cast<long>(height) ||
          c >= static_cast<long>(width)) {
        continue;
      }
      const std::size_t ru =
          (static_cast<std::size_t>(r) + height - height / 2) % height;
      const std::size_t cu =
          (static_cast<std::size_t>(c) + width - width / 2) % width;
      mask.keep[ru * width + cu] = 1;
    }
  }
  mask.keep[0] = 1;  // DC is always observed
  symmetrize_mask(mask);
  mask.fraction = static_cast<double>(mask.kept_count()) /
                  static_cast<double>(mask.size());
  return mask;
}

SamplingMask make_uniform_mask(std::size_t height, std::size_t width,
                               double fraction, std::uint64_t seed) {
  require_positive_dims(height, width, "make_uniform_mask");
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw InvalidInputError("make_uniform_mask: fraction must be in (0,1]");
  }
  const std::size_t n = height * width;
  std::size_t target = static_cast<std::size_t>(std::lround(fraction * n));
  target = std::clamp<std::size_t>(target, 1, n);

  // Seeded partial Fisher-Yates over all positions; DC forced in and each
  // draw brings its mirror frequency along.
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  Rng rng(seed);
  SamplingMask mask;
  mask.height = height;
  mask.width = width;
  mask.keep.assign(n, 0);
  mask.keep[0] = 1;
  std::size_t chosen = 1;
  for (std::size_t i = 0; i < n && chosen < target; ++i) {
    const std::size_t j = i + rng.integer(n - i);
    std::swap(perm[i], perm[j]);
    const std::size_t pick = perm[i];
    if (mask.keep[pick]) continue;
    const std::size_t r = pick / width, c = pick % width;
    const std::size_t mirror = ((height - r) % height) * width + (width - c) % width;
    mask.keep[pick] = 1;
    ++chosen;
    if (!mask.keep[mirror]) {
      mask.keep[mirror] = 1;
      ++chosen;
    }
  }
  mask.fraction = static_cast<double>(mask.kept_count()) / static_cast<double>(n);
  return mask;
}

PointSpreadFunction make_gaussian_psf(std::size_t width) {
  if (width == 0) throw InvalidInputError("make_gaussian_psf: width must be >= 1");
  GridImage k(width, width);
  const double c = (static_cast<double>(width) - 1.0) / 2.0;
  const double s = std::max(0.5, static_cast<double>(width) / 6.0);
  double sum = 0.0;
  for (std::size_t r = 0; r < width; ++r) {
    for (std::size_t q = 0; q < width; ++q) {
      const double d2 = (r - c) * (r - c) + (q - c) * (q - c);
      k.at(r, q) = std::exp(-d2 / (2.0 * s * s));
      sum += k.at(r, q);
    }
  }
  for (auto& v : k.data) v /= sum;
  return PointSpreadFunction{std::move(k), true};
}

PointSpreadFunction make_airy_psf(std::size_t width) {
  if (width == 0) throw InvalidInputError("make_airy_psf: width must be >= 1");
  GridImage k(width, width);
  const double c = (static_cast<double>(width) - 1.0) / 2.0;
  // First Airy zero placed at ~40% of the half width.
  const double scale = 3.8317 / (0.4 * std::max(1.0, c));
  double sum = 0.0;
  for (std::size_t r = 0; r < width; ++r) {
    for (std::size_t q = 0; q < width; ++q) {
      const double rad = std::hypot(r - c, q - c) * scale;
      double v;
      if (rad < 1e-12) {
        v = 1.0;
      } else {
        const double j1 = std::cyl_bessel_j(1.0, rad);
        v = std::pow(2.0 * j1 / rad, 2.0);
      }
      k.at(r, q) = v;
      sum += v;
    }
  }
  for (auto& v : k.data) v /= sum;
  return PointSpreadFunction{std::move(k), true};
}

ComplexGrid psf_spectrum(const PointSpreadFunction& psf, std::size_t height,
                         std::size_t width) {
  const GridImage& k = psf.kernel;
  if (k.height > height || k.width > width) {
    throw InvalidInputError("psf_spectrum: kernel larger than image");
  }
  // Embed with the kernel center wrapped to (0,0) so convolution introduces
  // no shift, then take the unnormalized DFT (the unitary pair contributes
  // the 1/n factors itself).
  ComplexGrid embedded(height, width);
  const std::size_t cr = k.height / 2, cc = k.width / 2;
  for (std::size_t r = 0; r < k.height; ++r) {
    for (std::size_t c = 0; c < k.width; ++c) {
      const std::size_t rr = (r + height - cr) % height;
      const std::size_t cc2 = (c + width - cc) % width;
      embedded.at(rr, cc2) = {k.at(r, c), 0.0};
    }
  }
  ComplexGrid out(height, width);
  detail::fft2(height, width, embedded.data.data(), out.data.data(),
               detail::FftDir::Forward);
  return out;
}

namespace {

GridImage convolve_impl(const GridImage& img, const PointSpreadFunction& psf,
                        bool adjoint) {
  if (psf.kernel.height > img.height || psf.kernel.width > img.width) {
    throw InvalidInputError("convolve: kernel larger than image");
  }
  ComplexGrid spec = psf_spectrum(psf, img.height, img.width);
  ComplexGrid x = dft2(img);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x.data[i] *= adjoint ? std::conj(spec.data[i]) : spec.data[i];
  }
  return idft2_real(x);
}

}  // namespace

GridImage convolve(const GridImage& img, const PointSpreadFunction& psf) {
  return convolve_impl(img, psf, false);
}

GridImage convolve_adjoint(const GridImage& img, const PointSpreadFunction& psf) {
  return convolve_impl(img, psf, true);
}

GradientField grad2(const GridImage& img) {
  require_positive_dims(img.height, img.width, "grad2");
  GradientField f(img.height, img.width);
  const std::size_t h = img.height, w = img.width;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t i = r * w + c;
      f.dx[i] = img.at(r, (c + 1) % w) - img.at(r, c);
      f.dy[i] = img.at((r + 1) % h, c) - img.at(r, c);
    }
  }
  return f;
}

GridImage div2(const GradientField& field) {
  if (field.dx.size() != field.height * field.width ||
      field.dy.size() != field.height * field.width) {
    throw InvalidInputError("div2: field array lengths do not match shape");
  }
  const std::size_t h = field.height, w = field.width;
  GridImage out(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t i = r * w + c;
      const std::size_t left = r * w + (c + w - 1) % w;
      const std::size_t up = ((r + h - 1) % h) * w + c;
      // backward differences: div2 = -grad2^T
      out.data[i] = (field.dx[i] - field.dx[left]) + (field.dy[i] - field.dy[up]);
    }
  }
  return out;
}

double dot(const GradientField& a, const GradientField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dx.size(); ++i) {
    s += a.dx[i] * b.dx[i] + a.dy[i] * b.dy[i];
  }
  return s;
}

double sq_norm(const GradientField& a) { return dot(a, a); }

double operator_norm(const LinearMap& op, int iters, std::uint64_t seed) {
  if (iters < 1) throw InvalidInputError("operator_norm: iters must be >= 1");
  if (op.input_size == 0) throw InvalidInputError("operator_norm: empty domain");

  Rng rng(seed);
  std::vector<double> v(op.input_size);
  for (auto& x : v) x = rng.normal();

  double rayleigh = 0.0;
  for (int k = 0; k < iters; ++k) {
    std::vector<double> av = op.forward(v);
    double av_sq = 0.0;
    for (double x : av) av_sq += x * x;
    double v_sq = 0.0;
    for (double x : v) v_sq += x * x;
    if (av_sq == 0.0 || v_sq == 0.0) return 0.0;
    rayleigh = av_sq / v_sq;

    std::vector<double> w = op.adjoint(av);
    double w_norm = 0.0;
    for (double x : w) w_norm += x * x;
    w_norm = std::sqrt(w_norm);
    if (w_norm == 0.0) return std::sqrt(rayleigh);
    for (auto& x : w) x /= w_norm;
    v = std::move(w);
  }
  return std::sqrt(rayleigh);
}

LinearMap gradient_map(std::size_t height, std::size_t width) {
  LinearMap m;
  m.input_size = height * width;
  m.output_size = 2 * height * width;
  m.forward = [height, width](const std::vector<double>& x) {
    GridImage img(height, width);
    img.data = x;
    GradientField f = grad2(img);
    std::vector<double> out(f.dx.size() * 2);
    std::copy(f.dx.begin(), f.dx.end(), out.begin());
    std::copy(f.dy.begin(), f.dy.end(), out.begin() + f.dx.size());
    return out;
  };
  m.adjoint = [height, width](const std::vector<double>& u) {
    GradientField f(height, width);
    std::copy(u.begin(), u.begin() + f.dx.size(), f.dx.begin());
    std::copy(u.begin() + f.dx.size(), u.end(), f.dy.begin());
    GridImage g = div2(f);
    std::vector<double> out(g.data.size());
    for (std::size_t i = 0; i < g.data.size(); ++i) out[i] = -g.data[i];
    return out;
  };
  return m;
}

LinearMap subsample_map(const SamplingMask& mask) {
  LinearMap m;
  const std::size_t h = mask.height, w = mask.width;
  m.input_size = h * w;
  m.output_size = 2 * h * w;
  m.forward = [mask, h, w](const std::vector<double>& x) {
    GridImage img(h, w);
    img.data = x;
    ComplexGrid y = fourier_subsample(img, mask);
    std::vector<double> out(2 * y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      out[2 * i] = y.data[i].real();
      out[2 * i + 1] = y.data[i].imag();
    }
    return out;
  };
  m.adjoint = [mask, h, w](const std::vector<double>& u) {
    ComplexGrid g(h, w);
    for (std::size_t i = 0; i < g.size(); ++i) {
      g.data[i] = {u[2 * i], u[2 * i + 1]};
    }
    return fourier_subsample_adjoint(g, mask).data;
  };
  return m;
}

LinearMap convolution_map(const PointSpreadFunction& psf, std::size_t height,
                          std::size_t width) {
  LinearMap m;
  m.input_size = height * width;
  m.output_size = height * width;
  m.forward = [psf, height, width](const std::vector<double>& x) {
    GridImage img(height, width);
    img.data = x;
    return convolve(img, psf).data;
  };
  m.adjoint = [psf, height, width](const std::vector<double>& u) {
    GridImage img(height, width);
    img.data = u;
    return convolve_adjoint(img, psf).data;
  };
  return m;
}

}  // namespace uq

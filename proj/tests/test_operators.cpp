#include <doctest.h>

#include <cmath>
#include <complex>

#include "test_util.hpp"
#include "uq/operators.hpp"
#include "uq/threading.hpp"

using namespace uq;
using uqtest::random_image;

namespace {

double adjoint_gap(const LinearMap& op, Rng& rng) {
  std::vector<double> x(op.input_size), u(op.output_size);
  for (auto& v : x) v = rng.normal();
  for (auto& v : u) v = rng.normal();
  const auto ax = op.forward(x);
  const auto atu = op.adjoint(u);
  double lhs = 0.0, rhs = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) lhs += ax[i] * u[i];
  for (std::size_t i = 0; i < x.size(); ++i) rhs += x[i] * atu[i];
  for (double v : ax) scale += v * v;
  return std::abs(lhs - rhs) / std::max(1e-300, std::sqrt(scale));
}

}  // namespace

TEST_CASE("dft2 of a constant image is a pure DC spectrum") {
  const std::size_t m = 16;
  const double c = 2.5;
  GridImage img(m, m, c);
  ComplexGrid spec = dft2(img);
  CHECK(spec.at(0, 0).real() == doctest::Approx(c * m).epsilon(1e-12));
  CHECK(std::abs(spec.at(0, 0).imag()) < 1e-10);
  double off_dc = 0.0;
  for (std::size_t i = 1; i < spec.size(); ++i) {
    off_dc = std::max(off_dc, std::abs(spec.data[i]));
  }
  CHECK(off_dc < 1e-11);
}

TEST_CASE("dft2 inverts and preserves the norm") {
  Rng rng(11);
  GridImage x = random_image(24, 17, rng);
  ComplexGrid spec = dft2(x);
  GridImage back = idft2_real(spec);
  double num = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (back.data[i] - x.data[i]) * (back.data[i] - x.data[i]);
  }
  CHECK(std::sqrt(num) / norm(x) < 1e-12);
  CHECK(uqtest::rel_err(std::sqrt(sq_norm(spec)), norm(x)) < 1e-12);
}

TEST_CASE("dft2 rejects malformed images") {
  GridImage bad;
  CHECK_THROWS_AS(dft2(bad), InvalidInputError);
  GridImage mismatched(4, 4);
  mismatched.data.resize(9);
  CHECK_THROWS_AS(dft2(mismatched), InvalidInputError);
}

TEST_CASE("fourier_subsample with a full mask equals dft2") {
  Rng rng(3);
  GridImage x = random_image(12, 12, rng);
  SamplingMask full;
  full.height = full.width = 12;
  full.keep.assign(144, 1);
  full.fraction = 1.0;
  ComplexGrid a = fourier_subsample(x, full);
  ComplexGrid b = dft2(x);
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(a.data[i] - b.data[i]));
  }
  CHECK(diff == 0.0);
}

TEST_CASE("fourier_subsample keeps only the DC coefficient under a DC mask") {
  Rng rng(5);
  GridImage x = random_image(8, 8, rng);
  SamplingMask dc;
  dc.height = dc.width = 8;
  dc.keep.assign(64, 0);
  dc.keep[0] = 1;
  dc.fraction = 1.0 / 64.0;
  ComplexGrid y = fourier_subsample(x, dc);
  CHECK(std::abs(y.at(0, 0) - dft2(x).at(0, 0)) == 0.0);
  for (std::size_t i = 1; i < y.size(); ++i) CHECK(std::abs(y.data[i]) == 0.0);
  GridImage mismatch(4, 4);
  CHECK_THROWS_AS(fourier_subsample(mismatch, dc), InvalidInputError);
}

TEST_CASE("mask idempotence: subsample o adjoint o subsample = subsample") {
  Rng rng(7);
  GridImage x = random_image(16, 16, rng);
  SamplingMask mask = make_radial_mask(16, 16, 5, 1);
  ComplexGrid once = fourier_subsample(x, mask);
  ComplexGrid twice = fourier_subsample(fourier_subsample_adjoint(once, mask), mask);
  double diff = 0.0;
  for (std::size_t i = 0; i < once.size(); ++i) {
    diff = std::max(diff, std::abs(once.data[i] - twice.data[i]));
  }
  CHECK(diff < 1e-12);
}

TEST_CASE("mask generators respect their invariants") {
  SamplingMask radial = make_radial_mask(64, 64, 10, 42);
  CHECK(radial.keep[0] == 1);
  CHECK(radial.fraction ==
        doctest::Approx(static_cast<double>(radial.kept_count()) / 4096.0));
  // ~15% coverage for 10 lines on a 64-grid
  CHECK(radial.fraction > 0.10);
  CHECK(radial.fraction < 0.22);

  SamplingMask uni = make_uniform_mask(32, 32, 0.25, 9);
  CHECK(uni.keep[0] == 1);
  CHECK(std::abs(uni.fraction - 0.25) <= 1.0 / 1024.0 + 1e-12);

  CHECK_THROWS_AS(make_uniform_mask(8, 8, 0.0, 1), InvalidInputError);
  CHECK_THROWS_AS(make_radial_mask(8, 8, 0, 1), InvalidInputError);

  // seeded determinism
  SamplingMask uni2 = make_uniform_mask(32, 32, 0.25, 9);
  CHECK(uni.keep == uni2.keep);
}

TEST_CASE("convolve with the identity kernel is the identity") {
  Rng rng(13);
  GridImage x = random_image(20, 20, rng);
  PointSpreadFunction id;
  id.kernel = GridImage(1, 1, 1.0);
  id.normalized = true;
  GridImage y = convolve(x, id);
  CHECK(uqtest::max_abs_diff(x.data, y.data) < 1e-13);
}

TEST_CASE("convolving a unit impulse reproduces the kernel") {
  PointSpreadFunction psf = make_gaussian_psf(5);
  GridImage impulse(16, 16, 0.0);
  impulse.at(8, 8) = 1.0;
  GridImage out = convolve(impulse, psf);
  // Kernel center (2,2) lands on the impulse position.
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t c = 0; c < 5; ++c) {
      CHECK(out.at(8 - 2 + r, 8 - 2 + c) ==
            doctest::Approx(psf.kernel.at(r, c)).epsilon(1e-10));
    }
  }
  GridImage small(3, 3);
  CHECK_THROWS_AS(convolve(small, make_gaussian_psf(5)), InvalidInputError);
}

TEST_CASE("convolve commutes with circular shifts") {
  Rng rng(17);
  GridImage x = random_image(12, 12, rng);
  PointSpreadFunction psf = make_gaussian_psf(5);
  const long sr = 3, sc = 7;
  auto shift = [&](const GridImage& img) {
    GridImage out(img.height, img.width);
    for (std::size_t r = 0; r < img.height; ++r) {
      for (std::size_t c = 0; c < img.width; ++c) {
        out.at((r + sr) % img.height, (c + sc) % img.width) = img.at(r, c);
      }
    }
    return out;
  };
  GridImage a = convolve(shift(x), psf);
  GridImage b = shift(convolve(x, psf));
  CHECK(uqtest::max_abs_diff(a.data, b.data) < 1e-12);
}

TEST_CASE("gradient of a constant image vanishes and div2 is minus the adjoint") {
  GridImage c(9, 7, 3.3);
  GradientField g = grad2(c);
  CHECK(sq_norm(g) == 0.0);

  Rng rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    GridImage x = random_image(9, 7, rng);
    GradientField u(9, 7);
    for (auto& v : u.dx) v = rng.normal();
    for (auto& v : u.dy) v = rng.normal();
    const double lhs = dot(grad2(x), u);
    const double rhs = dot(x, div2(u));
    CHECK(std::abs(lhs + rhs) < 1e-10 * (1.0 + std::abs(lhs)));
  }

  GradientField bad;
  bad.height = 3;
  bad.width = 3;
  bad.dx.assign(4, 0.0);
  bad.dy.assign(9, 0.0);
  CHECK_THROWS_AS(div2(bad), InvalidInputError);
}

TEST_CASE("randomized adjoint identity holds for every operator") {
  Rng rng(29);
  SamplingMask mask = make_radial_mask(16, 16, 6, 3);
  PointSpreadFunction psf = make_gaussian_psf(7);
  const LinearMap maps[] = {gradient_map(16, 16), subsample_map(mask),
                            convolution_map(psf, 16, 16)};
  for (const auto& op : maps) {
    for (int trial = 0; trial < 20; ++trial) {
      CHECK(adjoint_gap(op, rng) < 1e-10);
    }
  }
}

TEST_CASE("transforms are safe to run concurrently") {
  Rng rng(37);
  std::vector<GridImage> inputs;
  for (int i = 0; i < 16; ++i) inputs.push_back(random_image(32, 32, rng));
  std::vector<double> errs(inputs.size(), 1.0);
  parallel_for(inputs.size(), [&](std::size_t i) {
    GridImage back = idft2_real(dft2(inputs[i]));
    double e = 0.0;
    for (std::size_t k = 0; k < back.size(); ++k) {
      e = std::max(e, std::abs(back.data[k] - inputs[i].data[k]));
    }
    errs[i] = e;
  });
  for (double e : errs) CHECK(e < 1e-12);
}

TEST_CASE("operator_norm matches closed forms") {
  Rng rng(31);
  LinearMap identity;
  identity.input_size = identity.output_size = 64;
  identity.forward = [](const std::vector<double>& v) { return v; };
  identity.adjoint = [](const std::vector<double>& v) { return v; };
  CHECK(operator_norm(identity, 50, 1) == doctest::Approx(1.0).epsilon(1e-6));

  LinearMap scaled = identity;
  scaled.forward = [](const std::vector<double>& v) {
    auto out = v;
    for (auto& x : out) x *= -3.5;
    return out;
  };
  scaled.adjoint = scaled.forward;
  CHECK(operator_norm(scaled, 50, 1) == doctest::Approx(3.5).epsilon(1e-6));

  LinearMap zero = identity;
  zero.forward = [](const std::vector<double>& v) {
    return std::vector<double>(v.size(), 0.0);
  };
  zero.adjoint = zero.forward;
  CHECK(operator_norm(zero, 10, 1) == 0.0);

  // Periodic 2-D gradient on a 64-grid: largest singular value sqrt(8).
  LinearMap grad = gradient_map(64, 64);
  const double est = operator_norm(grad, 4000, 7);
  CHECK(est <= std::sqrt(8.0) + 1e-9);
  CHECK(est == doctest::Approx(std::sqrt(8.0)).epsilon(1e-3 / std::sqrt(8.0)));

  // Rayleigh estimate is nondecreasing in the iteration count.
  double prev = 0.0;
  for (int iters : {5, 20, 80, 320}) {
    const double e = operator_norm(grad, iters, 7);
    CHECK(e >= prev - 1e-12);
    prev = e;
  }
  CHECK_THROWS_AS(operator_norm(grad, 0, 7), InvalidInputError);
}

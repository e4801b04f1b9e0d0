#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "uq/model.hpp"
#include "uq/synthetic.hpp"

using namespace uq;

TEST_CASE("phantom renders deterministically with [0,1] intensities") {
  GridImage a = make_phantom(64);
  GridImage b = make_phantom(64);
  CHECK(a.data == b.data);
  double mn = 1e300, mx = -1e300;
  for (double v : a.data) {
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  CHECK(mn == 0.0);
  CHECK(mx <= 1.0 + 1e-12);
  // outside the skull ellipse the background is exactly zero
  CHECK(a.at(0, 0) == 0.0);
  CHECK(a.at(63, 63) == 0.0);
  CHECK(a.at(0, 32) == 0.0);
  CHECK_THROWS_AS(make_phantom(16), InvalidInputError);
}

TEST_CASE("phantom mean intensity is stable across resolutions") {
  GridImage s64 = make_phantom(64);
  GridImage s128 = make_phantom(128);
  const double m64 = [&] {
    double s = 0.0;
    for (double v : s64.data) s += v;
    return s / static_cast<double>(s64.size());
  }();
  const double m128 = [&] {
    double s = 0.0;
    for (double v : s128.data) s += v;
    return s / static_cast<double>(s128.size());
  }();
  CHECK(std::abs(m64 - m128) < 0.01);
}

TEST_CASE("the spot ROI isolates the three bright structures") {
  for (std::size_t size : {64u, 128u}) {
    GridImage ph = make_phantom(size);
    PixelRect roi = phantom_spot_roi(size);
    REQUIRE(roi.w > 0);
    REQUIRE(roi.h > 0);
    double mx_inside = 0.0;
    for (std::size_t r = roi.y; r < roi.y + roi.h; ++r) {
      for (std::size_t c = roi.x; c < roi.x + roi.w; ++c) {
        mx_inside = std::max(mx_inside, ph.at(r, c));
      }
    }
    // spots sit at 0.3 over a 0.2 background
    CHECK(mx_inside == doctest::Approx(0.3).epsilon(1e-9));
    GridImage cleared = fill_rect(ph, roi, 0.2);
    double mx_after = 0.0;
    for (std::size_t r = roi.y; r < roi.y + roi.h; ++r) {
      for (std::size_t c = roi.x; c < roi.x + roi.w; ++c) {
        mx_after = std::max(mx_after, cleared.at(r, c));
      }
    }
    CHECK(mx_after == doctest::Approx(0.2).epsilon(1e-12));
  }
}

TEST_CASE("sparse scenes have exactly the requested support") {
  GridImage empty = make_sparse_scene(32, 0, 1);
  CHECK(norm(empty) == 0.0);

  GridImage scene = make_sparse_scene(256, 100, 7);
  std::size_t nz = 0;
  for (double v : scene.data) {
    if (v != 0.0) {
      ++nz;
      CHECK(v == 1.0);
    }
  }
  CHECK(nz == 100);

  GridImage again = make_sparse_scene(256, 100, 7);
  CHECK(scene.data == again.data);
  CHECK_THROWS_AS(make_sparse_scene(4, 16, 1), InvalidInputError);
}

TEST_CASE("noiseless simulation scores a zero data term at the truth") {
  GridImage truth = make_phantom(32);
  SamplingMask mask = make_radial_mask(32, 32, 6, 2);
  auto obs = simulate_tomography(truth, mask, 0.0, 2);
  PosteriorModel m = make_tv_model(obs.fourier, mask, 1e-3, 1.0);
  CHECK(eval_potential(m, truth).data_term < 1e-18);
  CHECK(std::isinf(obs.realized_snr_db));
}

TEST_CASE("tomographic noise has the configured scale") {
  GridImage truth = make_phantom(128);
  SamplingMask mask = make_radial_mask(128, 128, 12, 3);
  const double sigma = 2.5e-3;
  auto noisy = simulate_tomography(truth, mask, sigma, 3);
  auto clean = fourier_subsample(truth, mask);
  double sq = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    if (!mask.keep[i]) continue;
    sq += std::norm(noisy.fourier.data[i] - clean.data[i]);
    ++count;
  }
  const double emp = std::sqrt(sq / static_cast<double>(count));
  CHECK(std::abs(emp - sigma) / sigma < 0.05);

  auto rerun = simulate_tomography(truth, mask, sigma, 3);
  CHECK(rerun.fourier.data == noisy.fourier.data);
}

TEST_CASE("blurred-SNR targeting lands near the requested level") {
  GridImage scene = make_sparse_scene(128, 60, 5);
  PointSpreadFunction psf = make_gaussian_psf(16);
  GridImage clean = convolve(scene, psf);
  const double sigma = sigma_for_snr_db(clean, 20.0);
  auto obs = simulate_deconvolution(scene, psf, sigma, 6);
  CHECK(std::abs(obs.realized_snr_db - 20.0) < 0.5);
  CHECK_THROWS_AS(simulate_deconvolution(scene, psf, -1.0, 6), InvalidInputError);
}

#include <benchmark/benchmark.h>

#include "uq/model.hpp"
#include "uq/operators.hpp"
#include "uq/prox.hpp"
#include "uq/rng.hpp"
#include "uq/synthetic.hpp"

namespace {

uq::GridImage random_image(std::size_t side, std::uint64_t seed) {
  uq::Rng rng(seed);
  uq::GridImage img(side, side);
  for (auto& v : img.data) v = rng.normal();
  return img;
}

void BM_dft2(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  uq::GridImage img = random_image(side, 1);
  for (auto _ : state) {
    uq::ComplexGrid spec = uq::dft2(img);
    benchmark::DoNotOptimize(spec.data.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(side * side));
}
BENCHMARK(BM_dft2)->Arg(64)->Arg(128)->Arg(256);

void BM_convolve(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  uq::GridImage img = random_image(side, 2);
  uq::PointSpreadFunction psf = uq::make_gaussian_psf(16);
  for (auto _ : state) {
    uq::GridImage out = uq::convolve(img, psf);
    benchmark::DoNotOptimize(out.data.data());
  }
}
BENCHMARK(BM_convolve)->Arg(128)->Arg(256);

void BM_grad2(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  uq::GridImage img = random_image(side, 3);
  for (auto _ : state) {
    uq::GradientField f = uq::grad2(img);
    benchmark::DoNotOptimize(f.dx.data());
  }
}
BENCHMARK(BM_grad2)->Arg(64)->Arg(256);

void BM_prox_l12(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  uq::GradientField f = uq::grad2(random_image(side, 4));
  for (auto _ : state) {
    uq::GradientField out = uq::prox_l12(f, 0.3);
    benchmark::DoNotOptimize(out.dx.data());
  }
}
BENCHMARK(BM_prox_l12)->Arg(64)->Arg(256);

void BM_eval_potential_tv(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  uq::GridImage truth = uq::make_phantom(side);
  uq::SamplingMask mask = uq::make_radial_mask(side, side, 10, 5);
  auto obs = uq::simulate_tomography(truth, mask, 1e-3, 5);
  uq::PosteriorModel model =
      uq::make_tv_model(obs.fourier, mask, 1e-3, 100.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(uq::eval_potential(model, truth).total);
  }
}
BENCHMARK(BM_eval_potential_tv)->Arg(64)->Arg(128);

}  // namespace

#include <benchmark/benchmark.h>

#include "uq/admm.hpp"
#include "uq/analytic.hpp"
#include "uq/pxmala.hpp"
#include "uq/specfun.hpp"
#include "uq/synthetic.hpp"

namespace {

void BM_solve_map_tv(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  uq::GridImage truth = uq::make_phantom(side);
  uq::SamplingMask mask = uq::make_radial_mask(side, side, 10, 7);
  auto obs = uq::simulate_tomography(truth, mask, 1e-3, 7);
  uq::PosteriorModel model = uq::make_tv_model(obs.fourier, mask, 1e-3, 100.0);
  uq::AdmmConfig cfg;
  cfg.rho = 2e4;
  cfg.max_iters = 20000;
  for (auto _ : state) {
    uq::SolveReport rep = uq::solve_map(model, cfg);
    benchmark::DoNotOptimize(rep.g_at_map.total);
  }
}
BENCHMARK(BM_solve_map_tv)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_solve_map_lasso(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  uq::GridImage truth = uq::make_sparse_scene(side, side, 3);
  uq::PointSpreadFunction psf = uq::make_gaussian_psf(16);
  auto obs = uq::simulate_deconvolution(truth, psf, 1e-3, 3);
  uq::PosteriorModel model = uq::make_l1_model(obs.image, psf, 1e-3, 200.0);
  uq::AdmmConfig cfg;
  cfg.rho = 1e4;
  cfg.max_iters = 20000;
  for (auto _ : state) {
    uq::SolveReport rep = uq::solve_map(model, cfg);
    benchmark::DoNotOptimize(rep.g_at_map.total);
  }
}
BENCHMARK(BM_solve_map_lasso)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_pxmala_step_tv(benchmark::State& state) {
  const std::size_t side = 64;
  uq::GridImage truth = uq::make_phantom(side);
  uq::SamplingMask mask = uq::make_radial_mask(side, side, 10, 9);
  auto obs = uq::simulate_tomography(truth, mask, 1e-3, 9);
  uq::PosteriorModel model = uq::make_tv_model(obs.fourier, mask, 1e-3, 100.0);
  uq::AdmmConfig scfg;
  scfg.rho = 2e4;
  scfg.max_iters = 20000;
  uq::GridImage x = uq::solve_map(model, scfg).x_map;
  uq::ChainConfig cfg;
  cfg.step_delta = 1e-7;
  uq::Rng rng(11);
  for (auto _ : state) {
    auto [next, accepted] = uq::pxmala_step(model, x, cfg, rng);
    benchmark::DoNotOptimize(accepted);
    x = std::move(next);
  }
}
BENCHMARK(BM_pxmala_step_tv)->Unit(benchmark::kMillisecond);

void BM_gamma_quantile(benchmark::State& state) {
  const double shape = static_cast<double>(state.range(0));
  double p = 0.90;
  for (auto _ : state) {
    benchmark::DoNotOptimize(uq::gamma_quantile(shape, p));
    p = p == 0.90 ? 0.95 : 0.90;
  }
}
BENCHMARK(BM_gamma_quantile)->Arg(10)->Arg(1000)->Arg(100000);

void BM_error_curve(benchmark::State& state) {
  const auto grid = uq::log_n_grid(10000);
  for (auto _ : state) {
    auto pts = uq::error_curve(2.0, 1.0, grid, {0.2, 0.1, 0.05});
    benchmark::DoNotOptimize(pts.data());
  }
}
BENCHMARK(BM_error_curve)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

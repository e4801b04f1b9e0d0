#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "uq/admm.hpp"
#include "uq/synthetic.hpp"

using namespace uq;
using uqtest::random_image;

namespace {

PointSpreadFunction identity_psf() {
  PointSpreadFunction psf;
  psf.kernel = GridImage(1, 1, 1.0);
  psf.normalized = true;
  return psf;
}

// Orthonormal-design LASSO: identity forward, so the MAP estimate has the
// closed form soft(y, lambda * sigma^2).
struct LassoFixture {
  PosteriorModel model;
  GridImage closed_form;
};

LassoFixture make_lasso(std::size_t size, double sigma, double lambda,
                        std::uint64_t seed) {
  Rng rng(seed);
  GridImage y = random_image(size, size, rng, 1.5);
  LassoFixture f{make_l1_model(y, identity_psf(), sigma, lambda),
                 GridImage(size, size, 0.0)};
  const double thr = lambda * sigma * sigma;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double a = std::abs(y.data[i]) - thr;
    f.closed_form.data[i] = a > 0.0 ? (y.data[i] > 0 ? a : -a) : 0.0;
  }
  return f;
}

PosteriorModel tv_phantom_model(std::size_t size, double sigma, double lambda,
                                std::uint64_t seed) {
  GridImage truth = make_phantom(size);
  SamplingMask mask = make_radial_mask(size, size, 8, seed);
  auto obs = simulate_tomography(truth, mask, sigma, seed);
  return make_tv_model(obs.fourier, mask, sigma, lambda);
}

}  // namespace

TEST_CASE("solve_map reproduces the orthonormal LASSO closed form") {
  LassoFixture f = make_lasso(16, 0.8, 0.9, 21);
  AdmmConfig cfg;
  cfg.tol_primal = cfg.tol_dual = 1e-8;
  SolveReport rep = solve_map(f.model, cfg);
  CHECK(uqtest::max_abs_diff(rep.x_map.data, f.closed_form.data) < 1e-6);
  CHECK(rep.primal_residual <= 1e-8);
  CHECK(rep.dual_residual <= 1e-8);
  CHECK(rep.g_at_map.total ==
        doctest::Approx(eval_potential(f.model, f.closed_form).total)
            .epsilon(1e-7));
}

TEST_CASE("huge TV weight collapses the estimate to a constant image") {
  PosteriorModel m = tv_phantom_model(32, 1e-2, 1e6, 3);
  AdmmConfig cfg;
  cfg.max_iters = 4000;
  SolveReport rep = solve_map(m, cfg);
  double mn = rep.x_map.data[0], mx = rep.x_map.data[0];
  for (double v : rep.x_map.data) {
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  CHECK(mx - mn < 1e-4);
}

TEST_CASE("gen-gaussian MAP is exactly zero") {
  PosteriorModel m = make_gen_gaussian_model(10, 10, 1.0, 1.0);
  SolveReport rep = solve_map(m, AdmmConfig{});
  CHECK(norm(rep.x_map) == 0.0);
  CHECK(rep.g_at_map.total == 0.0);
  CHECK(kkt_check(m, rep) == 0.0);
}

TEST_CASE("kkt_check is small at the LASSO solution and large when truncated") {
  LassoFixture f = make_lasso(16, 1.0, 0.5, 22);
  SolveReport rep = solve_map(f.model, AdmmConfig{});
  const double ok = kkt_check(f.model, rep);
  CHECK(ok < 1e-5);

  AdmmConfig one;
  one.max_iters = 1;
  try {
    solve_map(f.model, one);
    FAIL("expected AdmmConvergenceError");
  } catch (const AdmmConvergenceError& e) {
    const double bad = kkt_check(f.model, e.report);
    CHECK(bad > 10.0 * one.tol_dual * (1.0 + norm(e.report.x_map)));
    CHECK(bad > ok);
  }
}

TEST_CASE("zero observation gives a zero MAP that passes the KKT check") {
  GridImage y(8, 8, 0.0);
  PosteriorModel m = make_l1_model(y, identity_psf(), 1.0, 1.0);
  SolveReport rep = solve_map(m, AdmmConfig{});
  CHECK(norm(rep.x_map) < 1e-12);
  CHECK(kkt_check(m, rep) < 1e-8);
}

TEST_CASE("MAP optimality holds against the start point and the truth") {
  GridImage truth = make_phantom(32);
  SamplingMask mask = make_radial_mask(32, 32, 8, 5);
  auto obs = simulate_tomography(truth, mask, 5e-3, 5);
  PosteriorModel m = make_tv_model(obs.fourier, mask, 5e-3, 10.0);
  AdmmConfig cfg;
  cfg.rho = 100.0;
  cfg.max_iters = 6000;
  SolveReport rep = solve_map(m, cfg);
  const double g_map = rep.g_at_map.total;
  const double g_start = eval_potential(m, adjoint_observation(m)).total;
  const double g_truth = eval_potential(m, truth).total;
  CHECK(g_map <= g_start + 1e-6 * (1.0 + std::abs(g_start)));
  CHECK(g_map <= g_truth + 1e-6 * (1.0 + std::abs(g_truth)));
}

TEST_CASE("objective trace is nonincreasing after warm-up") {
  LassoFixture f = make_lasso(16, 0.8, 0.9, 23);
  AdmmConfig cfg;
  cfg.record_trace = true;
  SolveReport rep = solve_map(f.model, cfg);
  REQUIRE(rep.objective_trace.size() >= 11);
  for (std::size_t k = 10; k + 1 < rep.objective_trace.size(); ++k) {
    CHECK(rep.objective_trace[k + 1] <=
          rep.objective_trace[k] + 1e-9 * (1.0 + std::abs(rep.objective_trace[k])));
  }

  PosteriorModel tv = tv_phantom_model(32, 1e-2, 5.0, 6);
  AdmmConfig tvcfg;
  tvcfg.record_trace = true;
  tvcfg.rho = 10.0;
  tvcfg.max_iters = 4000;
  SolveReport tvrep = solve_map(tv, tvcfg);
  REQUIRE(tvrep.objective_trace.size() >= 11);
  for (std::size_t k = 10; k + 1 < tvrep.objective_trace.size(); ++k) {
    CHECK(tvrep.objective_trace[k + 1] <=
          tvrep.objective_trace[k] +
              1e-9 * (1.0 + std::abs(tvrep.objective_trace[k])));
  }
}

TEST_CASE("solution is stable under doubling max_iters") {
  PosteriorModel m = tv_phantom_model(32, 1e-2, 5.0, 7);
  AdmmConfig cfg;
  cfg.rho = 10.0;
  cfg.max_iters = 4000;
  SolveReport a = solve_map(m, cfg);
  cfg.max_iters *= 2;
  SolveReport b = solve_map(m, cfg);
  CHECK(uqtest::max_abs_diff(a.x_map.data, b.x_map.data) < 1e-6);
}

TEST_CASE("nonnegativity constraint is honored") {
  Rng rng(31);
  GridImage y = random_image(12, 12, rng);
  PosteriorModel m = make_l1_model(y, identity_psf(), 1.0, 0.2, true);
  SolveReport rep = solve_map(m, AdmmConfig{});
  double mn = 0.0;
  for (double v : rep.x_map.data) mn = std::min(mn, v);
  CHECK(mn >= -1e-8);
  CHECK(rep.g_at_map.feasible);
}

TEST_CASE("solver configuration is validated") {
  PosteriorModel m = make_gen_gaussian_model(4, 4, 1.0, 1.0);
  AdmmConfig bad;
  bad.rho = 0.0;
  CHECK_THROWS_AS(solve_map(m, bad), InvalidInputError);
  AdmmConfig bad2;
  bad2.max_iters = 0;
  CHECK_THROWS_AS(solve_map(m, bad2), InvalidInputError);
}

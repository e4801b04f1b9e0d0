#include <doctest.h>

#include <cmath>

#include "uq/analytic.hpp"
#include "uq/region.hpp"

using namespace uq;

TEST_CASE("exact_gamma matches the closed-form small cases") {
  CHECK(exact_gamma({1.0, 1.0, 1}, 0.05) ==
        doctest::Approx(2.995732273553991).epsilon(1e-10));
  CHECK(exact_gamma({1.0, 1.0, 2}, 0.05) ==
        doctest::Approx(4.743864518390575).epsilon(1e-10));
  CHECK(exact_gamma({2.0, 1.0, 1}, 0.05) ==
        doctest::Approx(1.9207294103470622).epsilon(1e-10));
  // the scale lambda never enters: g ~ Gamma(n/q, 1) regardless
  CHECK(exact_gamma({2.0, 31.7, 1}, 0.05) ==
        doctest::Approx(1.9207294103470622).epsilon(1e-10));
  CHECK_THROWS_AS(exact_gamma({1.0, 1.0, 10}, 0.0), InvalidInputError);
}

TEST_CASE("exact_gamma is monotone in n and alpha") {
  double prev = 0.0;
  for (std::size_t n : {1u, 5u, 20u, 100u, 1000u}) {
    const double g = exact_gamma({1.5, 1.0, n}, 0.1);
    CHECK(g > prev);
    prev = g;
  }
  prev = 1e300;
  for (double alpha : {0.01, 0.05, 0.2, 0.5, 0.9}) {
    const double g = exact_gamma({1.5, 1.0, 100}, alpha);
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("mc_gamma agrees with the exact oracle within 3 sigma") {
  std::uint64_t seed = 100;
  for (double q : {1.0, 2.0}) {
    for (std::size_t n : {10u, 100u}) {
      for (double alpha : {0.05, 0.2}) {
        GenGaussianModel m{q, 1.0, n};
        QuantileEstimate est = mc_gamma(m, alpha, 40000, seed++);
        const double exact = exact_gamma(m, alpha);
        CHECK(std::abs(est.gamma_hat - exact) <=
              3.0 * est.mc_std_error + 1e-12);
      }
    }
  }
}

TEST_CASE("mc_gamma covers the general-q sampling path") {
  GenGaussianModel m{1.5, 2.0, 50};
  QuantileEstimate est = mc_gamma(m, 0.1, 40000, 7);
  CHECK(std::abs(est.gamma_hat - exact_gamma(m, 0.1)) <=
        3.0 * est.mc_std_error + 1e-12);
}

TEST_CASE("mc_gamma is reproducible and tightens with more samples") {
  GenGaussianModel m{1.0, 1.0, 20};
  QuantileEstimate a = mc_gamma(m, 0.1, 5000, 42);
  QuantileEstimate b = mc_gamma(m, 0.1, 5000, 42);
  CHECK(a.gamma_hat == b.gamma_hat);
  CHECK(a.mc_std_error == b.mc_std_error);
  QuantileEstimate coarse = mc_gamma(m, 0.1, 1000, 9);
  QuantileEstimate fine = mc_gamma(m, 0.1, 100000, 9);
  CHECK(fine.mc_std_error < coarse.mc_std_error);
  CHECK_THROWS_AS(mc_gamma(m, 0.1, 10, 1), InvalidInputError);
}

TEST_CASE("asymptotic limit is 1 - 1/q") {
  CHECK(asymptotic_limit(1.0) == 0.0);
  CHECK(asymptotic_limit(2.0) == 0.5);
  CHECK(asymptotic_limit(4.0) == 0.75);
  CHECK_THROWS_AS(asymptotic_limit(0.9), InvalidInputError);
}

TEST_CASE("error curve reproduces the large-n values and the limit approach") {
  const std::vector<std::size_t> grid = log_n_grid(10000);
  REQUIRE(grid.back() == 10000);
  {
    auto pts = error_curve(1.0, 1.0, grid, {0.05});
    CHECK(pts.back().e_n == doctest::Approx(0.06443275601945334).epsilon(1e-9));
    // decreasing toward the limit 0 for n >= 100
    double prev = 1e300;
    for (const auto& p : pts) {
      if (p.n < 100) continue;
      CHECK(p.e_n < prev);
      CHECK(p.e_n > 0.0);
      prev = p.e_n;
    }
  }
  {
    auto pts = error_curve(2.0, 1.0, grid, {0.05});
    CHECK(pts.back().e_n == doctest::Approx(0.5692505023321844).epsilon(1e-9));
    double prev = 1e300;
    for (const auto& p : pts) {
      if (p.n < 100) continue;
      CHECK(p.e_n - 0.5 > 0.0);
      CHECK(p.e_n - 0.5 < prev);
      prev = p.e_n - 0.5;
    }
  }
}

TEST_CASE("error curve points satisfy their internal identity") {
  auto pts = error_curve(1.5, 0.3, log_n_grid(100), {0.1, 0.2});
  for (const auto& p : pts) {
    CHECK(p.e_n * static_cast<double>(p.n) ==
          doctest::Approx(p.gamma_tilde - p.gamma_exact).epsilon(1e-9));
  }
  CHECK_THROWS_AS(error_curve(1.0, 1.0, {10, 10}, {0.1}), InvalidInputError);
}

TEST_CASE("containment and the theorem-2 band hold exactly on the grid") {
  for (double q : {1.0, 1.5, 2.0, 4.0}) {
    for (std::size_t n : {10u, 100u, 1000u, 10000u}) {
      for (double alpha : {0.01, 0.05, 0.2}) {
        GenGaussianModel m{q, 1.0, n};
        const double exact = exact_gamma(m, alpha);
        const CredibleRegion r = build_region(alpha, n, 0.0);
        const ErrorBand band = theorem2_band(alpha, n);
        if (r.alpha_valid) {
          CHECK(r.gamma_tilde >= exact);
        }
        CHECK(r.gamma_tilde - exact >= band.lower);
        CHECK(r.gamma_tilde - exact <= band.upper);
      }
    }
  }
}

TEST_CASE("csv emitter is self-describing") {
  auto pts = error_curve(2.0, 1.0, {10, 20}, {0.1});
  const std::string csv = error_curve_csv(2.0, pts);
  CHECK(csv.rfind("n,alpha,gamma_exact,gamma_tilde,e_n,limit\n", 0) == 0);
  CHECK(csv.find("0.5") != std::string::npos);
}

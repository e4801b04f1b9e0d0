#include "uq/analytic.hpp"

#include <cmath>
#include <sstream>

#include "uq/region.hpp"
#include "uq/rng.hpp"
#include "uq/specfun.hpp"
#include "uq/threading.hpp"

namespace uq {

double exact_gamma(const GenGaussianModel& model, double alpha) {
  model.validate();
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidInputError("exact_gamma: alpha must be in (0,1)");
  }
  const double shape = static_cast<double>(model.n) / model.q;
  return gamma_quantile(shape, 1.0 - alpha);
}

QuantileEstimate mc_gamma(const GenGaussianModel& model, double alpha,
                          std::size_t samples, std::uint64_t seed) {
  model.validate();
  if (samples < 1000) throw InvalidInputError("mc_gamma: samples must be >= 1000");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidInputError("mc_gamma: alpha must be in (0,1)");
  }

  Rng rng(seed);
  std::vector<double> g(samples, 0.0);
  const double q = model.q;
  for (auto& gi : g) {
    double s = 0.0;
    if (q == 1.0) {
      // |x| ~ Exp(lam), so lam|x| ~ Exp(1)
      for (std::size_t i = 0; i < model.n; ++i) {
        s += -std::log(1.0 - rng.uniform());
      }
    } else if (q == 2.0) {
      // x ~ N(0, 1/(2 lam)), so lam x^2 = z^2/2 with z standard normal
      for (std::size_t i = 0; i < model.n; ++i) {
        const double z = rng.normal();
        s += 0.5 * z * z;
      }
    } else {
      // |x| = (G/lam)^{1/q} with G ~ Gamma(1/q, 1); then lam|x|^q = G
      for (std::size_t i = 0; i < model.n; ++i) {
        s += rng.gamma(1.0 / q);
      }
    }
    gi = s;
  }
  QuantileEstimate est = quantile_with_batch_error(g, alpha);
  est.method = "iid " + est.method;
  return est;
}

double asymptotic_limit(double q) {
  if (!(q >= 1.0)) throw InvalidInputError("asymptotic_limit: q must be >= 1");
  return 1.0 - 1.0 / q;
}

std::vector<std::size_t> log_n_grid(std::size_t n_max) {
  std::vector<std::size_t> grid;
  const std::size_t steps[] = {1, 2, 5};
  for (std::size_t decade = 1; decade <= n_max; decade *= 10) {
    for (std::size_t s : steps) {
      const std::size_t n = s * decade;
      if (n <= n_max) grid.push_back(n);
    }
  }
  if (grid.empty() || grid.back() != n_max) grid.push_back(n_max);
  return grid;
}

std::vector<ErrorCurvePoint> error_curve(double q, double lam,
                                         const std::vector<std::size_t>& n_grid,
                                         const std::vector<double>& alphas) {
  if (n_grid.empty()) throw InvalidInputError("error_curve: empty n grid");
  for (std::size_t i = 0; i + 1 < n_grid.size(); ++i) {
    if (n_grid[i + 1] <= n_grid[i]) {
      throw InvalidInputError("error_curve: n grid must be increasing");
    }
  }
  GenGaussianModel base{q, lam, n_grid.front()};
  base.validate();

  std::vector<ErrorCurvePoint> points(n_grid.size() * alphas.size());
  parallel_for(points.size(), [&](std::size_t idx) {
    const std::size_t ni = idx / alphas.size();
    const double alpha = alphas[idx % alphas.size()];
    GenGaussianModel m{q, lam, n_grid[ni]};
    ErrorCurvePoint p;
    p.n = m.n;
    p.alpha = alpha;
    p.gamma_exact = exact_gamma(m, alpha);
    // g(x_map) = 0 for this family
    p.gamma_tilde = build_region(alpha, m.n, 0.0).gamma_tilde;
    p.e_n = (p.gamma_tilde - p.gamma_exact) / static_cast<double>(m.n);
    points[idx] = p;
  });
  return points;
}

std::string error_curve_csv(double q, const std::vector<ErrorCurvePoint>& points) {
  std::ostringstream os;
  os.precision(17);
  os << "n,alpha,gamma_exact,gamma_tilde,e_n,limit\n";
  const double limit = asymptotic_limit(q);
  for (const auto& p : points) {
    os << p.n << "," << p.alpha << "," << p.gamma_exact << "," << p.gamma_tilde
       << "," << p.e_n << "," << limit << "\n";
  }
  return os.str();
}

}  // namespace uq

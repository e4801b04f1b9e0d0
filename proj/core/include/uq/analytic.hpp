#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uq/errors.hpp"
#include "uq/quantile.hpp"

namespace uq {

/// iid family p(x) ~ exp(-lam * sum |x_i|^q): the analytic test family.
/// Its potential g = lam * sum |x_i|^q is Gamma(n/q, 1)-distributed, which
/// gives closed-form region thresholds to validate the approximation
/// against.
struct GenGaussianModel {
  double q = 1.0;
  double lam = 1.0;
  std::size_t n = 1;

  void validate() const {
    if (!(q >= 1.0)) throw InvalidInputError("GenGaussianModel: q must be >= 1");
    if (!(lam > 0.0)) throw InvalidInputError("GenGaussianModel: lam must be > 0");
    if (n < 1) throw InvalidInputError("GenGaussianModel: n must be >= 1");
  }
};

/// Exact HPD threshold: the (1-alpha)-quantile of Gamma(n/q, 1).
double exact_gamma(const GenGaussianModel& model, double alpha);

/// Monte Carlo estimate of the same threshold from iid draws of the family.
QuantileEstimate mc_gamma(const GenGaussianModel& model, double alpha,
                          std::size_t samples, std::uint64_t seed);

/// Large-n limit of (gamma_tilde - gamma)/n for the family: 1 - 1/q.
double asymptotic_limit(double q);

struct ErrorCurvePoint {
  std::size_t n = 0;
  double alpha = 0.0;
  double e_n = 0.0;  // (gamma_tilde - gamma_exact)/n
  double gamma_exact = 0.0;
  double gamma_tilde = 0.0;
};

/// Normalized approximation error over an n grid; gamma_tilde uses
/// g(x_map) = 0, the family's exact MAP value.
std::vector<ErrorCurvePoint> error_curve(double q, double lam,
                                         const std::vector<std::size_t>& n_grid,
                                         const std::vector<double>& alphas);

/// Default logarithmic n grid from 1 to n_max.
std::vector<std::size_t> log_n_grid(std::size_t n_max);

/// CSV emitter, columns: n,alpha,gamma_exact,gamma_tilde,e_n,limit.
std::string error_curve_csv(double q, const std::vector<ErrorCurvePoint>& points);

}  // namespace uq

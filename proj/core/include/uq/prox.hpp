#pragma once

#include <vector>

#include "uq/model.hpp"

namespace uq {

/// Inner-solver settings for proxes without a closed form.
struct ProxConfig {
  int inner_max_iters = 4000;
  double inner_tol = 1e-6;  // relative fixed-point tolerance

  void validate() const {
    if (inner_max_iters < 1) {
      throw InvalidInputError("ProxConfig: inner_max_iters must be >= 1");
    }
    if (!(inner_tol > 0.0 && inner_tol < 1.0)) {
      throw InvalidInputError("ProxConfig: inner_tol must be in (0,1)");
    }
  }
};

/// Soft threshold: argmin_u t||u||_1 + 0.5||u - v||^2, componentwise.
std::vector<double> prox_l1(const std::vector<double>& v, double t);
void prox_l1_inplace(std::vector<double>& v, double t);

/// Per-pixel vector soft threshold for the composite l1-l2 norm: each
/// gradient vector (dx, dy) shrinks toward zero by t in Euclidean length.
GradientField prox_l12(const GradientField& field, double t);

/// argmin_u t*lambda*|u|^q + 0.5(u - v)^2 for q >= 1 (scalar, separable).
double prox_power_abs(double v, double t, double q);

/// Exact minimizer of (t/2sigma^2)||y - Ax||^2 + 0.5||x - v||^2 via Fourier
/// diagonalization of A^H A. TvTomography and L1Deconvolution kinds only.
GridImage prox_quadratic_data(const PosteriorModel& model, const GridImage& v,
                              double t);

/// Approximate prox of the full potential: argmin_u t g(u) + 0.5||u - v||^2.
/// Closed form for GenGaussian; inner ADMM (warm started at v) otherwise.
GridImage prox_full_potential(const PosteriorModel& model, const GridImage& v,
                              double t, const ProxConfig& cfg);

/// Gradient of the Moreau envelope g^mlambda at x:
/// (x - prox_{mlambda g}(x)) / mlambda. 1/mlambda-Lipschitz.
GridImage moreau_grad(const PosteriorModel& model, const GridImage& x,
                      double mlambda, const ProxConfig& cfg);

/// Inner solver of prox_full_potential ran out of iterations.
class ProxConvergenceError : public ConvergenceError {
 public:
  ProxConvergenceError(const std::string& msg, int iterations, double residual,
                       GridImage last)
      : ConvergenceError(msg, iterations, residual),
        last_iterate(std::move(last)) {}
  GridImage last_iterate;
};

}  // namespace uq

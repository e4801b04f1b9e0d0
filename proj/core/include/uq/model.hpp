#pragma once

#include <limits>
#include <string>

#include "uq/grid.hpp"
#include "uq/operators.hpp"

namespace uq {

enum class ModelKind { TvTomography, L1Deconvolution, GenGaussian };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

/// Convex negative log-posterior
///   g(x) = ||y - Ax||^2 / (2 sigma^2) + lambda * phi(x) [+ indicator(x >= 0)]
/// with A and phi fixed by `kind`:
///   TvTomography:    A = mask o DFT (unitary),  phi = isotropic TV
///   L1Deconvolution: A = circular convolution,  phi = l1 norm
///   GenGaussian:     no data term,              phi = sum |x_i|^q
/// The normalizing constant of the posterior is never represented.
struct PosteriorModel {
  ModelKind kind = ModelKind::GenGaussian;
  std::size_t height = 0;
  std::size_t width = 0;

  ComplexGrid fourier_obs;   // TvTomography observation
  GridImage image_obs;       // L1Deconvolution observation
  SamplingMask mask;         // TvTomography forward operator
  PointSpreadFunction psf;   // L1Deconvolution forward operator

  double sigma = 1.0;
  double lambda = 1.0;
  bool nonneg = false;
  double gg_exponent = 1.0;  // q, GenGaussian only

  std::size_t n() const { return height * width; }
  void validate() const;
};

PosteriorModel make_tv_model(ComplexGrid observation, SamplingMask mask,
                             double sigma, double lambda, bool nonneg = false);
PosteriorModel make_l1_model(GridImage observation, PointSpreadFunction psf,
                             double sigma, double lambda, bool nonneg = false);
PosteriorModel make_gen_gaussian_model(std::size_t height, std::size_t width,
                                       double q, double lambda);

/// Split evaluation of g. `total` is the infinity sentinel when the point
/// violates the optional nonnegativity constraint.
struct PotentialValue {
  double total = 0.0;
  double data_term = 0.0;  // ||y - Ax||^2 / (2 sigma^2)
  double reg_term = 0.0;   // phi(x), unweighted
  bool feasible = true;

  static constexpr double infinity() {
    return std::numeric_limits<double>::infinity();
  }
};

PotentialValue eval_potential(const PosteriorModel& model, const GridImage& x);

/// Residual of the mean-value test of convexity on the segment [x2, x1]:
/// g(t x1 + (1-t) x2) - t g(x1) - (1-t) g(x2). Nonpositive up to rounding
/// for any convex g.
double log_concavity_gap_check(const PosteriorModel& model, const GridImage& x1,
                               const GridImage& x2, double t);

/// Forward operator applied to x (data-space image of x). TvTomography maps
/// into the kept Fourier coefficients; L1Deconvolution into image space.
ComplexGrid forward_tomography(const PosteriorModel& model, const GridImage& x);
GridImage forward_deconvolution(const PosteriorModel& model, const GridImage& x);

/// A^H y: default solver warm start (adjoint reconstruction).
GridImage adjoint_observation(const PosteriorModel& model);

}  // namespace uq

#include "uq/model.hpp"

#include <cmath>

namespace uq {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::TvTomography: return "tv_tomography";
    case ModelKind::L1Deconvolution: return "l1_deconvolution";
    case ModelKind::GenGaussian: return "gen_gaussian";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "tv_tomography") return ModelKind::TvTomography;
  if (name == "l1_deconvolution") return ModelKind::L1Deconvolution;
  if (name == "gen_gaussian") return ModelKind::GenGaussian;
  throw InvalidInputError("unknown model kind: " + name);
}

void PosteriorModel::validate() const {
  if (height == 0 || width == 0) {
    throw InvalidInputError("model: image dimensions must be positive");
  }
  if (!(sigma > 0.0)) throw InvalidInputError("model: sigma must be > 0");
  if (!(lambda > 0.0)) throw InvalidInputError("model: lambda must be > 0");
  switch (kind) {
    case ModelKind::TvTomography:
      if (fourier_obs.height != height || fourier_obs.width != width) {
        throw InvalidInputError("model: observation shape mismatch");
      }
      if (mask.height != height || mask.width != width) {
        throw InvalidInputError("model: mask shape mismatch");
      }
      break;
    case ModelKind::L1Deconvolution:
      if (image_obs.height != height || image_obs.width != width) {
        throw InvalidInputError("model: observation shape mismatch");
      }
      if (psf.kernel.height > height || psf.kernel.width > width) {
        throw InvalidInputError("model: kernel larger than image");
      }
      break;
    case ModelKind::GenGaussian:
      if (!(gg_exponent >= 1.0)) {
        throw InvalidInputError("model: exponent q must be >= 1");
      }
      break;
  }
}

PosteriorModel make_tv_model(ComplexGrid observation, SamplingMask mask,
                             double sigma, double lambda, bool nonneg) {
  PosteriorModel m;
  m.kind = ModelKind::TvTomography;
  m.height = observation.height;
  m.width = observation.width;
  m.fourier_obs = std::move(observation);
  m.mask = std::move(mask);
  m.sigma = sigma;
  m.lambda = lambda;
  m.nonneg = nonneg;
  m.validate();
  return m;
}

PosteriorModel make_l1_model(GridImage observation, PointSpreadFunction psf,
                             double sigma, double lambda, bool nonneg) {
  PosteriorModel m;
  m.kind = ModelKind::L1Deconvolution;
  m.height = observation.height;
  m.width = observation.width;
  m.image_obs = std::move(observation);
  m.psf = std::move(psf);
  m.sigma = sigma;
  m.lambda = lambda;
  m.nonneg = nonneg;
  m.validate();
  return m;
}

PosteriorModel make_gen_gaussian_model(std::size_t height, std::size_t width,
                                       double q, double lambda) {
  PosteriorModel m;
  m.kind = ModelKind::GenGaussian;
  m.height = height;
  m.width = width;
  m.gg_exponent = q;
  m.lambda = lambda;
  m.sigma = 1.0;  // unused, kept positive for the shared invariant
  m.validate();
  return m;
}

ComplexGrid forward_tomography(const PosteriorModel& model, const GridImage& x) {
  return fourier_subsample(x, model.mask);
}

GridImage forward_deconvolution(const PosteriorModel& model, const GridImage& x) {
  return convolve(x, model.psf);
}

GridImage adjoint_observation(const PosteriorModel& model) {
  switch (model.kind) {
    case ModelKind::TvTomography:
      return fourier_subsample_adjoint(model.fourier_obs, model.mask);
    case ModelKind::L1Deconvolution:
      return convolve_adjoint(model.image_obs, model.psf);
    case ModelKind::GenGaussian:
      return GridImage(model.height, model.width, 0.0);
  }
  throw InvalidInputError("adjoint_observation: bad model kind");
}

PotentialValue eval_potential(const PosteriorModel& model, const GridImage& x) {
  require_shape(x, model.height, model.width, "eval_potential");
  require_finite(x, "eval_potential");

  PotentialValue out;
  if (model.nonneg) {
    for (double v : x.data) {
      if (v < 0.0) {
        out.feasible = false;
        break;
      }
    }
  }

  switch (model.kind) {
    case ModelKind::TvTomography: {
      ComplexGrid ax = forward_tomography(model, x);
      double resid = 0.0;
      for (std::size_t i = 0; i < ax.size(); ++i) {
        if (!model.mask.keep[i]) continue;
        resid += std::norm(model.fourier_obs.data[i] - ax.data[i]);
      }
      out.data_term = resid / (2.0 * model.sigma * model.sigma);
      GradientField g = grad2(x);
      double tv = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        tv += std::sqrt(g.dx[i] * g.dx[i] + g.dy[i] * g.dy[i]);
      }
      out.reg_term = tv;
      break;
    }
    case ModelKind::L1Deconvolution: {
      GridImage ax = forward_deconvolution(model, x);
      double resid = 0.0;
      for (std::size_t i = 0; i < ax.size(); ++i) {
        const double d = model.image_obs.data[i] - ax.data[i];
        resid += d * d;
      }
      out.data_term = resid / (2.0 * model.sigma * model.sigma);
      double l1 = 0.0;
      for (double v : x.data) l1 += std::abs(v);
      out.reg_term = l1;
      break;
    }
    case ModelKind::GenGaussian: {
      const double q = model.gg_exponent;
      double s = 0.0;
      if (q == 1.0) {
        for (double v : x.data) s += std::abs(v);
      } else if (q == 2.0) {
        for (double v : x.data) s += v * v;
      } else {
        for (double v : x.data) s += std::pow(std::abs(v), q);
      }
      out.reg_term = s;
      break;
    }
  }

  out.total = out.feasible ? out.data_term + model.lambda * out.reg_term
                           : PotentialValue::infinity();
  return out;
}

double log_concavity_gap_check(const PosteriorModel& model, const GridImage& x1,
                               const GridImage& x2, double t) {
  if (!x1.same_shape(x2)) {
    throw InvalidInputError("log_concavity_gap_check: shape mismatch");
  }
  if (!(t >= 0.0 && t <= 1.0)) {
    throw InvalidInputError("log_concavity_gap_check: t must be in [0,1]");
  }
  GridImage mid(x1.height, x1.width);
  for (std::size_t i = 0; i < mid.size(); ++i) {
    mid.data[i] = t * x1.data[i] + (1.0 - t) * x2.data[i];
  }
  const double g1 = eval_potential(model, x1).total;
  const double g2 = eval_potential(model, x2).total;
  const double gm = eval_potential(model, mid).total;
  return gm - t * g1 - (1.0 - t) * g2;
}

}  // namespace uq

#include "uq/prox.hpp"

#include <cmath>

#include "admm_core.hpp"

namespace uq {

namespace {

void require_positive(double t, const char* what) {
  if (!(t > 0.0)) throw InvalidInputError(std::string(what) + ": t must be > 0");
}

}  // namespace

void prox_l1_inplace(std::vector<double>& v, double t) {
  require_positive(t, "prox_l1");
  for (auto& x : v) {
    if (!std::isfinite(x)) throw InvalidInputError("prox_l1: non-finite input");
    const double a = std::abs(x) - t;
    x = a > 0.0 ? (x > 0.0 ? a : -a) : 0.0;
  }
}

std::vector<double> prox_l1(const std::vector<double>& v, double t) {
  std::vector<double> out = v;
  prox_l1_inplace(out, t);
  return out;
}

GradientField prox_l12(const GradientField& field, double t) {
  require_positive(t, "prox_l12");
  GradientField out(field.height, field.width);
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double px = field.dx[i], py = field.dy[i];
    if (!std::isfinite(px) || !std::isfinite(py)) {
      throw InvalidInputError("prox_l12: non-finite input");
    }
    const double r = std::sqrt(px * px + py * py);
    // Subdifferential selection at the kink: zero stays zero.
    const double scale = r > t ? (r - t) / r : 0.0;
    out.dx[i] = scale * px;
    out.dy[i] = scale * py;
  }
  return out;
}

double prox_power_abs(double v, double t, double q) {
  require_positive(t, "prox_power_abs");
  if (!(q >= 1.0)) throw InvalidInputError("prox_power_abs: q must be >= 1");
  if (!std::isfinite(v)) throw InvalidInputError("prox_power_abs: non-finite input");
  if (q == 1.0) {
    const double a = std::abs(v) - t;
    return a > 0.0 ? (v > 0.0 ? a : -a) : 0.0;
  }
  if (q == 2.0) return v / (1.0 + 2.0 * t);
  const double av = std::abs(v);
  if (av == 0.0) return 0.0;
  // Monotone root of u + t q u^{q-1} = |v| on [0, |v|].
  double lo = 0.0, hi = av;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f = mid + t * q * std::pow(mid, q - 1.0) - av;
    if (f > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo <= 1e-15 * av) break;
  }
  const double u = 0.5 * (lo + hi);
  return v > 0.0 ? u : -u;
}

GridImage prox_quadratic_data(const PosteriorModel& model, const GridImage& v,
                              double t) {
  require_positive(t, "prox_quadratic_data");
  require_shape(v, model.height, model.width, "prox_quadratic_data");
  const double c = t / (model.sigma * model.sigma);
  ComplexGrid vhat = dft2(v);

  switch (model.kind) {
    case ModelKind::TvTomography: {
      // Real unknown: fold the mask and data onto Hermitian-symmetric
      // symbols so the per-coefficient solve is the real normal system.
      const std::size_t h = model.height, w = model.width;
      for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t q = 0; q < w; ++q) {
          const std::size_t i = r * w + q;
          const std::size_t j = ((h - r) % h) * w + (w - q) % w;
          const double mk = model.mask.keep[i] ? 1.0 : 0.0;
          const double mneg = model.mask.keep[j] ? 1.0 : 0.0;
          const auto y_sym = 0.5 * (mk * model.fourier_obs.data[i] +
                                    mneg * std::conj(model.fourier_obs.data[j]));
          vhat.data[i] =
              (vhat.data[i] + c * y_sym) / (1.0 + c * 0.5 * (mk + mneg));
        }
      }
      return idft2_real(vhat);
    }
    case ModelKind::L1Deconvolution: {
      ComplexGrid s = psf_spectrum(model.psf, model.height, model.width);
      ComplexGrid yhat = dft2(model.image_obs);
      for (std::size_t i = 0; i < vhat.size(); ++i) {
        const double s2 = std::norm(s.data[i]);
        vhat.data[i] = (vhat.data[i] + c * std::conj(s.data[i]) * yhat.data[i]) /
                       (1.0 + c * s2);
      }
      return idft2_real(vhat);
    }
    case ModelKind::GenGaussian:
      throw InvalidInputError("prox_quadratic_data: model has no data term");
  }
  throw InvalidInputError("prox_quadratic_data: bad model kind");
}

namespace detail {

GridImage prox_full_impl(const PosteriorModel& model, const GridImage& v,
                         double t, const ProxConfig& cfg, AdmmWarmState* warm,
                         const double* g_at_v) {
  require_positive(t, "prox_full_potential");
  cfg.validate();
  require_shape(v, model.height, model.width, "prox_full_potential");
  require_finite(v, "prox_full_potential");

  if (model.kind == ModelKind::GenGaussian) {
    GridImage out(v.height, v.width);
    const double tl = t * model.lambda;
    const double q = model.gg_exponent;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double vi = v.data[i];
      if (model.nonneg && vi <= 0.0) {
        out.data[i] = 0.0;
      } else {
        out.data[i] = prox_power_abs(vi, tl, q);
      }
    }
    return out;
  }

  detail::CompositeProblem prob;
  prob.model = &model;
  prob.weight = t;
  prob.anchor = &v;

  detail::AdmmOptions opt;
  opt.rho = std::max(0.25, 0.25 * (1.0 + t / (model.sigma * model.sigma)));
  opt.max_iters = cfg.inner_max_iters;
  opt.tol_primal = cfg.inner_tol;
  opt.tol_dual = cfg.inner_tol;
  // Warm-started (chain) calls keep the carried rho; balancing feedback is
  // too noisy over these short solves.
  opt.adapt_rho = (warm == nullptr);

  detail::AdmmResult res = detail::admm_composite(prob, opt, v, warm);
  if (!res.converged) {
    throw ProxConvergenceError(
        "prox_full_potential: inner solver did not reach tolerance",
        res.iterations, std::max(res.primal_residual, res.dual_residual),
        std::move(res.x));
  }

  // The prox value never exceeds the objective at v; when the true prox
  // barely moves, solver noise can put the iterate a hair above, in which
  // case v itself is the better approximate prox.
  auto objective = [&](const GridImage& u) {
    double obj = t * eval_potential(model, u).total;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double e = u.data[i] - v.data[i];
      obj += 0.5 * e * e;
    }
    return obj;
  };
  const double obj_v =
      t * (g_at_v ? *g_at_v : eval_potential(model, v).total);
  if (objective(res.x) > obj_v) return v;
  return std::move(res.x);
}

}  // namespace detail

GridImage prox_full_potential(const PosteriorModel& model, const GridImage& v,
                              double t, const ProxConfig& cfg) {
  return detail::prox_full_impl(model, v, t, cfg, nullptr);
}

GridImage moreau_grad(const PosteriorModel& model, const GridImage& x,
                      double mlambda, const ProxConfig& cfg) {
  if (!(mlambda > 0.0)) {
    throw InvalidInputError("moreau_grad: mlambda must be > 0");
  }
  GridImage p = prox_full_potential(model, x, mlambda, cfg);
  GridImage out(x.height, x.width);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.data[i] = (x.data[i] - p.data[i]) / mlambda;
  }
  return out;
}

}  // namespace uq

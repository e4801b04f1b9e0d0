#include "uq/admm.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "admm_core.hpp"
#include "fft.hpp"

namespace uq {

namespace detail {

namespace {

// Eigenvalues of grad^T grad on the periodic grid, unshifted DFT order.
std::vector<double> laplacian_symbol(std::size_t h, std::size_t w) {
  std::vector<double> sym(h * w);
  for (std::size_t r = 0; r < h; ++r) {
    const double sr = std::sin(std::numbers::pi * static_cast<double>(r) /
                               static_cast<double>(h));
    for (std::size_t c = 0; c < w; ++c) {
      const double sc = std::sin(std::numbers::pi * static_cast<double>(c) /
                                 static_cast<double>(w));
      sym[r * w + c] = 4.0 * (sr * sr + sc * sc);
    }
  }
  return sym;
}

struct FourierQuadratic {
  // x-update denominator pieces: denom = data_coeff + anchor + rho*reg_sym
  // (+ rho for the orthant block).
  std::vector<double> data_coeff;      // (w/sigma^2) * m  or  (w/sigma^2)|s|^2
  std::vector<double> reg_sym;         // laplacian symbol (TV) or all-ones (l1)
  ComplexGrid const_hat;               // (w/sigma^2) A^H y + anchor*v, in Fourier
  double anchor_weight = 0.0;
};

FourierQuadratic prepare_quadratic(const CompositeProblem& prob) {
  const PosteriorModel& m = *prob.model;
  const std::size_t h = m.height, w = m.width, n = h * w;
  FourierQuadratic fq;
  fq.anchor_weight = prob.anchor ? 1.0 : 0.0;
  fq.const_hat = ComplexGrid(h, w);
  const double c = prob.weight / (m.sigma * m.sigma);

  if (m.kind == ModelKind::TvTomography) {
    // The unknown is real, so the normal equations in the Fourier domain
    // couple k with -k: the mask may be asymmetric and the complex noise
    // breaks Hermitian symmetry of y. Folding both onto the half-spectrum
    // symbols keeps the system diagonal and its solution exactly real:
    //   m_sym(k) = (m(k) + m(-k))/2,
    //   y_sym(k) = (m(k) y(k) + m(-k) conj(y(-k)))/2.
    fq.data_coeff.resize(n);
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t q = 0; q < w; ++q) {
        const std::size_t i = r * w + q;
        const std::size_t j = ((h - r) % h) * w + (w - q) % w;  // index of -k
        const double mk = m.mask.keep[i] ? 1.0 : 0.0;
        const double mneg = m.mask.keep[j] ? 1.0 : 0.0;
        fq.data_coeff[i] = c * 0.5 * (mk + mneg);
        fq.const_hat.data[i] =
            c * 0.5 *
            (mk * m.fourier_obs.data[i] + mneg * std::conj(m.fourier_obs.data[j]));
      }
    }
    fq.reg_sym = laplacian_symbol(h, w);
  } else {
    ComplexGrid s = psf_spectrum(m.psf, h, w);
    ComplexGrid yhat = dft2(m.image_obs);
    fq.data_coeff.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      fq.data_coeff[i] = c * std::norm(s.data[i]);
      fq.const_hat.data[i] = c * std::conj(s.data[i]) * yhat.data[i];
    }
    fq.reg_sym.assign(n, 1.0);
  }

  if (prob.anchor) {
    ComplexGrid vhat = dft2(*prob.anchor);
    for (std::size_t i = 0; i < n; ++i) fq.const_hat.data[i] += vhat.data[i];
  }
  return fq;
}

// Solves the x-subproblem given rhs_space = rho * B^T(z - d) [+ orthant
// part], writing into x. fa and fb are caller-owned scratch grids.
void quadratic_step(const FourierQuadratic& fq, const std::vector<double>& rhs,
                    double rho, double rho_nn, std::size_t h, std::size_t w,
                    ComplexGrid& fa, ComplexGrid& fb, GridImage& x) {
  const std::size_t count = h * w;
  const double scale = 1.0 / std::sqrt(static_cast<double>(count));
  for (std::size_t i = 0; i < count; ++i) fa.data[i] = {rhs[i], 0.0};
  fft2(h, w, fa.data.data(), fb.data.data(), FftDir::Forward);
  for (std::size_t i = 0; i < count; ++i) {
    const double denom = fq.data_coeff[i] + fq.anchor_weight +
                         rho * fq.reg_sym[i] + rho_nn;
    fb.data[i] = (scale * fb.data[i] + fq.const_hat.data[i]) / denom;
  }
  fft2(h, w, fb.data.data(), fa.data.data(), FftDir::Backward);
  for (std::size_t i = 0; i < count; ++i) x.data[i] = scale * fa.data[i].real();
}

double composite_objective(const CompositeProblem& prob, const GridImage& x) {
  double obj = prob.weight * eval_potential(*prob.model, x).total;
  if (prob.anchor) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x.data[i] - prob.anchor->data[i];
      obj += 0.5 * d * d;
    }
  }
  return obj;
}

}  // namespace

AdmmResult admm_composite(const CompositeProblem& prob, const AdmmOptions& opt,
                          const GridImage& x0, AdmmWarmState* warm) {
  const PosteriorModel& m = *prob.model;
  if (m.kind == ModelKind::GenGaussian) {
    throw InvalidInputError("admm_composite: GenGaussian has closed-form paths");
  }
  const std::size_t h = m.height, w = m.width, n = h * w;
  const bool tv = (m.kind == ModelKind::TvTomography);
  const double reg_weight = prob.weight * m.lambda;

  FourierQuadratic fq = prepare_quadratic(prob);

  GridImage x = x0;
  // Regularizer split: z ~ Bx, scaled dual d. TV stacks (dx, dy).
  const std::size_t zdim = tv ? 2 * n : n;
  std::vector<double> z(zdim, 0.0), d(zdim, 0.0);
  std::vector<double> z_nn, d_nn;
  double rho = opt.rho;

  const bool use_warm = warm && warm->valid && warm->z.size() == zdim &&
                        (!m.nonneg || warm->z_nn.size() == n);
  if (use_warm) {
    z = warm->z;
    d = warm->d;
    z_nn = warm->z_nn;
    d_nn = warm->d_nn;
    rho = warm->rho;
  } else {
    if (tv) {
      GradientField g = grad2(x);
      std::copy(g.dx.begin(), g.dx.end(), z.begin());
      std::copy(g.dy.begin(), g.dy.end(), z.begin() + n);
    } else {
      std::copy(x.data.begin(), x.data.end(), z.begin());
    }
    if (m.nonneg) {
      z_nn.assign(n, 0.0);
      d_nn.assign(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) z_nn[i] = std::max(x.data[i], 0.0);
    }
  }

  AdmmResult res;
  res.rho_final = rho;

  // B^T u written into out; wrap columns handled outside the inner loops.
  auto apply_bt = [&](const std::vector<double>& u, GridImage& out) {
    if (!tv) {
      std::copy(u.begin(), u.end(), out.data.begin());
      return;
    }
    const double* ux = u.data();
    const double* uy = u.data() + n;
    double* o = out.data.data();
    for (std::size_t r = 0; r < h; ++r) {
      const std::size_t row = r * w;
      const std::size_t up = (r == 0 ? h - 1 : r - 1) * w;
      o[row] = (ux[row + w - 1] - ux[row]) + (uy[up] - uy[row]);
      for (std::size_t c = 1; c < w; ++c) {
        const std::size_t i = row + c;
        o[i] = (ux[i - 1] - ux[i]) + (uy[up + c] - uy[i]);
      }
    }
  };

  auto apply_b = [&](const GridImage& img, std::vector<double>& out) {
    if (!tv) {
      std::copy(img.data.begin(), img.data.end(), out.begin());
      return;
    }
    const double* p = img.data.data();
    double* ox = out.data();
    double* oy = out.data() + n;
    for (std::size_t r = 0; r < h; ++r) {
      const std::size_t row = r * w;
      const std::size_t down = (r + 1 == h ? 0 : r + 1) * w;
      for (std::size_t c = 0; c + 1 < w; ++c) {
        const std::size_t i = row + c;
        ox[i] = p[i + 1] - p[i];
        oy[i] = p[down + c] - p[i];
      }
      const std::size_t last = row + w - 1;
      ox[last] = p[row] - p[last];
      oy[last] = p[down + w - 1] - p[last];
    }
  };

  // preallocated workspaces for the hot loop
  std::vector<double> bx(zdim, 0.0);
  std::vector<double> z_minus_d(zdim, 0.0);
  std::vector<double> dz(zdim, 0.0);
  std::vector<double> dz_nn(m.nonneg ? n : 0, 0.0);
  std::vector<double> rhs(n, 0.0);
  GridImage bt_buf(h, w);
  ComplexGrid fa(h, w), fb(h, w);
  double r_rel = 0.0, s_rel = 0.0;

  GridImage best_x = x;
  double best_obj = (opt.track_best || opt.record_trace)
                        ? composite_objective(prob, x)
                        : 0.0;

  int k = 0;
  for (; k < opt.max_iters; ++k) {
    // x-update: rhs = rho * B^T (z - d) (+ orthant block)
    for (std::size_t i = 0; i < zdim; ++i) z_minus_d[i] = z[i] - d[i];
    apply_bt(z_minus_d, bt_buf);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = rho * bt_buf.data[i];
    if (m.nonneg) {
      for (std::size_t i = 0; i < n; ++i) rhs[i] += rho * (z_nn[i] - d_nn[i]);
    }
    quadratic_step(fq, rhs, rho, m.nonneg ? rho : 0.0, h, w, fa, fb, x);

    // z-update (prox of the regularizer at Bx + d), recording the change
    apply_b(x, bx);
    const double thresh = reg_weight / rho;
    double r_sq = 0.0, bx_sq = 0.0, z_sq = 0.0;
    if (tv) {
      for (std::size_t i = 0; i < n; ++i) {
        const double px = bx[i] + d[i];
        const double py = bx[n + i] + d[n + i];
        const double r = std::sqrt(px * px + py * py);
        const double scale = r > thresh ? (r - thresh) / r : 0.0;
        dz[i] = scale * px - z[i];
        dz[n + i] = scale * py - z[n + i];
        z[i] += dz[i];
        z[n + i] += dz[n + i];
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        const double p = bx[i] + d[i];
        const double a = std::abs(p) - thresh;
        const double znew = a > 0.0 ? (p > 0.0 ? a : -a) : 0.0;
        dz[i] = znew - z[i];
        z[i] = znew;
      }
    }

    // dual ascent and primal residual accumulation
    for (std::size_t i = 0; i < zdim; ++i) {
      const double e = bx[i] - z[i];
      d[i] += e;
      r_sq += e * e;
      bx_sq += bx[i] * bx[i];
      z_sq += z[i] * z[i];
    }

    if (m.nonneg) {
      for (std::size_t i = 0; i < n; ++i) {
        const double znew = std::max(x.data[i] + d_nn[i], 0.0);
        dz_nn[i] = znew - z_nn[i];
        z_nn[i] = znew;
        const double e = x.data[i] - znew;
        d_nn[i] += e;
        r_sq += e * e;
        bx_sq += x.data[i] * x.data[i];
        z_sq += znew * znew;
      }
    }

    // Primal convergence gates the more expensive dual computation: the
    // two B^T applications only run when the primal side already passes
    // (or when balancing needs the ratio).
    const double eps_abs = 1e-10;
    const double eps_pri = std::sqrt(static_cast<double>(zdim)) * eps_abs;
    const double eps_dua = std::sqrt(static_cast<double>(n)) * eps_abs;
    const double scale_r = std::max(std::sqrt(std::max(bx_sq, z_sq)), 1e-12);
    r_rel = std::sqrt(r_sq) / scale_r;
    const bool primal_ok =
        std::sqrt(r_sq) <= eps_pri + opt.tol_primal * scale_r;
    const bool balancing_due =
        opt.adapt_rho && k > 0 && k % opt.adapt_interval == 0;

    bool dual_ok = false;
    if (primal_ok || balancing_due) {
      apply_bt(dz, bt_buf);
      double s_sq = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double sv = bt_buf.data[i] + (m.nonneg ? dz_nn[i] : 0.0);
        s_sq += sv * sv;
      }
      apply_bt(d, bt_buf);
      double dual_sq = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double dv = bt_buf.data[i] + (m.nonneg ? d_nn[i] : 0.0);
        dual_sq += dv * dv;
      }
      const double scale_s = std::max(rho * std::sqrt(dual_sq), 1e-12);
      s_rel = rho * std::sqrt(s_sq) / scale_s;
      dual_ok = rho * std::sqrt(s_sq) <= eps_dua + opt.tol_dual * scale_s;
    }

    if (opt.track_best || opt.record_trace) {
      const double obj = composite_objective(prob, x);
      if (obj < best_obj) {
        best_obj = obj;
        if (opt.track_best) best_x = x;
      }
      if (opt.record_trace) res.trace.push_back(best_obj);
    }

    if (primal_ok && dual_ok) {
      if (!opt.extra_ok || opt.extra_ok(x)) {
        res.converged = true;
        ++k;
        break;
      }
    }

    // Residual balancing; duals rescale so rho*d is continuous. Near the
    // tolerance the two ratios are dominated by noise, so balancing is
    // frozen there.
    const bool far_from_converged =
        r_rel > 10.0 * opt.tol_primal || s_rel > 10.0 * opt.tol_dual;
    if (opt.adapt_rho && far_from_converged && k > 0 &&
        k % opt.adapt_interval == 0) {
      if (r_rel > 10.0 * s_rel) {
        rho *= 2.0;
        for (auto& v : d) v *= 0.5;
        for (auto& v : d_nn) v *= 0.5;
      } else if (s_rel > 10.0 * r_rel) {
        rho *= 0.5;
        for (auto& v : d) v *= 2.0;
        for (auto& v : d_nn) v *= 2.0;
      }
    }
  }

  if (warm) {
    warm->valid = true;
    warm->rho = rho;
    warm->z = z;
    warm->d = d;
    warm->z_nn = z_nn;
    warm->d_nn = d_nn;
  }

  res.x = opt.track_best ? std::move(best_x) : std::move(x);
  res.iterations = k;
  res.primal_residual = r_rel;
  res.dual_residual = s_rel;
  res.dual_reg = std::move(d);
  res.dual_nonneg = std::move(d_nn);
  res.rho_final = rho;
  return res;
}

}  // namespace detail

namespace {

GridImage data_gradient(const PosteriorModel& model, const GridImage& x) {
  const double inv_s2 = 1.0 / (model.sigma * model.sigma);
  if (model.kind == ModelKind::TvTomography) {
    ComplexGrid resid = forward_tomography(model, x);
    for (std::size_t i = 0; i < resid.size(); ++i) {
      if (model.mask.keep[i]) {
        resid.data[i] -= model.fourier_obs.data[i];
      } else {
        resid.data[i] = {0.0, 0.0};
      }
    }
    GridImage g = fourier_subsample_adjoint(resid, model.mask);
    for (auto& v : g.data) v *= inv_s2;
    return g;
  }
  GridImage ax = forward_deconvolution(model, x);
  for (std::size_t i = 0; i < ax.size(); ++i) {
    ax.data[i] -= model.image_obs.data[i];
  }
  GridImage g = convolve_adjoint(ax, model.psf);
  for (auto& v : g.data) v *= inv_s2;
  return g;
}

}  // namespace

SolveReport solve_map(const PosteriorModel& model, const AdmmConfig& cfg,
                      const std::optional<GridImage>& x0) {
  model.validate();
  cfg.validate();
  const auto t_start = std::chrono::steady_clock::now();

  SolveReport rep;
  if (model.kind == ModelKind::GenGaussian) {
    // Separable potential lambda*sum|x_i|^q, q >= 1: minimized exactly at 0.
    rep.x_map = GridImage(model.height, model.width, 0.0);
    rep.g_at_map = eval_potential(model, rep.x_map);
    rep.iterations = 0;
    rep.rho_final = cfg.rho;
    rep.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
    return rep;
  }

  GridImage start = x0 ? *x0 : adjoint_observation(model);
  require_shape(start, model.height, model.width, "solve_map x0");

  detail::CompositeProblem prob;
  prob.model = &model;
  detail::AdmmOptions opt;
  opt.rho = cfg.rho;
  opt.max_iters = cfg.max_iters;
  opt.tol_primal = cfg.tol_primal;
  opt.tol_dual = cfg.tol_dual;
  opt.adapt_rho = cfg.adapt_rho;
  opt.adapt_interval = 50;
  opt.record_trace = cfg.record_trace;
  opt.track_best = true;

  detail::AdmmResult res = detail::admm_composite(prob, opt, start);

  rep.x_map = std::move(res.x);
  if (model.nonneg) {
    // the split variable carries the constraint exactly; land the iterate
    // on the feasible set
    for (auto& v : rep.x_map.data) v = std::max(v, 0.0);
  }
  rep.g_at_map = eval_potential(model, rep.x_map);
  rep.iterations = res.iterations;
  rep.primal_residual = res.primal_residual;
  rep.dual_residual = res.dual_residual;
  rep.objective_trace = std::move(res.trace);
  rep.dual_reg = std::move(res.dual_reg);
  rep.dual_nonneg = std::move(res.dual_nonneg);
  rep.rho_final = res.rho_final;
  rep.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();

  if (!res.converged) {
    throw AdmmConvergenceError("solve_map: max_iters reached before tolerance",
                               std::move(rep));
  }
  return rep;
}

double kkt_check(const PosteriorModel& model, const SolveReport& report) {
  const GridImage& x = report.x_map;
  const std::size_t n = x.size();

  if (model.kind == ModelKind::GenGaussian) {
    // Smallest-norm subgradient of lambda*sum|x_i|^q.
    const double q = model.gg_exponent;
    double sq = 0.0;
    for (double v : x.data) {
      double s = 0.0;
      if (v != 0.0) {
        s = (q == 1.0) ? model.lambda * (v > 0 ? 1.0 : -1.0)
                       : model.lambda * q * std::pow(std::abs(v), q - 1.0) *
                             (v > 0 ? 1.0 : -1.0);
      }
      sq += s * s;
    }
    return std::sqrt(sq);
  }

  GridImage sub = data_gradient(model, x);
  const double rho = report.rho_final;
  if (model.kind == ModelKind::TvTomography) {
    if (report.dual_reg.size() == 2 * n) {
      GradientField f(x.height, x.width);
      std::copy(report.dual_reg.begin(), report.dual_reg.begin() + n,
                f.dx.begin());
      std::copy(report.dual_reg.begin() + n, report.dual_reg.end(),
                f.dy.begin());
      GridImage bt = div2(f);
      for (std::size_t i = 0; i < n; ++i) sub.data[i] -= rho * bt.data[i];
    }
  } else if (report.dual_reg.size() == n) {
    for (std::size_t i = 0; i < n; ++i) sub.data[i] += rho * report.dual_reg[i];
  }
  if (report.dual_nonneg.size() == n) {
    for (std::size_t i = 0; i < n; ++i) sub.data[i] += rho * report.dual_nonneg[i];
  }
  return norm(sub);
}

}  // namespace uq

#include "uq/pxmala.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "admm_core.hpp"
#include "uq/admm.hpp"

namespace uq {

namespace {

struct ChainState {
  GridImage x;
  double g = 0.0;
  GridImage drift;  // moreau_grad at x
};

ChainState make_state(const PosteriorModel& model, const GridImage& x,
                      double mlambda, const ProxConfig& prox_cfg,
                      detail::AdmmWarmState* warm = nullptr) {
  ChainState s;
  s.x = x;
  s.g = eval_potential(model, x).total;
  GridImage p = detail::prox_full_impl(model, x, mlambda, prox_cfg, warm, &s.g);
  s.drift = GridImage(x.height, x.width);
  for (std::size_t i = 0; i < x.size(); ++i) {
    s.drift.data[i] = (x.data[i] - p.data[i]) / mlambda;
  }
  return s;
}

double sq_dist(const GridImage& a, const GridImage& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    s += d * d;
  }
  return s;
}

// One transition; returns the acceptance probability used and whether the
// move was taken. `state` is advanced in place.
std::pair<double, bool> advance(const PosteriorModel& model, ChainState& state,
                                double delta, double mlambda,
                                const ProxConfig& prox_cfg, Rng& rng,
                                detail::AdmmWarmState* warm = nullptr) {
  const std::size_t n = state.x.size();
  const double sqrt_delta = std::sqrt(delta);

  GridImage proposal(state.x.height, state.x.width);
  for (std::size_t i = 0; i < n; ++i) {
    const double mean_i = state.x.data[i] - 0.5 * delta * state.drift.data[i];
    proposal.data[i] = mean_i + sqrt_delta * rng.normal();
  }

  ChainState prop = make_state(model, proposal, mlambda, prox_cfg, warm);

  // log q(x|x') - log q(x'|x); the Gaussian normalizations cancel.
  double fwd_sq = 0.0, rev_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double mf = state.x.data[i] - 0.5 * delta * state.drift.data[i];
    const double mr = prop.x.data[i] - 0.5 * delta * prop.drift.data[i];
    const double df = prop.x.data[i] - mf;
    const double dr = state.x.data[i] - mr;
    fwd_sq += df * df;
    rev_sq += dr * dr;
  }
  const double log_alpha =
      (state.g - prop.g) + (fwd_sq - rev_sq) / (2.0 * delta);
  const double accept_prob = std::min(1.0, std::exp(log_alpha));

  const double u = rng.uniform();
  const bool accepted = std::log(u) < log_alpha;
  if (accepted) state = std::move(prop);
  return {accept_prob, accepted};
}

}  // namespace

double log_proposal_density(const PosteriorModel& model, const GridImage& from,
                            const GridImage& to, double delta, double mlambda,
                            const ProxConfig& cfg) {
  if (!(delta > 0.0)) {
    throw InvalidInputError("log_proposal_density: delta must be > 0");
  }
  GridImage drift = moreau_grad(model, from, mlambda, cfg);
  GridImage mean = axpy(from, -0.5 * delta, drift);
  const double n = static_cast<double>(from.size());
  return -0.5 * n * std::log(2.0 * std::numbers::pi * delta) -
         sq_dist(to, mean) / (2.0 * delta);
}

std::pair<GridImage, bool> pxmala_step(const PosteriorModel& model,
                                       const GridImage& x,
                                       const ChainConfig& cfg, Rng& rng) {
  cfg.validate();
  const double mlambda =
      cfg.moreau_lambda > 0.0 ? cfg.moreau_lambda : cfg.step_delta;
  ChainState state = make_state(model, x, mlambda, cfg.prox);
  const bool accepted =
      advance(model, state, cfg.step_delta, mlambda, cfg.prox, rng).second;
  return {std::move(state.x), accepted};
}

ChainOutput run_chain(const PosteriorModel& model, const ChainConfig& cfg,
                      const std::optional<GridImage>& x0) {
  model.validate();
  cfg.validate();

  GridImage start = x0 ? *x0 : solve_map(model, AdmmConfig{}).x_map;
  require_shape(start, model.height, model.width, "run_chain x0");

  Rng rng(cfg.seed);
  double delta = cfg.step_delta;
  const bool coupled_mlambda = !(cfg.moreau_lambda > 0.0);
  auto mlambda = [&]() { return coupled_mlambda ? delta : cfg.moreau_lambda; };

  // The inner prox solves a slowly moving problem along the chain; carrying
  // its split variables across steps cuts the solve cost sharply.
  detail::AdmmWarmState warm;
  ChainState state = make_state(model, start, mlambda(), cfg.prox, &warm);

  ChainOutput out;
  out.seed = cfg.seed;
  const long retained = (cfg.iterations - cfg.burn_in) / cfg.thin;
  out.g_samples.reserve(static_cast<std::size_t>(std::max<long>(retained, 0)));

  long accepted_post = 0, steps_post = 0;
  for (long t = 1; t <= cfg.iterations; ++t) {
    auto [accept_prob, accepted] =
        advance(model, state, delta, mlambda(), cfg.prox, rng, &warm);

    if (!std::isfinite(state.g)) {
      throw ChainFailureError("run_chain: non-finite potential at step " +
                              std::to_string(t));
    }

    if (cfg.target_acceptance && t <= cfg.burn_in) {
      // Robbins-Monro on log(delta); gain decays so the kernel settles
      // before the burn-in ends.
      const double gain = std::pow(static_cast<double>(t), -0.6);
      delta *= std::exp(gain * (accept_prob - *cfg.target_acceptance));
    }

    if (t > cfg.burn_in) {
      ++steps_post;
      accepted_post += accepted ? 1 : 0;
      if ((t - cfg.burn_in) % cfg.thin == 0) out.g_samples.push_back(state.g);
    }
  }

  out.acceptance_rate =
      steps_post > 0
          ? static_cast<double>(accepted_post) / static_cast<double>(steps_post)
          : 0.0;
  out.ess_estimate = ess_batch_means(out.g_samples);
  out.step_delta_final = delta;
  return out;
}

QuantileEstimate estimate_gamma(const ChainOutput& out, double alpha) {
  if (out.g_samples.empty()) {
    throw InvalidInputError("estimate_gamma: empty chain output");
  }
  return quantile_with_batch_error(out.g_samples, alpha);
}

double relative_error(const CredibleRegion& region, const QuantileEstimate& est) {
  if (!(est.gamma_hat > 0.0)) {
    throw InvalidInputError("relative_error: gamma_hat must be > 0");
  }
  return (region.gamma_tilde - est.gamma_hat) / est.gamma_hat;
}

}  // namespace uq

#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "uq/model.hpp"
#include "uq/prox.hpp"
#include "uq/quantile.hpp"
#include "uq/region.hpp"
#include "uq/rng.hpp"

namespace uq {

struct ChainConfig {
  double step_delta = 1e-4;
  double moreau_lambda = 0.0;  // <= 0: coupled to the (possibly adapted) step
  long iterations = 10000;
  long burn_in = 1000;
  long thin = 1;
  std::uint64_t seed = 0;
  // Robbins-Monro adaptation of log(step_delta) during burn-in only; the
  // kernel is frozen afterwards so the stationary law is untouched.
  std::optional<double> target_acceptance;
  ProxConfig prox;

  void validate() const {
    if (!(step_delta > 0.0)) {
      throw InvalidInputError("ChainConfig: step_delta must be > 0");
    }
    if (iterations < 1) throw InvalidInputError("ChainConfig: iterations must be >= 1");
    if (burn_in < 0 || burn_in >= iterations) {
      throw InvalidInputError("ChainConfig: need 0 <= burn_in < iterations");
    }
    if (thin < 1) throw InvalidInputError("ChainConfig: thin must be >= 1");
    if (target_acceptance &&
        !(*target_acceptance > 0.0 && *target_acceptance < 1.0)) {
      throw InvalidInputError("ChainConfig: target_acceptance must be in (0,1)");
    }
    prox.validate();
  }
};

struct ChainOutput {
  std::vector<double> g_samples;  // post burn-in, thinned g values
  double acceptance_rate = 0.0;   // post burn-in
  double ess_estimate = 0.0;      // batch-means ESS of g_samples
  std::uint64_t seed = 0;
  double step_delta_final = 0.0;
};

/// One proximal MALA transition: Langevin proposal driven by the Moreau
/// envelope gradient, with an exact Metropolis-Hastings correction under
/// the asymmetric Gaussian proposal. Draw order per call: n normals, then
/// one uniform.
std::pair<GridImage, bool> pxmala_step(const PosteriorModel& model,
                                       const GridImage& x,
                                       const ChainConfig& cfg, Rng& rng);

/// Log density of the px-MALA proposal to <- N(from - (delta/2) grad
/// g^mlambda(from), delta I), normalization included. Exposed so the MH
/// ratio can be rebuilt and checked externally.
double log_proposal_density(const PosteriorModel& model, const GridImage& from,
                            const GridImage& to, double delta, double mlambda,
                            const ProxConfig& cfg);

/// Runs the chain, recording g at every retained state. x0 defaults to the
/// MAP point (computed with default solver settings).
ChainOutput run_chain(const PosteriorModel& model, const ChainConfig& cfg,
                      const std::optional<GridImage>& x0 = std::nullopt);

/// Empirical (1-alpha)-quantile of the recorded g values with a batch-means
/// error bar: the Monte Carlo estimate of the exact region threshold.
QuantileEstimate estimate_gamma(const ChainOutput& out, double alpha);

/// (gamma_tilde - gamma_hat) / gamma_hat.
double relative_error(const CredibleRegion& region, const QuantileEstimate& est);

}  // namespace uq

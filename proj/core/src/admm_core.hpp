#pragma once

#include <functional>
#include <vector>

#include "uq/model.hpp"
#include "uq/prox.hpp"

// Shared ADMM engine behind solve_map and prox_full_potential. Minimizes
//
//   weight * [ ||y - Ax||^2/(2 sigma^2) + lambda * phi(Bx) ]
//   + (anchor ? 0.5*||x - anchor||^2 : 0)  + (nonneg ? indicator(x>=0) : 0)
//
// with B = grad2 (TV) or identity (l1). The x-update is exact through the
// Fourier diagonalization of A^H A and B^T B; phi and the orthant enter
// through their proxes on split variables.
namespace uq::detail {

struct CompositeProblem {
  const PosteriorModel* model = nullptr;
  double weight = 1.0;
  const GridImage* anchor = nullptr;
};

struct AdmmOptions {
  double rho = 1.0;
  int max_iters = 2000;
  double tol_primal = 1e-6;
  double tol_dual = 1e-6;
  bool adapt_rho = true;
  int adapt_interval = 10;  // residual-balancing cadence
  bool record_trace = false;
  // Track the lowest-objective iterate (seeded with x0) and return it as
  // the solution; the trace then records the solution-so-far objective.
  // Costs one extra objective evaluation per iteration.
  bool track_best = false;
  // Optional extra acceptance test evaluated once residuals pass.
  std::function<bool(const GridImage&)> extra_ok;
};

struct AdmmResult {
  GridImage x;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;
  std::vector<double> trace;
  std::vector<double> dual_reg;
  std::vector<double> dual_nonneg;
  double rho_final = 0.0;
};

/// Split variables and duals carried between related solves permit warm
/// starts (the px-MALA inner prox solves a slowly moving problem).
struct AdmmWarmState {
  bool valid = false;
  double rho = 0.0;
  std::vector<double> z, d, z_nn, d_nn;
};

AdmmResult admm_composite(const CompositeProblem& prob, const AdmmOptions& opt,
                          const GridImage& x0, AdmmWarmState* warm = nullptr);

/// prox_full_potential body with an optional warm-start slot. g_at_v, when
/// given, is the caller's already-computed potential at v (saves one
/// evaluation on the chain's hot path).
GridImage prox_full_impl(const PosteriorModel& model, const GridImage& v,
                         double t, const ProxConfig& cfg, AdmmWarmState* warm,
                         const double* g_at_v = nullptr);

}  // namespace uq::detail

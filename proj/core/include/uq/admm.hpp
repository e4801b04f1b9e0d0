#pragma once

#include <optional>
#include <vector>

#include "uq/model.hpp"
#include "uq/prox.hpp"

namespace uq {

struct AdmmConfig {
  double rho = 1.0;          // augmented-Lagrangian weight
  int max_iters = 2000;
  double tol_primal = 1e-6;  // relative primal residual
  double tol_dual = 1e-6;    // relative dual residual
  bool adapt_rho = true;     // residual balancing, factor 2 every 50 iters
  bool record_trace = false;

  void validate() const {
    if (!(rho > 0.0)) throw InvalidInputError("AdmmConfig: rho must be > 0");
    if (max_iters < 1) throw InvalidInputError("AdmmConfig: max_iters must be >= 1");
    if (!(tol_primal > 0.0 && tol_primal < 1.0) ||
        !(tol_dual > 0.0 && tol_dual < 1.0)) {
      throw InvalidInputError("AdmmConfig: tolerances must be in (0,1)");
    }
  }
};

struct SolveReport {
  GridImage x_map;
  PotentialValue g_at_map;
  int iterations = 0;
  double primal_residual = 0.0;  // relative, at exit
  double dual_residual = 0.0;    // relative, at exit
  std::vector<double> objective_trace;  // g(x_k) when recording was requested
  double wall_time_seconds = 0.0;

  // Final solver internals consumed by kkt_check.
  std::vector<double> dual_reg;     // scaled dual of the regularizer split
  std::vector<double> dual_nonneg;  // scaled dual of the orthant split
  double rho_final = 0.0;
};

/// solve_map ran out of iterations; the partial report is attached.
class AdmmConvergenceError : public ConvergenceError {
 public:
  AdmmConvergenceError(const std::string& msg, SolveReport rep)
      : ConvergenceError(msg, rep.iterations,
                         std::max(rep.primal_residual, rep.dual_residual)),
        report(std::move(rep)) {}
  SolveReport report;
};

/// MAP estimate by split-augmented-Lagrangian ADMM. The splitting is
/// u = grad2(x) for the TV model and u = x for the l1 model; the quadratic
/// x-subproblem is solved exactly in the Fourier domain. Default start is
/// the adjoint reconstruction A^H y.
SolveReport solve_map(const PosteriorModel& model, const AdmmConfig& cfg,
                      const std::optional<GridImage>& x0 = std::nullopt);

/// Norm of the candidate smallest-norm subgradient of g at x_map assembled
/// from the final ADMM duals. Values around 10*tol_dual*(1+||x_map||) or
/// below indicate KKT-consistent convergence.
double kkt_check(const PosteriorModel& model, const SolveReport& report);

}  // namespace uq

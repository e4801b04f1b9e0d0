#pragma once

#include <functional>
#include <string>

#include "uq/model.hpp"

namespace uq {

/// Conservative credible-region approximation at level 1-alpha:
/// { x : g(x) <= gamma_tilde } with
///   tau_alpha   = sqrt(16 log(3/alpha) / n)
///   gamma_tilde = g(x_map) + n (tau_alpha + 1).
/// `alpha_valid` records alpha > 4 exp(-n/3); `tau_in_range` records
/// tau_alpha <= 2, the range where the underlying concentration inequality
/// applies. Both are warnings, not errors: the quantities still evaluate.
struct CredibleRegion {
  double alpha = 0.0;
  std::size_t n = 0;
  double g_at_map = 0.0;
  double tau_alpha = 0.0;
  double gamma_tilde = 0.0;
  bool alpha_valid = true;
  bool tau_in_range = true;
};

CredibleRegion build_region(double alpha, std::size_t n, double g_at_map);

/// Worst-case gap between the surrogate threshold and the exact one:
/// 0 <= gamma_tilde - gamma <= eta_alpha sqrt(n) + n, with
/// eta_alpha = sqrt(16 log(3/alpha)) + sqrt(1/alpha).
struct ErrorBand {
  double eta_alpha = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

ErrorBand theorem2_band(double alpha, std::size_t n);

struct TestOutcome {
  double surrogate_g = 0.0;
  double threshold = 0.0;
  bool rejected = false;
  double alpha = 0.0;
  double margin = 0.0;  // surrogate_g - threshold
  std::string verdict;
};

/// Threshold comparison alone; boundary points (g == gamma_tilde) are
/// members.
TestOutcome classify(const CredibleRegion& region, double surrogate_g);

/// Membership of x in the region under the model's potential. Infeasible
/// points (infinite potential) are outside.
TestOutcome is_member(const CredibleRegion& region, const PosteriorModel& model,
                      const GridImage& x);

/// Knockout hypothesis test: reject feature-absence when the surrogate
/// leaves the region. Identical decision rule to is_member plus the verdict
/// string. Applied to pixel subsets this n-dimensional test overestimates
/// uncertainty (it is conservative).
TestOutcome knockout_test(const CredibleRegion& region,
                          const PosteriorModel& model,
                          const GridImage& surrogate);

/// Parameterized surrogate family for boundary sweeps.
using SurrogateFamily = std::function<GridImage(double)>;

struct SweepResult {
  std::string parameter_name;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  int evaluations = 0;
  double boundary_tolerance = 0.0;
};

/// Bisection from a member point theta0 toward both ends of [lo, hi],
/// locating where the family exits the region. Membership is assumed
/// monotone along each direction and checked at the returned bounds.
SweepResult scalar_sweep(const CredibleRegion& region,
                         const PosteriorModel& model,
                         const SurrogateFamily& family,
                         const std::string& parameter_name, double theta0,
                         double lo, double hi, double tol = 1e-3);

class DegenerateSweepError : public Error {
 public:
  explicit DegenerateSweepError(const std::string& msg) : Error(msg) {}
};

// ---- Surrogate construction helpers ----

struct PixelRect {
  std::size_t x = 0;  // column of the top-left corner
  std::size_t y = 0;  // row of the top-left corner
  std::size_t w = 0;
  std::size_t h = 0;
};

/// Constant fill of a disk, the basic knockout edit.
GridImage fill_disk(const GridImage& base, double center_row, double center_col,
                    double radius, double value);

/// Constant fill of a rectangle.
GridImage fill_rect(const GridImage& base, const PixelRect& roi, double value);

/// Cyclic translation of the contents of a rectangle by whole pixels;
/// vacated pixels take `background`.
GridImage translate_region(const GridImage& base, const PixelRect& roi,
                           long shift_rows, long shift_cols, double background);

}  // namespace uq

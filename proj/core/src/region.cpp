#include "uq/region.hpp"

#include <cmath>

namespace uq {

CredibleRegion build_region(double alpha, std::size_t n, double g_at_map) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidInputError("build_region: alpha must be in (0,1)");
  }
  if (n < 1) throw InvalidInputError("build_region: n must be >= 1");
  if (!std::isfinite(g_at_map)) {
    throw InvalidInputError("build_region: g_at_map must be finite");
  }
  CredibleRegion r;
  r.alpha = alpha;
  r.n = n;
  r.g_at_map = g_at_map;
  const double nd = static_cast<double>(n);
  r.tau_alpha = std::sqrt(16.0 * std::log(3.0 / alpha) / nd);
  r.gamma_tilde = g_at_map + nd * (r.tau_alpha + 1.0);
  r.alpha_valid = alpha > 4.0 * std::exp(-nd / 3.0);
  r.tau_in_range = r.tau_alpha <= 2.0;
  return r;
}

ErrorBand theorem2_band(double alpha, std::size_t n) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidInputError("theorem2_band: alpha must be in (0,1)");
  }
  if (n < 1) throw InvalidInputError("theorem2_band: n must be >= 1");
  ErrorBand b;
  b.eta_alpha = std::sqrt(16.0 * std::log(3.0 / alpha)) + std::sqrt(1.0 / alpha);
  b.lower = 0.0;
  b.upper = b.eta_alpha * std::sqrt(static_cast<double>(n)) +
            static_cast<double>(n);
  return b;
}

TestOutcome classify(const CredibleRegion& region, double surrogate_g) {
  TestOutcome out;
  out.surrogate_g = surrogate_g;
  out.threshold = region.gamma_tilde;
  out.alpha = region.alpha;
  out.rejected = surrogate_g > region.gamma_tilde;
  out.margin = surrogate_g - region.gamma_tilde;
  const double conf = 100.0 * (1.0 - region.alpha);
  out.verdict = out.rejected
                    ? "reject at " + std::to_string(conf) + "% confidence"
                    : "fail to reject";
  return out;
}

TestOutcome is_member(const CredibleRegion& region, const PosteriorModel& model,
                      const GridImage& x) {
  require_shape(x, model.height, model.width, "is_member");
  return classify(region, eval_potential(model, x).total);
}

TestOutcome knockout_test(const CredibleRegion& region,
                          const PosteriorModel& model,
                          const GridImage& surrogate) {
  return is_member(region, model, surrogate);
}

namespace {

bool member_at(const CredibleRegion& region, const PosteriorModel& model,
               const SurrogateFamily& family, double theta, int& evals) {
  ++evals;
  return !is_member(region, model, family(theta)).rejected;
}

}  // namespace

SweepResult scalar_sweep(const CredibleRegion& region,
                         const PosteriorModel& model,
                         const SurrogateFamily& family,
                         const std::string& parameter_name, double theta0,
                         double lo, double hi, double tol) {
  if (!(lo <= theta0 && theta0 <= hi)) {
    throw InvalidInputError("scalar_sweep: theta0 must lie in [lo, hi]");
  }
  if (!(tol > 0.0)) throw InvalidInputError("scalar_sweep: tol must be > 0");

  int evals = 0;
  if (!member_at(region, model, family, theta0, evals)) {
    throw InvalidInputError("scalar_sweep: family(theta0) is outside the region");
  }

  constexpr int kMaxBisect = 60;

  // Boundary between a member point `inside` and a non-member `outside`.
  auto bisect = [&](double inside, double outside) {
    for (int i = 0; i < kMaxBisect && std::abs(outside - inside) > tol; ++i) {
      const double mid = 0.5 * (inside + outside);
      if (member_at(region, model, family, mid, evals)) {
        inside = mid;
      } else {
        outside = mid;
      }
    }
    return inside;
  };

  double upper = hi;
  if (!member_at(region, model, family, hi, evals)) {
    upper = bisect(theta0, hi);
  }
  double lower = lo;
  if (!member_at(region, model, family, lo, evals)) {
    lower = bisect(theta0, lo);
  }

  // Monotone-membership check at the returned bounds.
  if (!member_at(region, model, family, upper, evals) ||
      !member_at(region, model, family, lower, evals)) {
    throw DegenerateSweepError(
        "scalar_sweep: non-monotone membership at the returned bounds");
  }
  if (upper < hi && member_at(region, model, family, upper + tol, evals)) {
    throw DegenerateSweepError(
        "scalar_sweep: membership does not end at the upper bound");
  }
  if (lower > lo && member_at(region, model, family, lower - tol, evals)) {
    throw DegenerateSweepError(
        "scalar_sweep: membership does not end at the lower bound");
  }

  SweepResult res;
  res.parameter_name = parameter_name;
  res.lower_bound = lower;
  res.upper_bound = upper;
  res.evaluations = evals;
  res.boundary_tolerance = tol;
  return res;
}

GridImage fill_disk(const GridImage& base, double center_row, double center_col,
                    double radius, double value) {
  if (!(radius >= 0.0)) throw InvalidInputError("fill_disk: radius must be >= 0");
  GridImage out = base;
  const double r2 = radius * radius;
  for (std::size_t r = 0; r < out.height; ++r) {
    for (std::size_t c = 0; c < out.width; ++c) {
      const double dr = static_cast<double>(r) - center_row;
      const double dc = static_cast<double>(c) - center_col;
      if (dr * dr + dc * dc <= r2) out.at(r, c) = value;
    }
  }
  return out;
}

GridImage fill_rect(const GridImage& base, const PixelRect& roi, double value) {
  if (roi.y + roi.h > base.height || roi.x + roi.w > base.width) {
    throw InvalidInputError("fill_rect: roi outside the image");
  }
  GridImage out = base;
  for (std::size_t r = roi.y; r < roi.y + roi.h; ++r) {
    for (std::size_t c = roi.x; c < roi.x + roi.w; ++c) out.at(r, c) = value;
  }
  return out;
}

GridImage translate_region(const GridImage& base, const PixelRect& roi,
                           long shift_rows, long shift_cols, double background) {
  if (roi.y + roi.h > base.height || roi.x + roi.w > base.width) {
    throw InvalidInputError("translate_region: roi outside the image");
  }
  GridImage out = fill_rect(base, roi, background);
  for (std::size_t r = roi.y; r < roi.y + roi.h; ++r) {
    for (std::size_t c = roi.x; c < roi.x + roi.w; ++c) {
      const long nr = static_cast<long>(r) + shift_rows;
      const long nc = static_cast<long>(c) + shift_cols;
      if (nr < 0 || nc < 0 || nr >= static_cast<long>(base.height) ||
          nc >= static_cast<long>(base.width)) {
        continue;  // shifted outside the image, content is dropped
      }
      out.at(static_cast<std::size_t>(nr), static_cast<std::size_t>(nc)) =
          base.at(r, c);
    }
  }
  return out;
}

}  // namespace uq

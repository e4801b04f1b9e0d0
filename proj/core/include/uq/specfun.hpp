#pragma once

namespace uq {

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
/// Series expansion for x < a+1, continued fraction otherwise.
double reg_gamma_p(double a, double x);

/// Upper tail Q(a, x) = 1 - P(a, x).
double reg_gamma_q(double a, double x);

/// Quantile of Gamma(shape, scale 1): the x with P(shape, x) = p, found by
/// bracketed Newton from a Wilson-Hilferty start, to |P(a,x) - p| <= 1e-10.
double gamma_quantile(double shape, double p);

/// Standard normal quantile (Acklam's rational approximation with one
/// Halley refinement step).
double normal_quantile(double p);

}  // namespace uq

#include "uq/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "uq/errors.hpp"

namespace uq {

namespace {

// The series needs O(sqrt(a)) terms when x is near a; sized for a up to 1e5.
constexpr int kMaxSeriesIters = 200000;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Lower-tail series: P(a,x) = x^a e^{-x} / Gamma(a) * sum_k x^k / (a)_{k+1}.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < kMaxSeriesIters; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw NumericError("reg_gamma_p: series did not converge");
}

// Upper-tail continued fraction (modified Lentz).
double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxSeriesIters; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) {
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw NumericError("reg_gamma_q: continued fraction did not converge");
}

}  // namespace

double reg_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw InvalidInputError("reg_gamma_p: a must be > 0");
  if (x < 0.0) throw InvalidInputError("reg_gamma_p: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_contfrac(a, x);
}

double reg_gamma_q(double a, double x) {
  if (!(a > 0.0)) throw InvalidInputError("reg_gamma_q: a must be > 0");
  if (x < 0.0) throw InvalidInputError("reg_gamma_q: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_contfrac(a, x);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidInputError("normal_quantile: p must be in (0,1)");
  }
  // Acklam coefficients.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= phigh) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley step against the exact erfc.
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
  x -= u / (1.0 + x * u / 2.0);
  return x;
}

double gamma_quantile(double shape, double p) {
  if (!(shape > 0.0)) throw InvalidInputError("gamma_quantile: shape must be > 0");
  if (!(p >= 0.0 && p < 1.0)) {
    throw InvalidInputError("gamma_quantile: p must be in [0,1)");
  }
  if (p == 0.0) return 0.0;

  // Wilson-Hilferty start.
  const double z = normal_quantile(p);
  const double t = 1.0 - 1.0 / (9.0 * shape) + z / (3.0 * std::sqrt(shape));
  double x = shape * t * t * t;
  if (!(x > 0.0) || !std::isfinite(x)) x = shape;

  // Establish a bracket around the root.
  double lo = 0.0, hi = x;
  while (reg_gamma_p(shape, hi) < p) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw NumericError("gamma_quantile: bracket expansion failed");
  }
  if (reg_gamma_p(shape, x) > p) {
    lo = 0.0;
  }

  constexpr double tol = 1e-10;  // in the regularized-gamma value
  const double lg = std::lgamma(shape);
  double f = reg_gamma_p(shape, x) - p;
  for (int i = 0; i < 200; ++i) {
    if (std::abs(f) <= tol) return x;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double logpdf = (shape - 1.0) * std::log(x) - x - lg;
    double step = f / std::exp(logpdf);
    double next = x - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // fall back to bisection
    x = next;
    f = reg_gamma_p(shape, x) - p;
  }
  throw NumericError("gamma_quantile: Newton iteration did not converge");
}

}  // namespace uq

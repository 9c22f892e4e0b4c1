#include "rdd/qfunc.hpp"

#include <cmath>

#include "rdd/errors.hpp"

namespace rdd {

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

namespace {

// Rational approximation to the standard normal quantile (relative error
// below 1.15e-9 everywhere), used as the seed for a Newton polish.
double norm_quantile_seed(double p) {
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
  const double plow = 0.02425;
  if (p < plow) {
    double q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p <= 1 - plow) {
    double q = p - 0.5, r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  }
  double q = std::sqrt(-2 * std::log(1 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
}

}  // namespace

double q_inverse(double eps) {
  if (!(eps > 0) || !(eps < 1))
    fail(errc::invalid_argument, "q_inverse needs an argument in (0, 1)");
  // Q(x) = eps <=> Phi(x) = 1 - eps.
  double x = norm_quantile_seed(1 - eps);
  const double inv_sqrt2pi = 0.3989422804014326779;
  for (int i = 0; i < 4; ++i) {
    double err = q_function(x) - eps;
    double pdf = inv_sqrt2pi * std::exp(-0.5 * x * x);
    if (pdf <= 0) break;
    double step = err / pdf;  // dQ/dx = -pdf
    x += step;
    if (std::fabs(step) < 1e-15 * std::max(1.0, std::fabs(x))) break;
  }
  return x;
}

}  // namespace rdd

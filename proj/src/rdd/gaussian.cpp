#include "rdd/gaussian.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "rdd/format.hpp"
#include "rdd/qfunc.hpp"

namespace rdd {

namespace {

// Regularized lower incomplete gamma P(a, x) by series expansion
// (effective for x < a + 1).
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double term = sum;
  for (int i = 0; i < 10000000; ++i) {
    ap += 1;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16)
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  fail(errc::solver_failure, "incomplete gamma series did not converge");
}

// Regularized upper incomplete gamma Q(a, x) by modified Lentz continued
// fraction (effective for x >= a + 1).
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1 - a;
  double c = 1 / tiny;
  double d = 1 / b;
  double h = d;
  for (int i = 1; i < 10000000; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1) < 1e-16)
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  fail(errc::solver_failure, "incomplete gamma continued fraction did not converge");
}

double gamma_q(double a, double x) {
  if (x < 0 || a <= 0) fail(errc::invalid_argument, "incomplete gamma domain");
  if (x == 0) return 1;
  if (x < a + 1) return 1 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi2_log_pdf(double dof, double t) {
  double a = dof / 2;
  return -std::log(2.0) + (a - 1) * std::log(t / 2) - t / 2 - std::lgamma(a);
}

}  // namespace

GaussianSpec validate_gaussian_spec(double variance, double distortion, double eps) {
  if (!(variance > 0) || !std::isfinite(variance))
    fail(errc::invalid_argument, "variance must be positive");
  if (!(distortion > 0) || !(distortion <= variance))
    fail(errc::d_out_of_range, "distortion must sit in (0, variance]");
  if (!(eps > 0) || !(eps < 1)) fail(errc::invalid_argument, "eps must sit in (0, 1)");
  return GaussianSpec{variance, distortion, eps};
}

double gaussian_rdf(double variance, double distortion) {
  if (!(variance > 0)) fail(errc::invalid_argument, "variance must be positive");
  if (!(distortion > 0) || !(distortion <= variance))
    fail(errc::d_out_of_range, "distortion must sit in (0, variance]");
  return 0.5 * std::log(variance / distortion);
}

double gaussian_exponent(double variance, double distortion, double rate) {
  double rdf = gaussian_rdf(variance, distortion);
  double dr = rate - rdf;
  if (dr < -1e-12) fail(errc::rate_below_rdf, "rate below the distortion-rate function");
  if (dr < 0) dr = 0;
  return (std::expm1(2 * dr) - 2 * dr) / 2;
}

double chi2_tail(std::int64_t dof, double threshold) {
  if (dof < 1) fail(errc::invalid_argument, "degrees of freedom must be >= 1");
  if (threshold < 0) return 1;
  return gamma_q(static_cast<double>(dof) / 2, threshold / 2);
}

double chi2_tail_inverse(std::int64_t dof, double eps) {
  if (dof < 1) fail(errc::invalid_argument, "degrees of freedom must be >= 1");
  if (!(eps > 0) || !(eps < 1)) fail(errc::invalid_argument, "eps must sit in (0, 1)");
  const double n = static_cast<double>(dof);

  // Wilson-Hilferty start, then bracketed Newton on the tail.
  double z = q_inverse(eps);
  double w = 1 - 2 / (9 * n) + z * std::sqrt(2 / (9 * n));
  double t = n * w * w * w;
  if (!(t > 0)) t = n * 1e-8;

  double lo = 0, hi = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    double f = chi2_tail(dof, t) - eps;
    if (f > 0)
      lo = std::max(lo, t);  // tail too heavy: threshold too small
    else
      hi = std::min(hi, t);
    if (std::fabs(f) <= 1e-13 * eps) return t;
    double step = f / std::exp(chi2_log_pdf(n, t));
    double t_new = t + step;
    if (!(t_new > lo) || !(t_new < hi) || !std::isfinite(t_new))
      t_new = std::isfinite(hi) ? 0.5 * (lo + hi) : t * 2;
    if (std::fabs(t_new - t) <= 1e-14 * std::max(1.0, t)) return t_new;
    t = t_new;
  }
  fail(errc::no_convergence, "chi-square inverse did not converge");
}

namespace {

// Radius factor 1 + alpha_n with the sphere-leaving probability exactly eps.
double radius_factor(const GaussianSpec& spec, std::int64_t n) {
  if (n < 2) fail(errc::invalid_argument, "blocklength must be >= 2");
  double beta = chi2_tail_inverse(n, spec.eps);
  return beta / static_cast<double>(n);
}

}  // namespace

double gaussian_achievable_rate(const GaussianSpec& spec, std::int64_t n, double c0) {
  double factor = radius_factor(spec, n);
  double arg = spec.variance * factor / spec.distortion;
  if (!(arg > 0)) fail(errc::d_out_of_range, "calibrated sphere sits inside the distortion ball");
  double nn = static_cast<double>(n);
  return 0.5 * std::log(arg) + (5 / (2 * nn)) * std::log(nn) + c0 / nn;
}

double gaussian_normal_approx(const GaussianSpec& spec, std::int64_t n) {
  if (n < 1) fail(errc::invalid_argument, "blocklength must be >= 1");
  double rdf = gaussian_rdf(spec.variance, spec.distortion);
  return rdf + std::sqrt(1.0 / (2 * static_cast<double>(n))) * q_inverse(spec.eps);
}

double gaussian_converse_rate(const GaussianSpec& spec, std::int64_t n) {
  double factor = radius_factor(spec, n);
  double arg = spec.variance * factor / spec.distortion;
  if (!(arg > 0)) fail(errc::d_out_of_range, "calibrated sphere sits inside the distortion ball");
  return 0.5 * std::log(arg);
}

GaussianCurve gaussian_curve(const GaussianSpec& spec, std::span<const std::int64_t> n_list,
                             double c0) {
  GaussianCurve curve;
  curve.spec = spec;
  for (std::int64_t n : n_list) {
    GaussianRecord rec;
    rec.n = n;
    rec.r_normal = gaussian_normal_approx(spec, n);
    rec.r_achievable = gaussian_achievable_rate(spec, n, c0);
    rec.r_converse = gaussian_converse_rate(spec, n);
    curve.records.push_back(rec);
  }
  return curve;
}

std::string gaussian_curve_csv(const GaussianCurve& curve) {
  std::string out = "#schema=gaussian_curve.v1\n";
  out += "n,r_normal_nats,r_achievable_nats,r_converse_nats,eps\n";
  for (const GaussianRecord& rec : curve.records) {
    out += std::to_string(rec.n);
    out += ',';
    out += fmt9(rec.r_normal);
    out += ',';
    out += fmt9(rec.r_achievable);
    out += ',';
    out += fmt9(rec.r_converse);
    out += ',';
    out += fmt9(curve.spec.eps);
    out += '\n';
  }
  return out;
}

}  // namespace rdd

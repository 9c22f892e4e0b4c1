#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rdd/errors.hpp"

namespace rdd {

// Quadratic-distortion Gaussian problem instance.
struct GaussianSpec {
  double variance = 1;    // sigma^2
  double distortion = 0;  // D, same units as variance
  double eps = 0;         // excess-distortion probability target
};

// Validates 0 < D <= variance and 0 < eps < 1.
GaussianSpec validate_gaussian_spec(double variance, double distortion, double eps);

// (1/2) ln(variance / D).
double gaussian_rdf(double variance, double distortion);

// Excess-distortion exponent at rate R >= RDF:
// (e^{2 dR} - 1 - 2 dR) / 2 with dR = R - RDF.
double gaussian_exponent(double variance, double distortion, double rate);

// Upper tail of a chi-square with `dof` degrees of freedom, and its
// inverse in the threshold argument.  Relative error <= 1e-10.
double chi2_tail(std::int64_t dof, double threshold);
double chi2_tail_inverse(std::int64_t dof, double eps);

// Sphere-covering achievable rate at blocklength n: the sphere radius is
// calibrated so the source leaves it with probability exactly eps, plus
// the (5/2n) ln n covering overhead.  c0/n is an unresolved additive
// constant, default 0, kept explicit.
double gaussian_achievable_rate(const GaussianSpec& spec, std::int64_t n, double c0 = 0);

// Two-term approximation: RDF + sqrt(1/2n) Qinv(eps).
double gaussian_normal_approx(const GaussianSpec& spec, std::int64_t n);

// Exact sphere-leaving converse: same calibrated radius, no covering
// overhead.
double gaussian_converse_rate(const GaussianSpec& spec, std::int64_t n);

struct GaussianRecord {
  std::int64_t n = 0;
  double r_normal = 0;
  double r_achievable = 0;
  double r_converse = 0;
};

struct GaussianCurve {
  GaussianSpec spec;
  std::vector<GaussianRecord> records;
};

GaussianCurve gaussian_curve(const GaussianSpec& spec, std::span<const std::int64_t> n_list,
                             double c0 = 0);

// CSV per the fixed schema: n,r_normal_nats,r_achievable_nats,r_converse_nats,eps
// with a leading #schema= comment.
std::string gaussian_curve_csv(const GaussianCurve& curve);

}  // namespace rdd

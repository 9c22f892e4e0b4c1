#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdd/rd_solver.hpp"

namespace rdd {

// Variance of -log p(X): second-order coefficient of the lossless code
// length distribution.
double lossless_dispersion(const Source& p);

struct TiltedDispersion {
  double v = 0;               // Var of the per-letter rate function
  double rate = 0;            // E of the same function; equals R(p, D)
  std::vector<double> f;      // per-letter values, nats
  double lambda = 0;
};

// Dispersion from the tilted per-letter rate function
// f(x) = -log sum_xhat qhat(xhat) exp(-lambda (d(x, xhat) - D))
// evaluated at the optimal output marginal and slope.
TiltedDispersion dispersion_via_tilted(const Source& p, const Distortion& dist,
                                       double D, const RdOptions& opts = RdOptions{1e-12, 1e-10, 1000000, 200});

struct DerivativeDispersion {
  double v = 0;
  std::vector<double> r_prime_deltas;  // directional derivatives minus letter 0's
  double err_estimate = 0;             // extrapolation error proxy
};

// Dispersion as the source-letter variance of the simplex-directional
// derivatives of q -> R(q, D), via central differences with one
// Richardson extrapolation step.  Requires step < min_i p_i.
DerivativeDispersion dispersion_via_derivatives(const Source& p, const Distortion& dist,
                                                double D, double step = 1e-4,
                                                const RdOptions& opts = RdOptions{1e-12, 1e-10, 1000000, 200});

struct ExponentDispersion {
  double v = 0;
  bool jump_detected = false;  // a probed target was infeasible
  double fit_residual = 0;     // relative residual of the quadratic fit
};

// Dispersion recovered from the local shape of the excess-distortion
// exponent: F(R(p,D) + delta) ~ delta^2 / (2V).  Fits a delta^2 term with
// a delta^3 nuisance term over the probe offsets.
ExponentDispersion dispersion_via_exponent(const Source& p, const Distortion& dist,
                                           double D, std::span<const double> deltas,
                                           int resolution = 200);

struct CurvatureFit {
  double v = 0;         // 1 / (2 a) from F(delta) ~ a delta^2 + b delta^3
  double residual = 0;  // relative fit residual
};

// The quadratic-with-cubic-nuisance fit used by the exponent route,
// applicable to F values from any exponent curve.
CurvatureFit curvature_fit(std::span<const double> deltas, std::span<const double> values);

// Largest distortion level below which the optimal backward channel is
// additive (the reproduction-conditional noise pmf does not depend on the
// reproduction letter).  Only meaningful for difference distortions;
// returns trivial_distortion when additivity holds at every level.
double estimate_d0(const Source& p, const Distortion& dist, double tv_tol = 1e-6);

struct DispersionOptions {
  double step = 1e-4;
  std::vector<double> deltas = {0.01, 0.02, 0.04};
  bool with_exponent = false;
  int exponent_resolution = 200;
  bool with_d0 = false;
};

struct DispersionReport {
  double distortion = 0;
  double rate = 0;
  double v_tilted = 0;
  double v_derivative = 0;
  std::optional<double> v_exponent;
  std::string exponent_error;       // failure name when v_exponent is absent
  bool jump_suspected = false;
  double max_pairwise_rel_gap = 0;  // across populated routes, floored at 1e-9
  std::vector<double> f_values;
  std::vector<double> r_prime_deltas;
  std::optional<double> d0_estimate;
};

DispersionReport dispersion_report(const Source& p, const Distortion& dist, double D,
                                   const DispersionOptions& options = {});

}  // namespace rdd

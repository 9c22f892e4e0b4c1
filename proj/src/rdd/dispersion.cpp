#include "rdd/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rdd/exponent.hpp"

namespace rdd {

namespace {

double variance_under(const Source& p, std::span<const double> g) {
  double mean = 0;
  for (std::size_t i = 0; i < p.size(); ++i) mean += p[i] * g[i];
  double var = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double c = g[i] - mean;
    var += p[i] * c * c;
  }
  return var;
}

}  // namespace

double lossless_dispersion(const Source& p) {
  std::vector<double> g(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) g[i] = -std::log(p[i]);
  return variance_under(p, g);
}

TiltedDispersion dispersion_via_tilted(const Source& p, const Distortion& dist,
                                       double D, const RdOptions& opts) {
  RdSolution sol = rd_at_distortion_pmf(p.probs, dist, D, opts, nullptr);
  const std::size_t K = dist.num_repro_letters;
  TiltedDispersion out;
  out.lambda = sol.lambda;
  out.f.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    double s = 0;
    for (std::size_t j = 0; j < K; ++j)
      if (sol.repro_marginal[j] > 0)
        s += sol.repro_marginal[j] * std::exp(-sol.lambda * (dist.at(i, j) - D));
    out.f[i] = -std::log(s);
  }
  double mean = 0;
  for (std::size_t i = 0; i < p.size(); ++i) mean += p[i] * out.f[i];
  out.rate = mean;
  if (std::fabs(mean - sol.rate) > 1e-6) {
    std::ostringstream os;
    os << "tilted rate identity violated: E[f] = " << mean << " vs rate " << sol.rate;
    fail(errc::solver_failure, os.str());
  }
  out.v = variance_under(p, out.f);
  return out;
}

DerivativeDispersion dispersion_via_derivatives(const Source& p, const Distortion& dist,
                                                double D, double step,
                                                const RdOptions& opts) {
  const std::size_t L = p.size();
  double pmin = *std::min_element(p.probs.begin(), p.probs.end());
  if (!(step > 0) || step >= pmin)
    fail(errc::invalid_argument, "derivative step must sit in (0, min_i p_i)");

  RdfCache cache;
  auto rate_at = [&](const std::vector<double>& q) {
    return rdf_value(q, dist, D, &cache, opts);
  };

  // Central difference along e_i - e_0 at two step sizes, then one
  // Richardson step: (4 A(h/2) - A(h)) / 3 cancels the h^2 term.
  auto directional = [&](std::size_t i, double h) {
    std::vector<double> q(p.probs);
    q[i] += h;
    q[0] -= h;
    double up = rate_at(q);
    q = p.probs;
    q[i] -= h;
    q[0] += h;
    double dn = rate_at(q);
    return (up - dn) / (2 * h);
  };

  DerivativeDispersion out;
  out.r_prime_deltas.assign(L, 0.0);
  out.err_estimate = 0;
  for (std::size_t i = 1; i < L; ++i) {
    double a_h = directional(i, step);
    double a_h2 = directional(i, step / 2);
    double extrap = (4 * a_h2 - a_h) / 3;
    out.r_prime_deltas[i] = extrap;
    out.err_estimate = std::max(out.err_estimate, std::fabs(extrap - a_h2));
  }
  out.v = variance_under(p, out.r_prime_deltas);
  return out;
}

ExponentDispersion dispersion_via_exponent(const Source& p, const Distortion& dist,
                                           double D, std::span<const double> deltas,
                                           int resolution) {
  if (deltas.empty()) fail(errc::invalid_argument, "need at least one probe offset");
  for (double d : deltas)
    if (!(d > 0)) fail(errc::invalid_argument, "probe offsets must be positive");

  ExponentOptions eopts;
  eopts.resolution = resolution;
  ExponentSolver solver(p, dist, D, eopts);
  double r0 = solver.rate_of(p.probs);

  ExponentDispersion out;
  std::vector<double> f_vals(deltas.size());
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    try {
      f_vals[k] = solver.solve(r0 + deltas[k]).value;
    } catch (const error& e) {
      if (e.code() == errc::infeasible) {
        // Rate cannot be pushed above R(p, D): zero-dispersion jump.
        out.v = 0;
        out.jump_detected = true;
        return out;
      }
      throw;
    }
  }

  CurvatureFit fit = curvature_fit(deltas, f_vals);
  out.fit_residual = fit.residual;
  if (fit.residual > 0.05)
    fail(errc::poor_fit, "exponent probes do not follow a quadratic law");
  out.v = fit.v;
  return out;
}

CurvatureFit curvature_fit(std::span<const double> deltas,
                           std::span<const double> values) {
  if (deltas.empty() || deltas.size() != values.size())
    fail(errc::invalid_argument, "need matching, nonempty probe and value lists");
  // Least squares F ~ a delta^2 + b delta^3 (the cubic soaks up the
  // leading skewness bias of the finite probes).
  double s22 = 0, s23 = 0, s33 = 0, b2 = 0, b3 = 0;
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    double d2 = deltas[k] * deltas[k];
    double d3 = d2 * deltas[k];
    s22 += d2 * d2;
    s23 += d2 * d3;
    s33 += d3 * d3;
    b2 += values[k] * d2;
    b3 += values[k] * d3;
  }
  // Rank test must be scale-free: det ~ delta^10 underflows any absolute
  // threshold long before the probe geometry actually degenerates.
  double a, det = s22 * s33 - s23 * s23;
  if (deltas.size() == 1 || std::fabs(det) < 1e-12 * s22 * s33) {
    a = b2 / s22;  // single probe: pure quadratic
  } else {
    a = (b2 * s33 - b3 * s23) / det;
  }
  if (!(a > 0)) fail(errc::poor_fit, "quadratic coefficient of the exponent fit is not positive");

  double b = (deltas.size() == 1) ? 0 : (s22 * b3 - s23 * b2) / det;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    double fit = a * deltas[k] * deltas[k] + b * deltas[k] * deltas[k] * deltas[k];
    ss_res += (values[k] - fit) * (values[k] - fit);
    ss_tot += values[k] * values[k];
  }
  CurvatureFit out;
  out.v = 1.0 / (2 * a);
  out.residual = ss_tot > 0 ? std::sqrt(ss_res / ss_tot) : 0;
  return out;
}

double estimate_d0(const Source& p, const Distortion& dist, double tv_tol) {
  if (dist.kind == DistortionKind::general)
    fail(errc::invalid_argument, "additivity threshold needs a difference distortion");
  const std::size_t L = p.size();
  const double d_triv = trivial_distortion(p.probs, dist);
  RdOptions opts{1e-10, 1e-8, 1000000, 200};

  // Additive <=> the backward noise pmf nu_j(z) = P(X = j - z | Xhat = j)
  // is the same for every reproduction letter carrying mass.
  auto additive_at = [&](double D) {
    RdSolution sol;
    try {
      sol = rd_at_distortion_pmf(p.probs, dist, D, opts, nullptr);
    } catch (const error& e) {
      if (e.code() != errc::no_convergence) throw;
      // Ties at the zero-rate boundary flatten the Lagrangian and stall
      // the alternating solve; a looser gap still separates noise pmfs
      // at the tv_tol scale.
      RdOptions loose{1e-7, 1e-6, 200000, 200};
      sol = rd_at_distortion_pmf(p.probs, dist, D, loose, nullptr);
    }
    std::vector<std::size_t> active;
    for (std::size_t j = 0; j < L; ++j)
      if (sol.repro_marginal[j] > 1e-9) active.push_back(j);
    if (active.size() < 2) return false;
    std::vector<std::vector<double>> noise;
    for (std::size_t j : active) {
      std::vector<double> nu(L);
      for (std::size_t z = 0; z < L; ++z) {
        std::size_t x = (j + L - z) % L;
        nu[z] = p[x] * sol.channel[x * L + j] / sol.repro_marginal[j];
      }
      noise.push_back(std::move(nu));
    }
    for (std::size_t t = 1; t < noise.size(); ++t) {
      double tv = 0;
      for (std::size_t z = 0; z < L; ++z) tv += std::fabs(noise[t][z] - noise[0][z]);
      if (tv / 2 > tv_tol) return false;
    }
    return true;
  };

  double lo = std::min(1e-6, d_triv / 4);
  if (!additive_at(lo)) return 0;
  // Stay a hair inside the zero-rate boundary: solves exactly on it are
  // ill-conditioned and the threshold is only resolved to 1e-9 anyway.
  double hi = d_triv * (1 - 1e-6);
  if (additive_at(hi)) return d_triv;
  while (hi - lo > 1e-9) {
    double mid = 0.5 * (lo + hi);
    if (additive_at(mid))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

DispersionReport dispersion_report(const Source& p, const Distortion& dist, double D,
                                   const DispersionOptions& options) {
  DispersionReport rep;
  rep.distortion = D;

  TiltedDispersion tilted = dispersion_via_tilted(p, dist, D);
  rep.rate = tilted.rate;
  rep.v_tilted = tilted.v;
  rep.f_values = std::move(tilted.f);

  double step = options.step;
  double pmin = *std::min_element(p.probs.begin(), p.probs.end());
  if (step >= pmin) step = pmin / 8;
  DerivativeDispersion der = dispersion_via_derivatives(p, dist, D, step);
  rep.v_derivative = der.v;
  rep.r_prime_deltas = std::move(der.r_prime_deltas);

  if (options.with_exponent) {
    // The quadratic regime F ~ delta^2 / (2V) has width proportional to
    // V, so default probes are rescaled to the measured curvature;
    // caller-supplied offsets are used as given.
    std::vector<double> deltas = options.deltas;
    if (deltas == DispersionOptions{}.deltas && rep.v_tilted > 0) {
      double scale = std::clamp(rep.v_tilted / 0.6, 0.02, 1.0);
      for (double& d : deltas) d *= scale;
    }
    try {
      ExponentDispersion ex = dispersion_via_exponent(p, dist, D, deltas,
                                                      options.exponent_resolution);
      rep.v_exponent = ex.v;
      rep.jump_suspected = rep.jump_suspected || ex.jump_detected;
    } catch (const error& e) {
      rep.exponent_error = errc_name(e.code());
    }
  }

  // Probe the dispersion's continuity in D: a >10% move across a 0.1%
  // distortion wiggle flags a suspected jump.
  const double d_triv = trivial_distortion(p.probs, dist);
  double d_lo = D * (1 - 1e-3), d_hi = D * (1 + 1e-3);
  if (d_lo > 0 && d_hi < d_triv) {
    double v_lo = dispersion_via_tilted(p, dist, d_lo).v;
    double v_hi = dispersion_via_tilted(p, dist, d_hi).v;
    double scale = std::max({std::fabs(rep.v_tilted), std::fabs(v_lo), std::fabs(v_hi), 1e-9});
    if (std::fabs(v_hi - v_lo) > 0.1 * scale) rep.jump_suspected = true;
  }

  std::vector<double> routes{rep.v_tilted, rep.v_derivative};
  if (rep.v_exponent) routes.push_back(*rep.v_exponent);
  double gap = 0;
  for (std::size_t a = 0; a < routes.size(); ++a)
    for (std::size_t b = a + 1; b < routes.size(); ++b) {
      double denom = std::max({std::fabs(routes[a]), std::fabs(routes[b]), 1e-9});
      gap = std::max(gap, std::fabs(routes[a] - routes[b]) / denom);
    }
  rep.max_pairwise_rel_gap = gap;

  if (options.with_d0 && dist.kind != DistortionKind::general)
    rep.d0_estimate = estimate_d0(p, dist);

  return rep;
}

}  // namespace rdd

#include "rdd/rd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

namespace rdd {

namespace {

constexpr double kPruneMass = 1e-12;

struct SlopeProblem {
  std::span<const double> pmf;
  const Distortion* dist;
  std::vector<std::size_t> rows;      // indices with positive mass
  std::vector<double> weights;       // pmf restricted to rows
};

SlopeProblem make_problem(std::span<const double> pmf, const Distortion& dist) {
  if (pmf.size() != dist.num_source_letters)
    fail(errc::dimension_mismatch, "pmf length does not match distortion rows");
  SlopeProblem pb;
  pb.pmf = pmf;
  pb.dist = &dist;
  for (std::size_t x = 0; x < pmf.size(); ++x) {
    if (pmf[x] < 0 || !std::isfinite(pmf[x]))
      fail(errc::non_positive_mass, "pmf entries must be finite and >= 0");
    if (pmf[x] > 0) {
      pb.rows.push_back(x);
      pb.weights.push_back(pmf[x]);
    }
  }
  if (pb.rows.empty()) fail(errc::non_positive_mass, "pmf has no mass");
  return pb;
}

// Zero-rate point: all mass on the reproduction minimizing E[d].
RdSolution zero_rate_solution(const SlopeProblem& pb) {
  const Distortion& dist = *pb.dist;
  const std::size_t K = dist.num_repro_letters;
  std::size_t best = 0;
  double best_e = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < K; ++j) {
    double e = 0;
    for (std::size_t t = 0; t < pb.rows.size(); ++t)
      e += pb.weights[t] * dist.at(pb.rows[t], j);
    if (e < best_e - 1e-15) {
      best_e = e;
      best = j;
    }
  }
  RdSolution sol;
  sol.rate = 0;
  sol.distortion = best_e;
  sol.lambda = 0;
  sol.channel.assign(pb.pmf.size() * K, 0);
  for (std::size_t x = 0; x < pb.pmf.size(); ++x) sol.channel[x * K + best] = 1;
  sol.repro_marginal.assign(K, 0);
  sol.repro_marginal[best] = 1;
  sol.dual_value = 0;
  return sol;
}

// Alternating minimization over the output marginal at fixed slope.
// The dual bound: optimum >= current dual_value - log(max_j c_j), where
// c_j is the multiplicative update factor for output letter j.
RdSolution solve_slope(const SlopeProblem& pb, double lambda, double gap_tol,
                       int max_iters, const std::vector<double>* r_init) {
  const Distortion& dist = *pb.dist;
  const std::size_t K = dist.num_repro_letters;
  const std::size_t M = pb.rows.size();

  if (lambda == 0) return zero_rate_solution(pb);
  if (!(lambda > 0) || !std::isfinite(lambda))
    fail(errc::invalid_argument, "slope must be finite and >= 0");

  // exp(-lambda d) restricted to active rows.
  std::vector<double> e(M * K);
  for (std::size_t t = 0; t < M; ++t)
    for (std::size_t j = 0; j < K; ++j)
      e[t * K + j] = std::exp(-lambda * dist.at(pb.rows[t], j));

  std::vector<double> r(K, 1.0 / static_cast<double>(K));
  if (r_init && r_init->size() == K) {
    double s = 0;
    for (std::size_t j = 0; j < K; ++j) {
      r[j] = std::max((*r_init)[j], 1e-6);
      s += r[j];
    }
    for (double& v : r) v /= s;
  }

  std::vector<double> z(M), c(K);
  int iter = 0;
  bool converged = false;
  auto sweep = [&](int budget) {
    for (int k = 0; k < budget; ++k) {
      ++iter;
      for (std::size_t t = 0; t < M; ++t) {
        double s = 0;
        for (std::size_t j = 0; j < K; ++j) s += r[j] * e[t * K + j];
        z[t] = s;
      }
      std::fill(c.begin(), c.end(), 0.0);
      for (std::size_t t = 0; t < M; ++t) {
        double w = pb.weights[t] / z[t];
        for (std::size_t j = 0; j < K; ++j) c[j] += w * e[t * K + j];
      }
      double cmax = 0;
      for (std::size_t j = 0; j < K; ++j)
        if (r[j] > 0) cmax = std::max(cmax, c[j]);
      double gap = std::log(cmax);
      double rsum = 0;
      for (std::size_t j = 0; j < K; ++j) {
        r[j] *= c[j];
        rsum += r[j];
      }
      for (double& v : r) v /= rsum;
      if (gap <= gap_tol) {
        converged = true;
        return;
      }
    }
  };

  sweep(max_iters);
  if (converged) {
    // Drop vanishing output letters and re-polish on the reduced support.
    bool pruned = false;
    for (double& v : r)
      if (v < kPruneMass && v != 0) {
        v = 0;
        pruned = true;
      }
    if (pruned) {
      double s = 0;
      for (double v : r) s += v;
      for (double& v : r) v /= s;
      converged = false;
      sweep(max_iters);
    }
  }
  if (!converged) {
    std::ostringstream os;
    os << "slope solve did not reach gap " << gap_tol << " in " << iter << " iterations";
    fail(errc::no_convergence, os.str());
  }

  RdSolution sol;
  sol.lambda = lambda;
  sol.iterations = iter;
  for (std::size_t t = 0; t < M; ++t) {
    double s = 0;
    for (std::size_t j = 0; j < K; ++j) s += r[j] * e[t * K + j];
    z[t] = s;
  }
  sol.dual_value = 0;
  for (std::size_t t = 0; t < M; ++t) sol.dual_value -= pb.weights[t] * std::log(z[t]);

  // Forward channel on the full alphabet; zero-mass rows get the same
  // tilted row so every row is a valid pmf.
  sol.channel.assign(pb.pmf.size() * K, 0);
  for (std::size_t x = 0; x < pb.pmf.size(); ++x) {
    double s = 0;
    for (std::size_t j = 0; j < K; ++j) {
      double v = r[j] * std::exp(-lambda * dist.at(x, j));
      sol.channel[x * K + j] = v;
      s += v;
    }
    for (std::size_t j = 0; j < K; ++j) sol.channel[x * K + j] /= s;
  }
  sol.repro_marginal.assign(K, 0);
  for (std::size_t t = 0; t < M; ++t)
    for (std::size_t j = 0; j < K; ++j)
      sol.repro_marginal[j] += pb.weights[t] * sol.channel[pb.rows[t] * K + j];

  double rate = 0, avg_d = 0;
  for (std::size_t t = 0; t < M; ++t) {
    const std::size_t x = pb.rows[t];
    for (std::size_t j = 0; j < K; ++j) {
      double w = sol.channel[x * K + j];
      if (w <= 0) continue;
      double q = sol.repro_marginal[j];
      rate += pb.weights[t] * w * std::log(w / q);
      avg_d += pb.weights[t] * w * dist.at(x, j);
    }
  }
  sol.rate = std::max(rate, 0.0);
  sol.distortion = avg_d;
  return sol;
}

RdSolution solve_distortion(const SlopeProblem& pb, double D, const RdOptions& opts,
                            RdWarmStart* warm) {
  const double d_triv = trivial_distortion(pb.pmf, *pb.dist);
  if (!(D > 0) || !(D < d_triv)) {
    std::ostringstream os;
    os << "target distortion " << D << " outside (0, " << d_triv << ")";
    fail(errc::d_out_of_range, os.str());
  }

  const std::vector<double>* r_hint = nullptr;
  std::vector<double> warm_r;
  if (warm && warm->repro_marginal.size() == pb.dist->num_repro_letters) {
    warm_r = warm->repro_marginal;
    r_hint = &warm_r;
  }
  auto eval = [&](double lam) { return solve_slope(pb, lam, opts.gap_tol, opts.max_iters, r_hint); };

  // Bracket the slope: distortion is nonincreasing in lambda, lo keeps
  // distortion >= D, hi keeps distortion <= D.
  double lo = 0, hi;
  RdSolution sol_hi;
  if (warm && warm->lambda > 0) {
    hi = warm->lambda;
    sol_hi = eval(hi);
    int guard = 0;
    while (sol_hi.distortion > D) {
      lo = hi;
      hi *= 2;
      if (++guard > 120) fail(errc::solver_failure, "slope bracket expansion ran away");
      sol_hi = eval(hi);
    }
    if (lo == 0 && hi > 1e-12) {
      // Shrink from the hint side so the bracket is tight on both ends.
      double cand = hi / 2;
      while (cand > 1e-12) {
        RdSolution s = eval(cand);
        if (s.distortion > D) {
          lo = cand;
          break;
        }
        hi = cand;
        sol_hi = std::move(s);
        cand /= 2;
      }
    }
  } else {
    hi = 1;
    sol_hi = eval(hi);
    int guard = 0;
    while (sol_hi.distortion > D) {
      lo = hi;
      hi *= 2;
      if (++guard > 120) fail(errc::solver_failure, "slope bracket expansion ran away");
      sol_hi = eval(hi);
    }
  }

  RdSolution best = std::move(sol_hi);
  if (std::fabs(best.distortion - D) <= opts.d_rel_tol * D) {
    if (warm) {
      warm->lambda = best.lambda;
      warm->repro_marginal = best.repro_marginal;
    }
    return best;
  }
  for (int it = 0; it < opts.max_bisect; ++it) {
    double mid = 0.5 * (lo + hi);
    RdSolution sol = eval(mid);
    if (std::fabs(sol.distortion - D) <= opts.d_rel_tol * D) {
      if (warm) {
        warm->lambda = sol.lambda;
        warm->repro_marginal = sol.repro_marginal;
      }
      return sol;
    }
    if (sol.distortion > D)
      lo = mid;
    else
      hi = mid;
    best = std::move(sol);
  }
  std::ostringstream os;
  os << "distortion bisection stalled: target " << D << ", reached " << best.distortion;
  fail(errc::no_convergence, os.str());
}

}  // namespace

RdSolution rd_at_slope(const Source& src, const Distortion& dist, double lambda,
                       double tol, int max_iters) {
  if (!(tol > 0)) fail(errc::invalid_argument, "tolerance must be positive");
  SlopeProblem pb = make_problem(src.probs, dist);
  return solve_slope(pb, lambda, tol, max_iters, nullptr);
}

RdSolution rd_at_distortion(const Source& src, const Distortion& dist, double D,
                            double tol) {
  if (!(tol > 0)) fail(errc::invalid_argument, "tolerance must be positive");
  RdOptions opts;
  opts.d_rel_tol = tol;
  SlopeProblem pb = make_problem(src.probs, dist);
  return solve_distortion(pb, D, opts, nullptr);
}

RdSolution rd_at_distortion_pmf(std::span<const double> pmf, const Distortion& dist,
                                double D, const RdOptions& opts, RdWarmStart* warm) {
  SlopeProblem pb = make_problem(pmf, dist);
  return solve_distortion(pb, D, opts, warm);
}

RdfCache::Key RdfCache::make_key(std::span<const double> pmf, double D) {
  Key k;
  k.q.resize(pmf.size());
  for (std::size_t i = 0; i < pmf.size(); ++i)
    k.q[i] = std::llround(pmf[i] * 1e12);
  std::memcpy(&k.d_bits, &D, sizeof(double));
  return k;
}

std::size_t RdfCache::KeyHash::operator()(const Key& k) const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  for (std::int64_t v : k.q) mix(static_cast<std::uint64_t>(v));
  mix(k.d_bits);
  return static_cast<std::size_t>(h);
}

std::optional<double> RdfCache::lookup(std::span<const double> pmf, double D) const {
  Key k = make_key(pmf, D);
  std::lock_guard<std::mutex> lock(mu_);
  auto it = map_.find(k);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

void RdfCache::store(std::span<const double> pmf, double D, double rate) {
  Key k = make_key(pmf, D);
  std::lock_guard<std::mutex> lock(mu_);
  map_.emplace(std::move(k), rate);
}

std::size_t RdfCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return map_.size();
}

double rdf_value(std::span<const double> pmf, const Distortion& dist, double D,
                 RdfCache* cache, const RdOptions& opts) {
  if (!(D > 0)) fail(errc::d_out_of_range, "distortion level must be positive");
  if (cache)
    if (auto hit = cache->lookup(pmf, D)) return *hit;
  double rate;
  if (D >= trivial_distortion(pmf, dist) - 1e-15)
    rate = 0;
  else
    rate = rd_at_distortion_pmf(pmf, dist, D, opts, nullptr).rate;
  if (cache) cache->store(pmf, D, rate);
  return rate;
}

double RdfEvaluator::rate(std::span<const double> pmf) {
  if (!(d_ > 0)) fail(errc::d_out_of_range, "distortion level must be positive");
  if (cache_)
    if (auto hit = cache_->lookup(pmf, d_)) return *hit;
  double rate;
  if (d_ >= trivial_distortion(pmf, dist_) - 1e-15)
    rate = 0;
  else
    rate = rd_at_distortion_pmf(pmf, dist_, d_, opts_, &warm_).rate;
  if (cache_) cache_->store(pmf, d_, rate);
  return rate;
}

}  // namespace rdd

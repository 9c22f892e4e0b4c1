#include "rdd/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace rdd {

namespace {

constexpr double kImprove = 1e-14;  // minimum divergence decrease to accept

double div_to(std::span<const double> q, const Source& p) {
  return divergence(q, std::span<const double>(p.probs));
}

}  // namespace

ExponentSolver::ExponentSolver(Source p, Distortion dist, double D, ExponentOptions opts)
    : p_(std::move(p)),
      dist_(std::move(dist)),
      d_(D),
      opts_(opts),
      eval_(dist_, D, opts.rd, &cache_) {
  if (p_.size() != dist_.num_source_letters)
    fail(errc::dimension_mismatch, "source alphabet does not match distortion rows");
  if (!(D > 0)) fail(errc::d_out_of_range, "distortion level must be positive");
  if (opts_.resolution < 2) fail(errc::invalid_argument, "grid resolution must be >= 2");
  build_grid();
}

void ExponentSolver::build_grid() {
  const std::size_t L = p_.size();
  // C(res + L - 1, L - 1) grid points.
  double count = 1;
  for (std::size_t i = 1; i < L; ++i)
    count *= static_cast<double>(opts_.resolution + i) / static_cast<double>(i);
  if (!(count <= static_cast<double>(opts_.grid_cap))) {
    std::ostringstream os;
    os << "simplex grid has ~" << count << " points at resolution " << opts_.resolution
       << " over " << L << " letters, above cap " << opts_.grid_cap;
    fail(errc::grid_cap_exceeded, os.str());
  }

  const int res = opts_.resolution;
  std::vector<int> k(L, 0);
  std::vector<double> q(L);
  auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
    if (pos + 1 == L) {
      k[pos] = left;
      for (std::size_t i = 0; i < L; ++i)
        q[i] = static_cast<double>(k[i]) / static_cast<double>(res);
      grid_.push_back(q);
      grid_div_.push_back(div_to(q, p_));
      return;
    }
    for (int c = 0; c <= left; ++c) {
      k[pos] = c;
      self(self, pos + 1, left - c);
    }
  };
  rec(rec, 0, res);

  order_.resize(grid_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [this](std::size_t a, std::size_t b) { return grid_div_[a] < grid_div_[b]; });
  grid_rate_.assign(grid_.size(), std::numeric_limits<double>::quiet_NaN());
}

double ExponentSolver::rate_of(std::span<const double> q) {
  try {
    return eval_.rate(q);
  } catch (const error& e) {
    if (e.code() != errc::no_convergence) throw;
    // Probed (q, D) pairs can sit on support-change knees where the
    // alternating solve stalls short of the tight certificate; a looser
    // gap still resolves feasibility far beyond feas_slack scale.
    RdfEvaluator loose(dist_, d_, RdOptions{1e-7, 1e-6, 200000, 200}, &cache_);
    return loose.rate(q);
  }
}

std::optional<std::size_t> ExponentSolver::grid_seed(double rate_target) {
  for (std::size_t idx : order_) {
    double& r = grid_rate_[idx];
    if (std::isnan(r)) r = rate_of(grid_[idx]);
    if (r >= rate_target - opts_.feas_slack) return idx;
  }
  return std::nullopt;
}

// Hill-climb the rate from the best grid point to decide infeasibility
// robustly (the grid may just miss a narrow feasible set).
double ExponentSolver::max_rate_estimate() {
  if (max_rate_ >= 0) return max_rate_;
  std::size_t best = 0;
  double best_rate = -1;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    double& r = grid_rate_[i];
    if (std::isnan(r)) r = rate_of(grid_[i]);
    if (r > best_rate) {
      best_rate = r;
      best = i;
    }
  }
  std::vector<double> q = grid_[best];
  const std::size_t L = q.size();
  double t = 1.0 / static_cast<double>(opts_.resolution);
  while (t >= opts_.refine_tol) {
    bool improved = false;
    for (std::size_t i = 0; i < L; ++i)
      for (std::size_t j = 0; j < L; ++j) {
        if (i == j || q[j] < t) continue;
        std::vector<double> u = q;
        u[i] += t;
        u[j] -= t;
        double r = rate_of(u);
        if (r > best_rate + 1e-13) {
          best_rate = r;
          q = std::move(u);
          improved = true;
        }
      }
    if (!improved) t /= 2;
  }
  max_rate_ = best_rate;
  return max_rate_;
}

std::optional<std::vector<double>> ExponentSolver::restore(std::span<const double> u,
                                                           double rate_target,
                                                           double s_tol) {
  const std::size_t L = u.size();
  // Largest s keeping p + s (u - p) inside the simplex.
  double s_max = std::numeric_limits<double>::infinity();
  double dir_norm = 0;
  for (std::size_t i = 0; i < L; ++i) {
    double di = u[i] - p_[i];
    dir_norm += di * di;
    if (di < 0) s_max = std::min(s_max, p_[i] / (-di));
  }
  if (dir_norm < 1e-28) return std::nullopt;  // u == p, no direction
  if (!std::isfinite(s_max)) return std::nullopt;

  auto point_at = [&](double s) {
    std::vector<double> q(L);
    double sum = 0;
    for (std::size_t i = 0; i < L; ++i) {
      q[i] = std::max(0.0, p_[i] + s * (u[i] - p_[i]));
      sum += q[i];
    }
    for (double& v : q) v /= sum;
    return q;
  };

  // The feasible set along the ray is an interval (rate is concave along
  // it) and s = 0 sits below the target, so the interval's lower end is
  // the divergence-minimal feasible point.
  double s_feas;
  if (feasible(u, rate_target)) {
    s_feas = 1;
  } else if (s_max > 1 && feasible(point_at(s_max), rate_target)) {
    s_feas = s_max;
  } else {
    return std::nullopt;
  }
  double lo = 0, hi = s_feas;
  while (hi - lo > s_tol * std::max(1.0, hi)) {
    double mid = 0.5 * (lo + hi);
    if (feasible(point_at(mid), rate_target))
      hi = mid;
    else
      lo = mid;
  }
  return point_at(hi);
}

ExponentSolution ExponentSolver::refine(std::vector<double> seed, double rate_target) {
  const std::size_t L = seed.size();
  std::vector<double> q = std::move(seed);
  double q_div = div_to(q, p_);

  auto try_accept = [&](const std::vector<double>& cand) {
    double dv = div_to(cand, p_);
    if (dv < q_div - kImprove) {
      q = cand;
      q_div = dv;
      return true;
    }
    return false;
  };

  double t = 1.0 / static_cast<double>(opts_.resolution);
  while (t >= opts_.refine_tol) {
    // Early restores can be loose; precision follows the step size.
    const double s_tol = std::max(1e-13, 0.01 * t);
    bool improved = false;
    // Radial pull toward p first: collapses any feasibility slack.
    if (auto pulled = restore(q, rate_target, s_tol))
      improved |= try_accept(*pulled);
    for (std::size_t i = 0; i < L; ++i)
      for (std::size_t j = 0; j < L; ++j) {
        if (i == j || q[j] < t) continue;
        std::vector<double> u = q;
        u[i] += t;
        u[j] -= t;
        if (auto restored = restore(u, rate_target, s_tol))
          improved |= try_accept(*restored);
      }
    if (!improved) t /= 2;
  }
  if (auto pulled = restore(q, rate_target, 1e-13))
    try_accept(*pulled);

  ExponentSolution sol;
  sol.value = q_div;
  sol.rate_at_minimizer = rate_of(q);
  sol.minimizer = std::move(q);
  sol.constraint_active = true;
  return sol;
}

ExponentSolution ExponentSolver::solve_impl(double rate_target,
                                            const std::vector<double>* warm_seed) {
  if (!(rate_target >= 0) || !std::isfinite(rate_target))
    fail(errc::invalid_argument, "rate target must be finite and >= 0");
  double rp = rate_of(p_.probs);
  if (rp >= rate_target - opts_.feas_slack) {
    ExponentSolution sol;
    sol.value = 0;
    sol.minimizer = p_.probs;
    sol.rate_at_minimizer = rp;
    sol.constraint_active = false;
    return sol;
  }
  if (warm_seed) {
    if (auto restored = restore(*warm_seed, rate_target, 1e-6))
      return refine(std::move(*restored), rate_target);
  }
  auto seed_idx = grid_seed(rate_target);
  std::vector<double> seed;
  if (seed_idx) {
    seed = grid_[*seed_idx];
  } else {
    double mr = max_rate_estimate();
    if (mr < rate_target - opts_.feas_slack) {
      std::ostringstream os;
      os << "no pmf reaches rate " << rate_target << " at this distortion (max ~" << mr << ")";
      fail(errc::infeasible, os.str());
    }
    // Narrow feasible set missed by the grid: seed from the rate maximizer.
    std::size_t best = 0;
    double best_rate = -1;
    for (std::size_t i = 0; i < grid_.size(); ++i)
      if (!std::isnan(grid_rate_[i]) && grid_rate_[i] > best_rate) {
        best_rate = grid_rate_[i];
        best = i;
      }
    auto restored = restore(grid_[best], rate_target, 1e-10);
    if (!restored) fail(errc::infeasible, "feasible set exists but could not be reached");
    seed = *restored;
  }
  return refine(std::move(seed), rate_target);
}

ExponentSolution ExponentSolver::solve(double rate_target) {
  return solve_impl(rate_target, nullptr);
}

std::vector<ExponentSolver::CurvePoint> ExponentSolver::curve(
    std::span<const double> rate_targets) {
  std::vector<CurvePoint> out;
  out.reserve(rate_targets.size());
  std::vector<double> prev_min;
  for (double rt : rate_targets) {
    CurvePoint pt;
    pt.rate_target = rt;
    try {
      ExponentSolution sol = solve_impl(rt, prev_min.empty() ? nullptr : &prev_min);
      prev_min = sol.minimizer;
      pt.solution = std::move(sol);
    } catch (const error& e) {
      pt.error = errc_name(e.code());
      prev_min.clear();
    }
    out.push_back(std::move(pt));
  }
  return out;
}

ExponentSolution exponent(const Source& p, const Distortion& dist, double D,
                          double rate_target, const ExponentOptions& opts) {
  ExponentSolver solver(p, dist, D, opts);
  return solver.solve(rate_target);
}

}  // namespace rdd

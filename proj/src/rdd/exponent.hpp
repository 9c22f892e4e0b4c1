#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdd/rd_solver.hpp"

namespace rdd {

struct ExponentOptions {
  int resolution = 200;          // simplex grid spacing 1/resolution
  std::size_t grid_cap = 2000000;  // max grid points
  double feas_slack = 1e-9;      // rate >= target - slack counts feasible
  double refine_tol = 1e-7;      // stop when transfer step drops below
  RdOptions rd{1e-10, 1e-8, 1000000, 200};
};

// Solution of min D(q || p) over pmfs q with R(q, D) >= rate_target.
struct ExponentSolution {
  double value = 0;
  std::vector<double> minimizer;
  double rate_at_minimizer = 0;
  bool constraint_active = false;
};

// Sphere-covering style exponent for rates above R(p, D).  The feasible
// set {q : R(q, D) >= target} is convex (R is concave in q), so a
// divergence-ordered grid scan followed by local mass-transfer descent
// with radial feasibility restoration converges to the optimum.
class ExponentSolver {
 public:
  ExponentSolver(Source p, Distortion dist, double D, ExponentOptions opts = {});

  // Throws Infeasible when no pmf reaches the target rate at this D.
  ExponentSolution solve(double rate_target);

  struct CurvePoint {
    double rate_target = 0;
    std::optional<ExponentSolution> solution;
    std::string error;  // failure name when solution is absent
  };
  // Evaluates an ascending grid of targets, warm-starting each point from
  // the previous minimizer.  Per-point failures are recorded, not thrown.
  std::vector<CurvePoint> curve(std::span<const double> rate_targets);

  double rate_of(std::span<const double> q);  // memoized R(q, D)

 private:
  void build_grid();
  std::optional<std::size_t> grid_seed(double rate_target);
  double max_rate_estimate();
  bool feasible(std::span<const double> q, double rate_target) {
    return rate_of(q) >= rate_target - opts_.feas_slack;
  }
  // Smallest s with q(s) = p + s (u - p) feasible; divergence is monotone
  // increasing in s, so this is the divergence-minimal feasible point on
  // the ray.  Returns nullopt when the ray never regains feasibility.
  std::optional<std::vector<double>> restore(std::span<const double> u,
                                             double rate_target, double s_tol);
  ExponentSolution refine(std::vector<double> seed, double rate_target);
  ExponentSolution solve_impl(double rate_target, const std::vector<double>* warm_seed);

  Source p_;
  Distortion dist_;
  double d_;
  ExponentOptions opts_;
  RdfCache cache_;
  RdfEvaluator eval_;
  std::vector<std::vector<double>> grid_;
  std::vector<double> grid_div_;
  std::vector<std::size_t> order_;   // grid indices by ascending divergence
  std::vector<double> grid_rate_;    // lazy; NaN = not evaluated yet
  double max_rate_ = -1;             // lazy sup estimate
};

// One-shot convenience wrapper.
ExponentSolution exponent(const Source& p, const Distortion& dist, double D,
                          double rate_target, const ExponentOptions& opts = {});

}  // namespace rdd

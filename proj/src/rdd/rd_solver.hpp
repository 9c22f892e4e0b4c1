#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "rdd/pmf.hpp"

namespace rdd {

// Operating point on the rate-distortion curve.  `channel` is the forward
// test channel, row major over the full source alphabet; `repro_marginal`
// is its output distribution.  rate/distortion are the mutual information
// and expected distortion of that channel (nats, distortion units).
struct RdSolution {
  double rate = 0;
  double distortion = 0;
  double lambda = 0;
  std::vector<double> channel;
  std::vector<double> repro_marginal;
  // Lagrangian dual value at the returned output marginal; rate +
  // lambda * distortion >= dual_value >= optimum, gap <= stopping gap.
  double dual_value = 0;
  int iterations = 0;
};

struct RdOptions {
  double gap_tol = 1e-9;    // dual suboptimality bound at the slope solve
  double d_rel_tol = 1e-7;  // |achieved - target| <= d_rel_tol * target
  int max_iters = 100000;   // per slope solve
  int max_bisect = 200;
};

// Solves the slope-parametrized problem min_W I(p,W) + lambda * E[d] by
// alternating minimization on the output marginal.  Stops when the dual
// suboptimality bound drops below `tol`.  lambda = 0 returns the zero-rate
// point (mass on the best single reproduction).
RdSolution rd_at_slope(const Source& src, const Distortion& dist, double lambda,
                       double tol = 1e-9, int max_iters = 100000);

// Point on R(D) at expected distortion D via bisection on the slope.
// Requires 0 < D < trivial_distortion.  The achieved distortion matches D
// to relative tolerance `tol`.
RdSolution rd_at_distortion(const Source& src, const Distortion& dist, double D,
                            double tol = 1e-7);

// Warm-start hints threaded through sweeps over nearby pmfs.
struct RdWarmStart {
  double lambda = -1;                  // < 0 means no hint
  std::vector<double> repro_marginal;  // empty means no hint
};

// Same as rd_at_distortion but accepts any nonnegative pmf (zero entries
// allowed; zero-mass letters are ignored) and optional warm-start hints.
RdSolution rd_at_distortion_pmf(std::span<const double> pmf, const Distortion& dist,
                                double D, const RdOptions& opts = {},
                                RdWarmStart* warm = nullptr);

// Memo for R(q, D) evaluations keyed by (q quantized to 1e-12, exact D
// bits).  Safe for concurrent lookups/inserts.
class RdfCache {
 public:
  std::optional<double> lookup(std::span<const double> pmf, double D) const;
  void store(std::span<const double> pmf, double D, double rate);
  std::size_t size() const;

 private:
  struct Key {
    std::vector<std::int64_t> q;
    std::uint64_t d_bits;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };
  static Key make_key(std::span<const double> pmf, double D);

  mutable std::mutex mu_;
  std::unordered_map<Key, double, KeyHash> map_;
};

// R(q, D) in nats for an arbitrary pmf q (zeros allowed).  Returns 0 when
// D >= trivial_distortion(q); throws DOutOfRange for D <= 0.
double rdf_value(std::span<const double> pmf, const Distortion& dist, double D,
                 RdfCache* cache = nullptr, const RdOptions& opts = {});

// Sweep helper: evaluates R(q, D) across many nearby q with warm-started
// slope bisection and an optional shared memo.  Not thread-safe.
class RdfEvaluator {
 public:
  RdfEvaluator(const Distortion& dist, double D, RdOptions opts = {},
               RdfCache* cache = nullptr)
      : dist_(dist), d_(D), opts_(opts), cache_(cache) {}

  double rate(std::span<const double> pmf);

 private:
  const Distortion& dist_;
  double d_;
  RdOptions opts_;
  RdfCache* cache_;
  RdWarmStart warm_;
};

}  // namespace rdd

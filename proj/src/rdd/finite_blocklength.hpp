#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdd/dispersion.hpp"
#include "rdd/rd_solver.hpp"
#include "rdd/type_atlas.hpp"

namespace rdd {

struct FbOptions {
  RdOptions rd;                   // per-type RDF accuracy
  std::size_t atlas_cap = 2000000;
  double be_constant = 0.5600;    // Berry-Esseen constant (modern bound)
  bool be_paper_form = false;     // looser classical constant 6 instead
};

// Two-term finite-blocklength rate: R(p,D) + sqrt(V/n) Qinv(eps).
double normal_approx_rate(const Source& p, const Distortion& dist, double D,
                          double eps, std::int64_t n, const FbOptions& opts = {});

struct OracleResult {
  double delta_r = 0;            // smallest achieved redundancy
  double tail_probability = 0;   // exact tail at that redundancy
  double rate_rdf = 0;           // R(p, D) used as the reference
};

// Exact rate redundancy by full type enumeration: the smallest DeltaR
// (over the achieved per-type RDF gaps) with
// Pr{R(type, D) > R(p, D) + DeltaR} <= eps + eps_offset.  The offset lets
// callers replay achievability bookkeeping that tightens the target.
OracleResult rate_redundancy_oracle(const Source& p, const Distortion& dist, double D,
                                    double eps, std::int64_t n, double eps_offset = 0,
                                    const FbOptions& opts = {}, RdfCache* cache = nullptr);

// Rate-units halfwidth of the Gaussian-approximation error band around
// normal_approx_rate: the probability-scale bound c * xi / (V^{3/2} sqrt n)
// divided by the rate-scale normal density at the eps quantile (decays
// like 1/n).  xi is the third absolute central moment of the per-letter
// rate function.  Throws ZeroVariance when V vanishes.
double berry_esseen_halfwidth(const Source& p, const Distortion& dist, double D,
                              double eps, std::int64_t n, const FbOptions& opts = {});

struct Lemma2Result {
  double lhs = 0;   // exact Pr{type outside the (L log n / n) ball}
  double rhs = 0;   // 2L / n^2
  bool holds = false;
};

// Exact check that the type stays within Euclidean distance
// sqrt(L log n / n) of the source, against the 2L/n^2 bound.
Lemma2Result lemma2_check(const Source& p, std::int64_t n,
                          const FbOptions& opts = {});

struct RateRecord {
  std::int64_t n = 0;
  double r_normal = 0;
  std::optional<double> r_oracle;
  std::optional<double> be_halfwidth;
  std::string error;  // failure name when an optional field is absent
};

struct RateCurve {
  double distortion = 0;
  double eps = 0;
  double rate_rdf = 0;    // R(p, D)
  double dispersion = 0;  // V(p, D)
  std::vector<RateRecord> records;
};

// Sweeps normal approximation (and optionally the exact oracle) over a
// blocklength list.  Per-record failures are recorded and the sweep
// continues.
RateCurve rate_curve(const Source& p, const Distortion& dist, double D, double eps,
                     std::span<const std::int64_t> n_list, bool with_oracle,
                     const FbOptions& opts = {});

// CSV per the fixed schema: n,r_normal_nats,r_oracle_nats,be_halfwidth_nats,eps
// with a leading #schema= comment.  Missing fields render empty.
std::string rate_curve_csv(const RateCurve& curve);

}  // namespace rdd

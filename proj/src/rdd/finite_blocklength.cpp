#include "rdd/finite_blocklength.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rdd/format.hpp"
#include "rdd/qfunc.hpp"

namespace rdd {

namespace {

// Atlas growth is cubic-and-worse in n; per-alphabet blocklength ceilings
// keep a sweep from silently requesting days of solver time.
std::int64_t oracle_n_cap(std::size_t alphabet) {
  switch (alphabet) {
    case 2: return 100000;
    case 3: return 300;
    case 4: return 60;
    default: return 0;
  }
}

void check_oracle_cap(const Source& p, std::int64_t n) {
  if (n < 1) fail(errc::invalid_argument, "blocklength must be >= 1");
  std::int64_t cap = oracle_n_cap(p.size());
  if (n > cap) {
    std::ostringstream os;
    os << "blocklength " << n << " above the cap " << cap << " for a " << p.size()
       << "-letter alphabet";
    fail(errc::atlas_too_large, os.str());
  }
}

struct TiltedStats {
  double rate;
  double v;
  double xi;  // third absolute central moment of the per-letter function
};

TiltedStats tilted_stats(const Source& p, const Distortion& dist, double D) {
  TiltedDispersion t = dispersion_via_tilted(p, dist, D);
  double xi = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    xi += p[i] * std::pow(std::fabs(t.f[i] - t.rate), 3.0);
  return {t.rate, t.v, xi};
}

double be_halfwidth_from(const TiltedStats& s, double eps, std::int64_t n,
                         const FbOptions& opts) {
  if (s.v < 1e-14) fail(errc::zero_variance, "dispersion vanishes; no Gaussian band");
  double c = opts.be_paper_form ? 6.0 : opts.be_constant;
  double prob_half = c * s.xi / (std::pow(s.v, 1.5) * std::sqrt(static_cast<double>(n)));
  double z = q_inverse(eps);
  double density = std::exp(-0.5 * z * z) / std::sqrt(2 * 3.14159265358979323846);
  // Rate-scale density of the approximating normal at the eps quantile.
  double rate_density = density / std::sqrt(s.v / static_cast<double>(n));
  return prob_half / rate_density;
}

}  // namespace

double normal_approx_rate(const Source& p, const Distortion& dist, double D,
                          double eps, std::int64_t n, const FbOptions& opts) {
  (void)opts;
  if (n < 1) fail(errc::invalid_argument, "blocklength must be >= 1");
  TiltedStats s = tilted_stats(p, dist, D);
  return s.rate + std::sqrt(s.v / static_cast<double>(n)) * q_inverse(eps);
}

OracleResult rate_redundancy_oracle(const Source& p, const Distortion& dist, double D,
                                    double eps, std::int64_t n, double eps_offset,
                                    const FbOptions& opts, RdfCache* cache) {
  if (!(eps > 0) || !(eps < 1)) fail(errc::invalid_argument, "eps must sit in (0, 1)");
  check_oracle_cap(p, n);
  TypeAtlas atlas = enumerate_types(n, p, opts.atlas_cap);

  RdfCache local_cache;
  RdfCache* c = cache ? cache : &local_cache;
  double rate_rdf = rdf_value(p.probs, dist, D, c, opts.rd);

  // Atlas order is lexicographic, so consecutive types are close and the
  // warm-started evaluator reuses its slope bracket.
  RdfEvaluator ev(dist, D, opts.rd, c);
  struct Gap {
    double v;
    double prob;
  };
  std::vector<Gap> gaps;
  gaps.reserve(atlas.entries.size());
  for (const TypeEntry& e : atlas.entries) {
    std::vector<double> q = e.pmf(n);
    double v = ev.rate(q) - rate_rdf;
    gaps.push_back({v, std::exp(e.log_prob)});
  }

  std::sort(gaps.begin(), gaps.end(), [](const Gap& a, const Gap& b) { return a.v < b.v; });
  std::vector<double> suffix(gaps.size() + 1, 0.0);
  for (std::size_t i = gaps.size(); i-- > 0;) suffix[i] = suffix[i + 1] + gaps[i].prob;

  double eps_eff = std::max(0.0, eps + eps_offset);
  // Tail mass strictly above a candidate redundancy.
  auto tail_above = [&](double cand) {
    std::size_t idx = std::upper_bound(gaps.begin(), gaps.end(), cand,
                                       [](double c2, const Gap& g) { return c2 < g.v; }) -
                      gaps.begin();
    return suffix[idx];
  };

  OracleResult out;
  out.rate_rdf = rate_rdf;
  double t0 = tail_above(0.0);
  if (t0 <= eps_eff) {
    out.delta_r = 0;
    out.tail_probability = t0;
    return out;
  }
  for (const Gap& g : gaps) {
    if (g.v <= 0) continue;
    double t = tail_above(g.v);
    if (t <= eps_eff) {
      out.delta_r = g.v;
      out.tail_probability = t;
      return out;
    }
  }
  fail(errc::solver_failure, "no achieved redundancy meets the tail target");
}

double berry_esseen_halfwidth(const Source& p, const Distortion& dist, double D,
                              double eps, std::int64_t n, const FbOptions& opts) {
  if (n < 1) fail(errc::invalid_argument, "blocklength must be >= 1");
  if (!(eps > 0) || !(eps < 1)) fail(errc::invalid_argument, "eps must sit in (0, 1)");
  return be_halfwidth_from(tilted_stats(p, dist, D), eps, n, opts);
}

Lemma2Result lemma2_check(const Source& p, std::int64_t n, const FbOptions& opts) {
  if (n < 1) fail(errc::invalid_argument, "blocklength must be >= 1");
  TypeAtlas atlas = enumerate_types(n, p, opts.atlas_cap);
  const std::size_t L = p.size();
  const double radius2 =
      static_cast<double>(L) * std::log(static_cast<double>(n)) / static_cast<double>(n);
  double outside = 0;
  for (const TypeEntry& e : atlas.entries) {
    double dist2 = 0;
    for (std::size_t i = 0; i < L; ++i) {
      double diff = static_cast<double>(e.counts[i]) / static_cast<double>(n) - p[i];
      dist2 += diff * diff;
    }
    if (dist2 > radius2) outside += std::exp(e.log_prob);
  }
  Lemma2Result res;
  res.lhs = outside;
  res.rhs = 2.0 * static_cast<double>(L) / (static_cast<double>(n) * static_cast<double>(n));
  res.holds = res.lhs <= res.rhs;
  return res;
}

RateCurve rate_curve(const Source& p, const Distortion& dist, double D, double eps,
                     std::span<const std::int64_t> n_list, bool with_oracle,
                     const FbOptions& opts) {
  if (!(eps > 0) || !(eps < 1)) fail(errc::invalid_argument, "eps must sit in (0, 1)");
  TiltedStats s = tilted_stats(p, dist, D);
  const double z = q_inverse(eps);

  RateCurve curve;
  curve.distortion = D;
  curve.eps = eps;
  curve.rate_rdf = s.rate;
  curve.dispersion = s.v;

  RdfCache cache;
  for (std::int64_t n : n_list) {
    RateRecord rec;
    rec.n = n;
    rec.r_normal = s.rate + std::sqrt(s.v / static_cast<double>(n)) * z;
    try {
      rec.be_halfwidth = be_halfwidth_from(s, eps, n, opts);
    } catch (const error& e) {
      rec.error = errc_name(e.code());
    }
    if (with_oracle) {
      try {
        OracleResult o = rate_redundancy_oracle(p, dist, D, eps, n, 0, opts, &cache);
        rec.r_oracle = o.rate_rdf + o.delta_r;
      } catch (const error& e) {
        rec.error = errc_name(e.code());
      }
    }
    curve.records.push_back(std::move(rec));
  }
  return curve;
}

std::string rate_curve_csv(const RateCurve& curve) {
  std::string out = "#schema=rate_curve.v1\n";
  out += "n,r_normal_nats,r_oracle_nats,be_halfwidth_nats,eps\n";
  for (const RateRecord& rec : curve.records) {
    out += std::to_string(rec.n);
    out += ',';
    out += fmt9(rec.r_normal);
    out += ',';
    if (rec.r_oracle) out += fmt9(*rec.r_oracle);
    out += ',';
    if (rec.be_halfwidth) out += fmt9(*rec.be_halfwidth);
    out += ',';
    out += fmt9(curve.eps);
    out += '\n';
  }
  return out;
}

}  // namespace rdd

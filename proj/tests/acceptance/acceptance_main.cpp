// End-to-end acceptance gate.  Each criterion prints exactly one
// [PASS]/[FAIL] line; a criterion also fails by exceeding its time
// budget.  argv[1] is the CLI binary, exercised by the determinism
// criterion.  Exit status is the number of failing criteria.
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rdd/codebook.hpp"
#include "rdd/dispersion.hpp"
#include "rdd/exponent.hpp"
#include "rdd/finite_blocklength.hpp"
#include "rdd/gaussian.hpp"
#include "rdd/qfunc.hpp"
#include "rdd/rd_solver.hpp"
#include "rdd/type_atlas.hpp"

using namespace rdd;

namespace {

std::string g_cli;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void flunk(Outcome& out, const std::string& why) {
  out.pass = false;
  if (!out.detail.empty()) out.detail += "; ";
  out.detail += why;
}

double h2(double x) { return -x * std::log(x) - (1 - x) * std::log(1 - x); }

double rel_gap(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::uint64_t splitmix(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// --- 1: solver output against closed-form rate functions ----------------

Outcome closed_form_rates() {
  Outcome out;
  double worst = 0;
  for (int pi = 1; pi <= 10; ++pi) {
    double p0 = 0.05 * pi;
    Source p = validate_source({p0, 1 - p0});
    Distortion dist = make_hamming_distortion(2);
    for (int fi = 1; fi <= 9; ++fi) {
      double D = p0 * 0.1 * fi;
      double got = rd_at_distortion(p, dist, D).rate;
      double want = h2(p0) - h2(D);
      worst = std::max(worst, std::abs(got - want));
    }
  }
  if (worst > 1e-6) flunk(out, "binary gap " + fmt(worst));

  Source u4 = validate_source({0.25, 0.25, 0.25, 0.25});
  Distortion d4 = make_hamming_distortion(4);
  double worst4 = 0;
  for (int di = 1; di <= 14; ++di) {
    double D = 0.05 * di;
    double got = rd_at_distortion(u4, d4, D).rate;
    double want = std::log(4.0) - h2(D) - D * std::log(3.0);
    worst4 = std::max(worst4, std::abs(got - want));
  }
  if (worst4 > 1e-6) flunk(out, "quaternary gap " + fmt(worst4));
  if (out.pass) out.detail = "max gaps " + fmt(worst) + " / " + fmt(worst4);
  return out;
}

// --- 2: three dispersion routes agree on random sources ------------------

Outcome dispersion_route_agreement() {
  Outcome out;
  std::uint64_t state = 0x5eed0001;
  auto unit = [&] { return (splitmix(state) >> 11) * 0x1p-53; };
  int compared = 0, skipped = 0;
  double worst_dg = 0, worst_eg = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t L = 2 + trial % 2;
    std::vector<double> probs(L);
    for (;;) {
      double total = 0;
      for (double& x : probs) {
        x = 0.05 + unit();
        total += x;
      }
      double mn = 2;
      for (double& x : probs) {
        x /= total;
        mn = std::min(mn, x);
      }
      if (mn >= 0.08) break;
    }
    Source p = validate_source(probs);
    Distortion dist = make_hamming_distortion(L);
    double d_triv = trivial_distortion(p.probs, dist);
    double D = (0.3 + 0.4 * unit()) * d_triv;

    DispersionOptions opt;
    opt.with_exponent = true;
    DispersionReport rep = dispersion_report(p, dist, D, opt);
    if (rep.jump_suspected || rep.v_tilted < 1e-6) {
      ++skipped;
      continue;
    }
    if (!rep.v_exponent.has_value()) {
      flunk(out, "trial " + std::to_string(trial) + " exponent route failed: " +
                     rep.exponent_error);
      continue;
    }
    ++compared;
    double dg = rel_gap(rep.v_derivative, rep.v_tilted);
    double eg = rel_gap(*rep.v_exponent, rep.v_tilted);
    worst_dg = std::max(worst_dg, dg);
    worst_eg = std::max(worst_eg, eg);
    if (dg > 1e-3)
      flunk(out, "trial " + std::to_string(trial) + " derivative gap " + fmt(dg));
    if (eg > 5e-2)
      flunk(out, "trial " + std::to_string(trial) + " exponent gap " + fmt(eg));
  }
  if (compared == 0) flunk(out, "every trial was skipped");
  if (out.pass)
    out.detail = std::to_string(compared) + " sources, worst gaps " + fmt(worst_dg) +
                 " / " + fmt(worst_eg) + ", " + std::to_string(skipped) + " skipped";
  return out;
}

// --- 3: limiting values and plateaus of the dispersion --------------------

Outcome dispersion_limits() {
  Outcome out;
  // small-D limit is the log-mass variance
  Source p2 = validate_source({0.2, 0.8});
  Source p3 = validate_source({0.5, 0.3, 0.2});
  double v2 = dispersion_via_tilted(p2, make_hamming_distortion(2), 0.01).v;
  if (rel_gap(v2, lossless_dispersion(p2)) > 1e-4)
    flunk(out, "binary small-D gap " + fmt(rel_gap(v2, lossless_dispersion(p2))));
  double v3 = dispersion_via_tilted(p3, make_hamming_distortion(3), 0.01).v;
  if (rel_gap(v3, lossless_dispersion(p3)) > 1e-4)
    flunk(out, "ternary small-D gap " + fmt(rel_gap(v3, lossless_dispersion(p3))));

  // uniform sources disperse not at all
  for (std::size_t L : {2u, 3u, 4u}) {
    Source u = validate_source(std::vector<double>(L, 1.0 / L));
    double v = dispersion_via_tilted(u, make_hamming_distortion(L), 0.1).v;
    if (v > 1e-8) flunk(out, "uniform L=" + std::to_string(L) + " v=" + fmt(v));
  }

  // difference measures pin the dispersion to the log-mass variance
  // across the whole additive range (knee near 0.483 for this measure)
  Distortion diff = make_difference_distortion({0.0, 1.0, 3.0});
  double ref = lossless_dispersion(p3);
  for (double D : {0.05, 0.15, 0.3, 0.45}) {
    double v = dispersion_via_tilted(p3, diff, D).v;
    if (rel_gap(v, ref) > 1e-4)
      flunk(out, "plateau broken at D=" + fmt(D) + " gap " + fmt(rel_gap(v, ref)));
  }
  return out;
}

// --- 4: quadratic-Gaussian closed forms and exponent curvature ------------

Outcome gaussian_closed_forms() {
  Outcome out;
  for (double var : {0.5, 1.0, 4.0}) {
    for (double frac : {0.1, 0.25, 0.5, 0.9}) {
      double D = var * frac;
      if (std::abs(gaussian_rdf(var, D) - 0.5 * std::log(var / D)) > 1e-15)
        flunk(out, "rdf mismatch at var=" + fmt(var) + " D=" + fmt(D));
      double rdf = gaussian_rdf(var, D);
      for (double dr : {0.01, 0.1, 0.5}) {
        double want = (std::exp(2 * dr) - 1 - 2 * dr) / 2;
        if (std::abs(gaussian_exponent(var, D, rdf + dr) - want) > 1e-14)
          flunk(out, "exponent mismatch at dr=" + fmt(dr));
      }
    }
  }

  // local curvature of the exponent gives back the dispersion 1/2
  double rdf = gaussian_rdf(1.0, 0.25);
  std::vector<double> deltas{0.01, 0.02, 0.04}, values(3);
  for (int i = 0; i < 3; ++i)
    values[i] = gaussian_exponent(1.0, 0.25, rdf + deltas[i]);
  CurvatureFit fit = curvature_fit(deltas, values);
  if (std::abs(fit.v - 0.5) / 0.5 > 0.01)
    flunk(out, "curvature dispersion " + fmt(fit.v) + " off 0.5 by >1%");
  else
    out.detail = "curvature dispersion " + fmt(fit.v);
  return out;
}

// --- 5: exact redundancy converges to the normal-law prediction -----------

Outcome oracle_approaches_normal_law() {
  Outcome out;
  Source p = validate_source({0.2, 0.8});
  Distortion dist = make_hamming_distortion(2);
  const double D = 0.05, eps = 0.05;
  double v = dispersion_via_tilted(p, dist, D).v;
  double z = q_inverse(eps);

  RdfCache cache;
  std::vector<double> devs;
  for (std::int64_t n : {std::int64_t{100}, std::int64_t{1000}, std::int64_t{10000}}) {
    OracleResult o = rate_redundancy_oracle(p, dist, D, eps, n, 0, {}, &cache);
    double sigma = std::sqrt(v / static_cast<double>(n));
    devs.push_back(std::abs(o.delta_r - sigma * z) / sigma);
  }
  for (std::size_t i = 1; i < devs.size(); ++i)
    if (devs[i] >= devs[i - 1])
      flunk(out, "deviation did not shrink: " + fmt(devs[i - 1]) + " -> " + fmt(devs[i]));
  if (devs.back() > 0.05)
    flunk(out, "final deviation " + fmt(devs.back()) + " above 0.05 sigma");
  if (out.pass)
    out.detail = "sigma-scaled deviations " + fmt(devs[0]) + " / " + fmt(devs[1]) +
                 " / " + fmt(devs[2]);
  return out;
}

// --- 6: exact type-concentration inequality --------------------------------

Outcome type_concentration_bound() {
  Outcome out;
  for (double p0 : {0.2, 0.4}) {
    Source p = validate_source({p0, 1 - p0});
    for (std::int64_t n : {std::int64_t{16}, std::int64_t{64}, std::int64_t{256},
                           std::int64_t{1024}, std::int64_t{4096}}) {
      Lemma2Result r = lemma2_check(p, n);
      if (!r.holds)
        flunk(out, "violated at p0=" + fmt(p0) + " n=" + std::to_string(n) +
                       " (lhs " + fmt(r.lhs) + " rhs " + fmt(r.rhs) + ")");
    }
  }
  return out;
}

// --- 7: the gaussian achievable excess tracks (5/2)(ln n)/n ----------------

Outcome gaussian_correction_slope() {
  Outcome out;
  GaussianSpec spec = validate_gaussian_spec(1.0, 0.25, 0.05);
  std::vector<std::int64_t> ns;
  for (int i = 0; i < 13; ++i) {
    double t = static_cast<double>(i) / 12.0;
    ns.push_back(static_cast<std::int64_t>(std::llround(100.0 * std::pow(100.0, t))));
  }

  // no-intercept least squares of ach - normal on (ln n)/n and 1/n
  double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
  for (std::int64_t n : ns) {
    double ach = gaussian_achievable_rate(spec, n);
    double nor = gaussian_normal_approx(spec, n);
    double con = gaussian_converse_rate(spec, n);
    if (!(ach >= nor - 1e-12 && nor >= con - 1e-12))
      flunk(out, "ordering broken at n=" + std::to_string(n));
    double x1 = std::log(static_cast<double>(n)) / static_cast<double>(n);
    double x2 = 1.0 / static_cast<double>(n);
    double y = ach - nor;
    a11 += x1 * x1;
    a12 += x1 * x2;
    a22 += x2 * x2;
    b1 += x1 * y;
    b2 += x2 * y;
  }
  double det = a11 * a22 - a12 * a12;
  double slope = (b1 * a22 - b2 * a12) / det;
  if (std::abs(slope - 2.5) > 0.25)
    flunk(out, "log-term coefficient " + fmt(slope) + " outside 2.5 +/- 0.25");
  else if (out.pass)
    out.detail = "log-term coefficient " + fmt(slope);
  return out;
}

// --- 8: covering codes bracket the rate and meet excess targets ------------

Outcome covering_code_bracket() {
  Outcome out;
  Source p = validate_source({0.2, 0.8});
  Distortion dist = make_hamming_distortion(2);
  const double D = 0.25, eps = 0.1;

  RdfCache cache;
  for (int n = 4; n <= 12; ++n) {
    Codebook greedy = greedy_cover_code(p, dist, n, D, eps);
    double lb = converse_rate_bound(p, dist, n, D, eps);
    if (lb > greedy.rate() + 1e-12)
      flunk(out, "bound above greedy rate at n=" + std::to_string(n));

    // bookkeeping splits the excess budget: the type neighborhood leaks
    // at most 2L/n^2, the in-neighborhood tail gets the rest
    double offset = -2.0 * 2 / (static_cast<double>(n) * n);
    OracleResult o = rate_redundancy_oracle(p, dist, D, eps, n, offset, {}, &cache);
    Codebook tu = type_union_code(p, dist, n, D, o.delta_r, {}, {}, &cache);
    CoverageResult cov = coverage_exact(p, dist, tu, D);
    double excess = 1 - cov.covered_probability;
    if (excess > eps + 1e-12)
      flunk(out, "type-union excess " + fmt(excess) + " at n=" + std::to_string(n));
    if (tu.rate() < lb - 1e-12)
      flunk(out, "type-union rate below the bound at n=" + std::to_string(n));
  }

  CodebookCaps caps;
  caps.search_cap = 20;
  Codebook exact = exact_min_code(p, dist, 4, D, eps, caps);
  Codebook greedy4 = greedy_cover_code(p, dist, 4, D, eps);
  if (exact.words.size() > greedy4.words.size())
    flunk(out, "exhaustive search returned a larger code than greedy");
  if (coverage_exact(p, dist, exact, D).covered_probability < 1 - eps - 1e-12)
    flunk(out, "exhaustive code misses its coverage target");
  if (out.pass)
    out.detail = "n=4..12; exact " + std::to_string(exact.words.size()) +
                 " words vs greedy " + std::to_string(greedy4.words.size());
  return out;
}

// --- 9: the CLI is bytewise deterministic ----------------------------------

int run_cli(const std::string& args) {
  std::string cmd = "\"" + g_cli + "\" " + args;
  return std::system(cmd.c_str());
}

bool same_bytes(const std::string& a, const std::string& b, std::string* why) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa || !fb) {
    *why = "missing output file";
    return false;
  }
  std::ostringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  if (sa.str().empty()) {
    *why = "empty output file";
    return false;
  }
  if (sa.str() != sb.str()) {
    *why = "outputs differ between runs";
    return false;
  }
  return true;
}

Outcome cli_determinism() {
  Outcome out;
  if (g_cli.empty()) {
    flunk(out, "CLI path not supplied as argv[1]");
    return out;
  }
  const std::string src = "acceptance_source.json";
  {
    std::ofstream f(src, std::ios::binary);
    f << R"({"probs":[0.2,0.8],"distortion":{"kind":"hamming"}})" << "\n";
  }
  struct Job {
    const char* tag;
    std::string args;
  };
  const Job jobs[] = {
      {"curve",
       "curve --source " + src +
           " -D 0.05 --eps 0.05 --nmin 100 --nmax 1000 --geom 4 --oracle"},
      {"codebook",
       "codebook --source " + src +
           " -D 0.25 -n 4 --method greedy --eps 0.1 --coverage mc --seed 7 "
           "--samples 100000"},
      {"gaussian", "gaussian -D 0.25 --eps 0.05 --nmin 100 --nmax 1000 --geom 4"},
  };
  std::vector<std::string> scratch{src};
  for (const Job& job : jobs) {
    std::string fa = std::string("acceptance_") + job.tag + "_a.out";
    std::string fb = std::string("acceptance_") + job.tag + "_b.out";
    scratch.push_back(fa);
    scratch.push_back(fb);
    if (run_cli(job.args + " --output " + fa) != 0 ||
        run_cli(job.args + " --output " + fb) != 0) {
      flunk(out, std::string(job.tag) + " run failed");
      continue;
    }
    std::string why;
    if (!same_bytes(fa, fb, &why)) flunk(out, std::string(job.tag) + ": " + why);
  }
  for (const std::string& f : scratch) std::remove(f.c_str());
  return out;
}

struct Criterion {
  const char* name;
  double limit_s;  // 0 = no budget
  Outcome (*fn)();
};

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli = argv[1];

  const Criterion criteria[] = {
      {"closed-form rate functions", 10, closed_form_rates},
      {"dispersion route agreement", 300, dispersion_route_agreement},
      {"dispersion limits and plateaus", 0, dispersion_limits},
      {"gaussian closed forms and curvature", 0, gaussian_closed_forms},
      {"redundancy approaches the normal law", 600, oracle_approaches_normal_law},
      {"type concentration bound", 60, type_concentration_bound},
      {"gaussian correction slope", 60, gaussian_correction_slope},
      {"covering-code bracket", 900, covering_code_bracket},
      {"CLI determinism", 0, cli_determinism},
  };

  int failures = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    Outcome out;
    auto t0 = std::chrono::steady_clock::now();
    try {
      out = c.fn();
    } catch (const std::exception& e) {
      flunk(out, std::string("exception: ") + e.what());
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && secs > c.limit_s)
      flunk(out, "exceeded " + fmt(c.limit_s) + " s budget");
    std::printf("[%s] %d/%zu %s (%.2f s)%s%s\n", out.pass ? "PASS" : "FAIL", index,
                std::size(criteria), c.name, secs, out.detail.empty() ? "" : " -- ",
                out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures;
}

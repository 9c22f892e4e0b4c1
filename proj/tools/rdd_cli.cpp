// Command-line front end.  Talks to the library through the C surface
// only; report assembly (JSON/CSV framing, unit conversion, file IO)
// lives here so the core stays format-agnostic.
#include "rdd.h"

#include "CLI11.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

// 9 significant digits everywhere a float is printed: enough to round-trip
// visually meaningful precision while keeping reports byte-stable.
std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", static_cast<unsigned>(c));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

[[noreturn]] void die(const std::string& status_name, const std::string& context,
                      const std::string& message) {
  std::cerr << "{\"error\":\"" << json_escape(status_name) << "\",\"context\":\""
            << json_escape(context) << "\",\"message\":\"" << json_escape(message)
            << "\"}" << std::endl;
  std::exit(1);
}

void check(rdd_status st, const std::string& context) {
  if (st != RDD_OK) die(rdd_status_name(st), context, rdd_last_error_message());
}

// Flat JSON object writer; insertion order is emission order, so reports
// are deterministic by construction.
class JsonWriter {
 public:
  JsonWriter& raw(const std::string& key, const std::string& rendered) {
    if (!first_) body_ += ',';
    first_ = false;
    body_ += '"';
    body_ += key;
    body_ += "\":";
    body_ += rendered;
    return *this;
  }
  JsonWriter& num(const std::string& key, double v) { return raw(key, fmt9(v)); }
  JsonWriter& integer(const std::string& key, long long v) {
    return raw(key, std::to_string(v));
  }
  JsonWriter& uinteger(const std::string& key, unsigned long long v) {
    return raw(key, std::to_string(v));
  }
  JsonWriter& str(const std::string& key, const std::string& v) {
    return raw(key, "\"" + json_escape(v) + "\"");
  }
  JsonWriter& boolean(const std::string& key, bool v) {
    return raw(key, v ? "true" : "false");
  }
  JsonWriter& arr(const std::string& key, const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ',';
      s += fmt9(v[i]);
    }
    s += ']';
    return raw(key, s);
  }
  std::string close() const { return "{" + body_ + "}"; }

 private:
  std::string body_;
  bool first_ = true;
};

void emit(const std::string& output_path, const std::string& text) {
  std::string payload = text;
  if (payload.empty() || payload.back() != '\n') payload += '\n';
  if (output_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(output_path, std::ios::binary | std::ios::trunc);
  if (!f) die("IoError", "opening report file", "cannot open " + output_path);
  f << payload;
  if (!f) die("IoError", "writing report file", "write failed for " + output_path);
}

std::string slurp(const std::string& path, const std::string& context) {
  std::ifstream f(path, std::ios::binary);
  if (!f) die("IoError", context, "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct SourceDel {
  void operator()(rdd_source* p) const { rdd_source_free(p); }
};
struct DistDel {
  void operator()(rdd_distortion* p) const { rdd_distortion_free(p); }
};
struct SolutionDel {
  void operator()(rdd_rd_solution* p) const { rdd_rd_solution_free(p); }
};
struct ReportDel {
  void operator()(rdd_dispersion_report* p) const { rdd_dispersion_report_free(p); }
};
struct ExponentDel {
  void operator()(rdd_exponent_result* p) const { rdd_exponent_result_free(p); }
};
struct CurveDel {
  void operator()(rdd_rate_curve* p) const { rdd_rate_curve_free(p); }
};
struct CodebookDel {
  void operator()(rdd_codebook* p) const { rdd_codebook_free(p); }
};

using SourcePtr = std::unique_ptr<rdd_source, SourceDel>;
using DistPtr = std::unique_ptr<rdd_distortion, DistDel>;
using SolutionPtr = std::unique_ptr<rdd_rd_solution, SolutionDel>;
using ReportPtr = std::unique_ptr<rdd_dispersion_report, ReportDel>;
using ExponentPtr = std::unique_ptr<rdd_exponent_result, ExponentDel>;
using CurvePtr = std::unique_ptr<rdd_rate_curve, CurveDel>;
using CodebookPtr = std::unique_ptr<rdd_codebook, CodebookDel>;

struct Problem {
  SourcePtr source;
  DistPtr dist;
};

// The source spec file may carry its own distortion block; a --distortion
// flag overrides it.  Only the matrix-free "hamming" kind makes sense as
// a flag — anything needing a matrix belongs in the JSON.
Problem load_problem(const std::string& source_path, const std::string& kind_flag) {
  std::string text = slurp(source_path, "reading source spec");
  rdd_source* src = nullptr;
  rdd_distortion* dist = nullptr;
  check(rdd_spec_parse_json(text.c_str(), &src, &dist), "parsing " + source_path);
  Problem prob{SourcePtr(src), DistPtr(dist)};
  if (!kind_flag.empty()) {
    if (kind_flag != "hamming")
      die("InvalidArgument", "--distortion",
          "only 'hamming' can be requested by flag; difference/general measures go in "
          "the source JSON");
    rdd_distortion* h = nullptr;
    check(rdd_distortion_hamming(rdd_source_letters(src), &h), "building distortion");
    prob.dist.reset(h);
  }
  return prob;
}

rdd_distortion* require_dist(const Problem& prob) {
  if (!prob.dist)
    die("InvalidArgument", "distortion",
        "no distortion measure: add a distortion block to the source JSON or pass "
        "--distortion hamming");
  return prob.dist.get();
}

// Logarithmically spaced blocklengths, rounded, deduplicated, endpoints
// included.
std::vector<std::int64_t> geometric_grid(std::int64_t nmin, std::int64_t nmax,
                                         int points) {
  if (nmin < 1 || nmax < nmin)
    die("InvalidArgument", "blocklength grid", "need 1 <= nmin <= nmax");
  std::vector<std::int64_t> out;
  if (points < 2 || nmin == nmax) {
    out.push_back(nmin);
    if (nmax != nmin) out.push_back(nmax);
    return out;
  }
  const double lo = std::log(static_cast<double>(nmin));
  const double hi = std::log(static_cast<double>(nmax));
  for (int i = 0; i < points; ++i) {
    double t = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
    auto n = static_cast<std::int64_t>(std::llround(std::exp(t)));
    if (n < nmin) n = nmin;
    if (n > nmax) n = nmax;
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  return out;
}

const double kLn2 = std::log(2.0);

struct Unit {
  bool bits = false;
  double rate(double nats) const { return bits ? nats / kLn2 : nats; }
  double var(double nats2) const { return bits ? nats2 / (kLn2 * kLn2) : nats2; }
  std::vector<double> rates(std::vector<double> v) const {
    if (bits)
      for (double& x : v) x /= kLn2;
    return v;
  }
  const char* name() const { return bits ? "bits" : "nats"; }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rate-distortion, dispersion, and finite-blocklength toolkit"};
  app.set_version_flag("--version", std::string(rdd_version()));
  app.require_subcommand(1);

  // ---- rdf ----------------------------------------------------------------
  auto* c_rdf = app.add_subcommand("rdf", "rate-distortion operating point");
  std::string rdf_source, rdf_kind, rdf_output;
  double rdf_d = 0, rdf_slope = 0, rdf_tol = 0;
  bool rdf_bits = false;
  c_rdf->add_option("--source", rdf_source, "source spec JSON file")->required();
  c_rdf->add_option("--distortion", rdf_kind, "distortion kind override (hamming)");
  c_rdf->add_option("-D,--distortion-level", rdf_d, "target expected distortion");
  c_rdf->add_option("--slope", rdf_slope, "solve at this slope instead of -D");
  c_rdf->add_option("--tol", rdf_tol, "relative distortion tolerance (default 1e-7)");
  c_rdf->add_option("--output", rdf_output, "report path (default stdout)");
  c_rdf->add_flag("--bits", rdf_bits, "print rates in bits");
  c_rdf->callback([&] {
    Problem prob = load_problem(rdf_source, rdf_kind);
    rdd_distortion* dist = require_dist(prob);
    const bool got_d = c_rdf->count("-D") > 0;
    const bool got_slope = c_rdf->count("--slope") > 0;
    if (got_d == got_slope)
      die("InvalidArgument", "rdf", "pass exactly one of -D and --slope");
    rdd_rd_solution* raw = nullptr;
    if (got_slope)
      check(rdd_rd_at_slope(prob.source.get(), dist, rdf_slope, 0, &raw),
            "slope-parametrized solve");
    else
      check(rdd_rd_at_distortion(prob.source.get(), dist, rdf_d, rdf_tol, &raw),
            "rate-distortion solve");
    SolutionPtr sol(raw);
    std::vector<double> marginal(rdd_distortion_repro_letters(dist));
    check(rdd_rd_solution_copy_repro_marginal(sol.get(), marginal.data(), marginal.size()),
          "reading solution");
    Unit u{rdf_bits};
    JsonWriter w;
    w.str("command", "rdf")
        .num("rate", u.rate(rdd_rd_solution_rate(sol.get())))
        .num("distortion", rdd_rd_solution_distortion(sol.get()))
        .num("slope", rdd_rd_solution_slope(sol.get()))
        .integer("iterations", rdd_rd_solution_iterations(sol.get()))
        .arr("repro_marginal", marginal)
        .str("rate_unit", u.name());
    emit(rdf_output, w.close());
  });

  // ---- dispersion -----------------------------------------------------------
  auto* c_disp = app.add_subcommand("dispersion", "excess-distortion dispersion report");
  std::string disp_source, disp_kind, disp_output;
  double disp_d = 0;
  bool disp_exponent = false, disp_d0 = false, disp_bits = false;
  c_disp->add_option("--source", disp_source, "source spec JSON file")->required();
  c_disp->add_option("--distortion", disp_kind, "distortion kind override (hamming)");
  c_disp->add_option("-D,--distortion-level", disp_d, "distortion level")->required();
  c_disp->add_flag("--with-exponent", disp_exponent,
                   "also run the exponent-curvature route");
  c_disp->add_flag("--with-d0", disp_d0,
                   "also estimate the additive-backward-channel threshold");
  c_disp->add_option("--output", disp_output, "report path (default stdout)");
  c_disp->add_flag("--bits", disp_bits, "print rates in bits (variances in bits^2)");
  c_disp->callback([&] {
    Problem prob = load_problem(disp_source, disp_kind);
    rdd_distortion* dist = require_dist(prob);
    rdd_dispersion_report* raw = nullptr;
    check(rdd_dispersion_report_create(prob.source.get(), dist, disp_d,
                                       disp_exponent ? 1 : 0, disp_d0 ? 1 : 0, &raw),
          "dispersion report");
    ReportPtr rep(raw);
    const std::size_t letters = rdd_dispersion_letters(rep.get());
    std::vector<double> f(letters), rp(letters);
    check(rdd_dispersion_copy_f_values(rep.get(), f.data(), f.size()), "reading report");
    check(rdd_dispersion_copy_r_prime_deltas(rep.get(), rp.data(), rp.size()),
          "reading report");
    Unit u{disp_bits};
    JsonWriter w;
    w.str("command", "dispersion")
        .num("distortion", disp_d)
        .num("rate", u.rate(rdd_dispersion_rate(rep.get())))
        .num("v_tilted", u.var(rdd_dispersion_v_tilted(rep.get())))
        .num("v_derivative", u.var(rdd_dispersion_v_derivative(rep.get())));
    if (rdd_dispersion_has_v_exponent(rep.get()))
      w.num("v_exponent", u.var(rdd_dispersion_v_exponent(rep.get())));
    else if (disp_exponent)
      w.str("exponent_error", rdd_dispersion_exponent_error(rep.get()));
    w.num("max_pairwise_rel_gap", rdd_dispersion_max_pairwise_rel_gap(rep.get()))
        .boolean("jump_suspected", rdd_dispersion_jump_suspected(rep.get()) != 0)
        .arr("f_values", u.rates(f))
        .arr("r_prime_deltas", u.rates(rp));
    if (rdd_dispersion_has_d0(rep.get())) w.num("d0_estimate", rdd_dispersion_d0(rep.get()));
    w.str("rate_unit", u.name());
    emit(disp_output, w.close());
  });

  // ---- exponent --------------------------------------------------------------
  auto* c_exp = app.add_subcommand("exponent", "excess-distortion exponent at a rate");
  std::string exp_source, exp_kind, exp_output;
  double exp_d = 0, exp_rate = 0;
  int exp_resolution = 0;
  bool exp_bits = false;
  c_exp->add_option("--source", exp_source, "source spec JSON file")->required();
  c_exp->add_option("--distortion", exp_kind, "distortion kind override (hamming)");
  c_exp->add_option("-D,--distortion-level", exp_d, "distortion level")->required();
  c_exp->add_option("-R,--rate", exp_rate, "rate target in nats")->required();
  c_exp->add_option("--resolution", exp_resolution, "seed grid points per simplex axis");
  c_exp->add_option("--output", exp_output, "report path (default stdout)");
  c_exp->add_flag("--bits", exp_bits, "print rates in bits");
  c_exp->callback([&] {
    Problem prob = load_problem(exp_source, exp_kind);
    rdd_distortion* dist = require_dist(prob);
    rdd_exponent_result* raw = nullptr;
    check(rdd_exponent_solve(prob.source.get(), dist, exp_d, exp_rate, exp_resolution,
                             &raw),
          "exponent solve");
    ExponentPtr res(raw);
    std::vector<double> minimizer(rdd_exponent_letters(res.get()));
    check(rdd_exponent_copy_minimizer(res.get(), minimizer.data(), minimizer.size()),
          "reading minimizer");
    Unit u{exp_bits};
    JsonWriter w;
    w.str("command", "exponent")
        .num("distortion", exp_d)
        .num("rate_target", u.rate(exp_rate))
        .num("value", u.rate(rdd_exponent_value(res.get())))
        .num("rate_at_minimizer", u.rate(rdd_exponent_rate_at_minimizer(res.get())))
        .boolean("constraint_active", rdd_exponent_constraint_active(res.get()) != 0)
        .arr("minimizer", minimizer)
        .str("rate_unit", u.name());
    emit(exp_output, w.close());
  });

  // ---- curve ----------------------------------------------------------------
  auto* c_curve = app.add_subcommand(
      "curve", "finite-blocklength rate sweep (CSV, rates in nats)");
  std::string curve_source, curve_kind, curve_output;
  double curve_d = 0, curve_eps = 0;
  std::int64_t curve_nmin = 100, curve_nmax = 10000;
  int curve_geom = 10;
  bool curve_oracle = false;
  c_curve->add_option("--source", curve_source, "source spec JSON file")->required();
  c_curve->add_option("--distortion", curve_kind, "distortion kind override (hamming)");
  c_curve->add_option("-D,--distortion-level", curve_d, "distortion level")->required();
  c_curve->add_option("--eps", curve_eps, "excess-distortion probability")->required();
  c_curve->add_option("--nmin", curve_nmin, "smallest blocklength (default 100)");
  c_curve->add_option("--nmax", curve_nmax, "largest blocklength (default 10000)");
  c_curve->add_option("--geom", curve_geom,
                      "number of log-spaced blocklengths (default 10)");
  c_curve->add_flag("--oracle", curve_oracle,
                    "add the exact enumeration oracle and error-band columns");
  c_curve->add_option("--output", curve_output, "CSV path (default stdout)");
  c_curve->callback([&] {
    Problem prob = load_problem(curve_source, curve_kind);
    rdd_distortion* dist = require_dist(prob);
    std::vector<std::int64_t> ns = geometric_grid(curve_nmin, curve_nmax, curve_geom);
    rdd_rate_curve* raw = nullptr;
    check(rdd_rate_curve_create(prob.source.get(), dist, curve_d, curve_eps, ns.data(),
                                ns.size(), curve_oracle ? 1 : 0, &raw),
          "rate curve");
    CurvePtr curve(raw);
    char* csv = nullptr;
    check(rdd_rate_curve_csv(curve.get(), &csv), "rendering CSV");
    std::string text(csv);
    rdd_string_free(csv);
    emit(curve_output, text);
  });

  // ---- oracle ----------------------------------------------------------------
  auto* c_oracle = app.add_subcommand(
      "oracle", "exact rate redundancy at one blocklength by type enumeration");
  std::string oracle_source, oracle_kind, oracle_output;
  double oracle_d = 0, oracle_eps = 0, oracle_offset = 0;
  std::int64_t oracle_n = 0;
  bool oracle_bits = false;
  c_oracle->add_option("--source", oracle_source, "source spec JSON file")->required();
  c_oracle->add_option("--distortion", oracle_kind, "distortion kind override (hamming)");
  c_oracle->add_option("-D,--distortion-level", oracle_d, "distortion level")->required();
  c_oracle->add_option("--eps", oracle_eps, "excess-distortion probability")->required();
  c_oracle->add_option("-n,--blocklength", oracle_n, "blocklength")->required();
  c_oracle->add_option("--eps-offset", oracle_offset,
                       "additive adjustment to the tail target");
  c_oracle->add_option("--output", oracle_output, "report path (default stdout)");
  c_oracle->add_flag("--bits", oracle_bits, "print rates in bits");
  c_oracle->callback([&] {
    Problem prob = load_problem(oracle_source, oracle_kind);
    rdd_distortion* dist = require_dist(prob);
    double delta_r = 0, tail = 0, rdf = 0;
    check(rdd_rate_redundancy_oracle(prob.source.get(), dist, oracle_d, oracle_eps,
                                     oracle_n, oracle_offset, &delta_r, &tail, &rdf),
          "redundancy oracle");
    Unit u{oracle_bits};
    JsonWriter w;
    w.str("command", "oracle")
        .integer("n", oracle_n)
        .num("distortion", oracle_d)
        .num("eps", oracle_eps)
        .num("eps_offset", oracle_offset)
        .num("delta_r", u.rate(delta_r))
        .num("tail_probability", tail)
        .num("rate_rdf", u.rate(rdf))
        .str("rate_unit", u.name());
    emit(oracle_output, w.close());
  });

  // ---- lemma2 ----------------------------------------------------------------
  auto* c_lemma = app.add_subcommand(
      "lemma2", "exact tail of the empirical-type neighborhood vs the 2L/n^2 bound");
  std::string lemma_source, lemma_output;
  std::int64_t lemma_n = 0;
  c_lemma->add_option("--source", lemma_source, "source spec JSON file")->required();
  c_lemma->add_option("-n,--blocklength", lemma_n, "blocklength")->required();
  c_lemma->add_option("--output", lemma_output, "report path (default stdout)");
  c_lemma->callback([&] {
    Problem prob = load_problem(lemma_source, "");
    double lhs = 0, rhs = 0;
    int holds = 0;
    check(rdd_lemma2_check(prob.source.get(), lemma_n, &lhs, &rhs, &holds),
          "type-neighborhood tail");
    JsonWriter w;
    w.str("command", "lemma2")
        .integer("n", lemma_n)
        .num("lhs", lhs)
        .num("rhs", rhs)
        .boolean("holds", holds != 0);
    emit(lemma_output, w.close());
  });

  // ---- codebook ----------------------------------------------------------------
  auto* c_code = app.add_subcommand(
      "codebook", "build or load a covering code and measure its coverage");
  std::string code_source, code_kind, code_output, code_method, code_load, code_save,
      code_coverage = "exact";
  double code_d = 0, code_eps = -1, code_delta_r = -1;
  int code_n = 0;
  std::uint64_t code_seed = 0, code_samples = 1000000;
  bool code_converse = false, code_bits = false;
  c_code->add_option("--source", code_source, "source spec JSON file")->required();
  c_code->add_option("--distortion", code_kind, "distortion kind override (hamming)");
  c_code->add_option("-D,--distortion-level", code_d, "distortion level")->required();
  c_code->add_option("-n,--blocklength", code_n, "blocklength (build methods)");
  c_code->add_option("--method", code_method,
                     "construction: greedy | exact | type-union")
      ->check(CLI::IsMember({"greedy", "exact", "type-union"}));
  c_code->add_option("--load", code_load, "read the codebook from this text file");
  c_code->add_option("--save", code_save, "write the codebook text here");
  c_code->add_option("--eps", code_eps,
                     "coverage shortfall target (greedy/exact/converse)");
  c_code->add_option("--delta-r", code_delta_r, "rate redundancy budget (type-union)");
  c_code->add_option("--coverage", code_coverage, "coverage evaluation: exact | mc")
      ->check(CLI::IsMember({"exact", "mc"}));
  c_code->add_option("--seed", code_seed, "RNG seed (required for --coverage mc)");
  c_code->add_option("--samples", code_samples, "Monte Carlo sample count");
  c_code->add_flag("--converse", code_converse, "add the ball-counting rate bound");
  c_code->add_option("--output", code_output, "report path (default stdout)");
  c_code->add_flag("--bits", code_bits, "print rates in bits");
  c_code->callback([&] {
    Problem prob = load_problem(code_source, code_kind);
    rdd_distortion* dist = require_dist(prob);
    const bool mc = code_coverage == "mc";
    if (mc && c_code->count("--seed") == 0)
      die("InvalidArgument", "codebook", "--coverage mc needs an explicit --seed");
    if (code_method.empty() == code_load.empty())
      die("InvalidArgument", "codebook", "pass exactly one of --method and --load");

    CodebookPtr cb;
    std::string method_name;
    if (!code_load.empty()) {
      std::string text = slurp(code_load, "reading codebook");
      rdd_codebook* raw = nullptr;
      check(rdd_codebook_parse_text(text.c_str(), &raw), "parsing codebook");
      cb.reset(raw);
      method_name = "loaded";
    } else {
      if (code_n <= 0)
        die("InvalidArgument", "codebook", "build methods need a blocklength -n");
      rdd_codebook* raw = nullptr;
      if (code_method == "greedy") {
        if (code_eps < 0)
          die("InvalidArgument", "codebook", "greedy construction needs --eps");
        check(rdd_greedy_cover_code(prob.source.get(), dist, code_n, code_d, code_eps,
                                    &raw),
              "greedy construction");
      } else if (code_method == "exact") {
        if (code_eps < 0)
          die("InvalidArgument", "codebook", "exact construction needs --eps");
        check(rdd_exact_min_code(prob.source.get(), dist, code_n, code_d, code_eps, &raw),
              "exhaustive construction");
      } else {
        if (code_delta_r < 0)
          die("InvalidArgument", "codebook", "type-union construction needs --delta-r");
        check(rdd_type_union_code(prob.source.get(), dist, code_n, code_d, code_delta_r,
                                  &raw),
              "type-union construction");
      }
      cb.reset(raw);
      method_name = code_method;
    }

    if (!code_save.empty()) {
      char* text = nullptr;
      check(rdd_codebook_to_text(cb.get(), &text), "rendering codebook");
      std::string body(text);
      rdd_string_free(text);
      emit(code_save, body);
    }

    rdd_coverage_result cov{};
    if (mc)
      check(rdd_coverage_mc(prob.source.get(), dist, cb.get(), code_d, code_seed,
                            code_samples, &cov),
            "Monte Carlo coverage");
    else
      check(rdd_coverage_exact(prob.source.get(), dist, cb.get(), code_d, &cov),
            "exact coverage");

    double code_rate = 0;
    check(rdd_codebook_rate(cb.get(), &code_rate), "codebook rate");
    Unit u{code_bits};

    JsonWriter wc;
    wc.num("covered_probability", cov.covered_probability)
        .str("method", cov.monte_carlo ? "mc" : "exact")
        .num("mc_stderr", cov.mc_stderr)
        .uinteger("seed", cov.seed);
    if (cov.monte_carlo) wc.uinteger("samples", cov.samples);

    JsonWriter w;
    w.str("command", "codebook")
        .str("method", method_name)
        .integer("n", rdd_codebook_block_length(cb.get()))
        .num("distortion", code_d);
    if (code_eps >= 0) w.num("eps", code_eps);
    if (code_delta_r >= 0) w.num("delta_r", u.rate(code_delta_r));
    w.uinteger("word_count", rdd_codebook_word_count(cb.get()))
        .num("rate", u.rate(code_rate))
        .raw("coverage", wc.close());
    if (code_converse) {
      if (code_eps < 0)
        die("InvalidArgument", "codebook", "--converse needs --eps");
      double bound = 0;
      check(rdd_converse_rate_bound(prob.source.get(), dist,
                                    rdd_codebook_block_length(cb.get()), code_d, code_eps,
                                    &bound),
            "converse bound");
      w.num("converse_rate_bound", u.rate(bound));
    }
    w.str("rate_unit", u.name());
    emit(code_output, w.close());
  });

  // ---- gaussian ----------------------------------------------------------------
  auto* c_gauss = app.add_subcommand(
      "gaussian", "quadratic-Gaussian rate sweep (CSV, rates in nats)");
  double g_var = 1, g_d = 0, g_eps = 0, g_c0 = 0;
  std::int64_t g_nmin = 100, g_nmax = 10000;
  int g_geom = 10;
  std::string g_output;
  c_gauss->add_option("--var", g_var, "source variance (default 1)");
  c_gauss->add_option("-D,--D", g_d, "distortion level")->required();
  c_gauss->add_option("--eps", g_eps, "excess-distortion probability")->required();
  c_gauss->add_option("--nmin", g_nmin, "smallest blocklength (default 100)");
  c_gauss->add_option("--nmax", g_nmax, "largest blocklength (default 10000)");
  c_gauss->add_option("--geom", g_geom, "number of log-spaced blocklengths (default 10)");
  c_gauss->add_option("--c0", g_c0, "extra c0/n additive term in the achievable rate");
  c_gauss->add_option("--output", g_output, "CSV path (default stdout)");
  c_gauss->callback([&] {
    std::vector<std::int64_t> ns = geometric_grid(g_nmin, g_nmax, g_geom);
    char* csv = nullptr;
    check(rdd_gaussian_curve_csv(g_var, g_d, g_eps, ns.data(), ns.size(), g_c0, &csv),
          "gaussian curve");
    std::string text(csv);
    rdd_string_free(csv);
    emit(g_output, text);
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

// C surface over the core library.  Exceptions stop here: every entry
// point traps them, records the message thread-locally, and returns the
// matching status code.
#include "rdd.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rdd/codebook.hpp"
#include "rdd/dispersion.hpp"
#include "rdd/errors.hpp"
#include "rdd/exponent.hpp"
#include "rdd/finite_blocklength.hpp"
#include "rdd/gaussian.hpp"
#include "rdd/pmf.hpp"
#include "rdd/rd_solver.hpp"

struct rdd_source {
  rdd::Source impl;
};
struct rdd_distortion {
  rdd::Distortion impl;
};
struct rdd_rd_solution {
  rdd::RdSolution impl;
};
struct rdd_dispersion_report {
  rdd::DispersionReport impl;
};
struct rdd_exponent_result {
  rdd::ExponentSolution impl;
};
struct rdd_rate_curve {
  rdd::RateCurve impl;
};
struct rdd_codebook {
  rdd::Codebook impl;
};

namespace {

thread_local std::string t_last_error;

rdd_status to_status(rdd::errc c) {
  using rdd::errc;
  switch (c) {
    case errc::ok: return RDD_OK;
    case errc::invalid_argument: return RDD_ERR_INVALID_ARGUMENT;
    case errc::non_positive_mass: return RDD_ERR_NON_POSITIVE_MASS;
    case errc::not_normalized: return RDD_ERR_NOT_NORMALIZED;
    case errc::dimension_mismatch: return RDD_ERR_DIMENSION_MISMATCH;
    case errc::negative_distortion: return RDD_ERR_NEGATIVE_DISTORTION;
    case errc::no_zero_row_min: return RDD_ERR_NO_ZERO_ROW_MIN;
    case errc::d_out_of_range: return RDD_ERR_D_OUT_OF_RANGE;
    case errc::no_convergence: return RDD_ERR_NO_CONVERGENCE;
    case errc::solver_failure: return RDD_ERR_SOLVER_FAILURE;
    case errc::zero_variance: return RDD_ERR_ZERO_VARIANCE;
    case errc::rate_below_rdf: return RDD_ERR_RATE_BELOW_RDF;
    case errc::infeasible: return RDD_ERR_INFEASIBLE;
    case errc::grid_cap_exceeded: return RDD_ERR_GRID_CAP_EXCEEDED;
    case errc::atlas_too_large: return RDD_ERR_ATLAS_TOO_LARGE;
    case errc::poor_fit: return RDD_ERR_POOR_FIT;
    case errc::enumeration_too_large: return RDD_ERR_ENUMERATION_TOO_LARGE;
    case errc::search_space_too_large: return RDD_ERR_SEARCH_SPACE_TOO_LARGE;
    case errc::unreachable_coverage: return RDD_ERR_UNREACHABLE_COVERAGE;
    case errc::parse_error: return RDD_ERR_PARSE;
    case errc::io_error: return RDD_ERR_IO;
  }
  return RDD_ERR_INTERNAL;
}

template <typename F>
rdd_status guarded(F&& body) noexcept {
  try {
    body();
    t_last_error.clear();
    return RDD_OK;
  } catch (const rdd::error& e) {
    t_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return RDD_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unidentified failure";
    return RDD_ERR_INTERNAL;
  }
}

rdd_status null_arg(const char* name) noexcept {
  t_last_error = std::string(name) + " must not be NULL";
  return RDD_ERR_NULL_ARGUMENT;
}

rdd_status copy_out(const std::vector<double>& v, double* buf, size_t count,
                    const char* what) noexcept {
  if (buf == nullptr) return null_arg("buf");
  if (count < v.size()) {
    t_last_error = std::string(what) + " needs " + std::to_string(v.size()) +
                   " slots, got " + std::to_string(count);
    return RDD_ERR_BUFFER_TOO_SMALL;
  }
  std::memcpy(buf, v.data(), v.size() * sizeof(double));
  t_last_error.clear();
  return RDD_OK;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

extern "C" {

const char* rdd_version(void) { return "1.0.0"; }

const char* rdd_status_name(rdd_status status) {
  switch (status) {
    case RDD_OK: return "Ok";
    case RDD_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case RDD_ERR_NON_POSITIVE_MASS: return "NonPositiveMass";
    case RDD_ERR_NOT_NORMALIZED: return "NotNormalized";
    case RDD_ERR_DIMENSION_MISMATCH: return "DimensionMismatch";
    case RDD_ERR_NEGATIVE_DISTORTION: return "NegativeDistortion";
    case RDD_ERR_NO_ZERO_ROW_MIN: return "NoZeroRowMin";
    case RDD_ERR_D_OUT_OF_RANGE: return "DOutOfRange";
    case RDD_ERR_NO_CONVERGENCE: return "NoConvergence";
    case RDD_ERR_SOLVER_FAILURE: return "SolverFailure";
    case RDD_ERR_ZERO_VARIANCE: return "ZeroVariance";
    case RDD_ERR_RATE_BELOW_RDF: return "RateBelowRdf";
    case RDD_ERR_INFEASIBLE: return "Infeasible";
    case RDD_ERR_GRID_CAP_EXCEEDED: return "GridCapExceeded";
    case RDD_ERR_ATLAS_TOO_LARGE: return "AtlasTooLarge";
    case RDD_ERR_POOR_FIT: return "PoorFit";
    case RDD_ERR_ENUMERATION_TOO_LARGE: return "EnumerationTooLarge";
    case RDD_ERR_SEARCH_SPACE_TOO_LARGE: return "SearchSpaceTooLarge";
    case RDD_ERR_UNREACHABLE_COVERAGE: return "UnreachableCoverage";
    case RDD_ERR_PARSE: return "ParseError";
    case RDD_ERR_IO: return "IoError";
    case RDD_ERR_NULL_ARGUMENT: return "NullArgument";
    case RDD_ERR_BUFFER_TOO_SMALL: return "BufferTooSmall";
    case RDD_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* rdd_last_error_message(void) { return t_last_error.c_str(); }

void rdd_string_free(char* text) { delete[] text; }

/* ---- sources and distortion measures ---------------------------------- */

rdd_status rdd_source_create(const double* probs, size_t count, rdd_source** out_source) {
  if (probs == nullptr) return null_arg("probs");
  if (out_source == nullptr) return null_arg("out_source");
  return guarded([&] {
    std::vector<double> v(probs, probs + count);
    *out_source = new rdd_source{rdd::validate_source(std::move(v), /*strict=*/true)};
  });
}

rdd_status rdd_spec_parse_json(const char* json_text, rdd_source** out_source,
                               rdd_distortion** out_distortion) {
  if (json_text == nullptr) return null_arg("json_text");
  if (out_source == nullptr) return null_arg("out_source");
  if (out_distortion == nullptr) return null_arg("out_distortion");
  return guarded([&] {
    rdd::SourceSpec spec = rdd::parse_source_spec(json_text);
    *out_source = new rdd_source{std::move(spec.source)};
    *out_distortion = spec.distortion.has_value()
                          ? new rdd_distortion{std::move(*spec.distortion)}
                          : nullptr;
  });
}

void rdd_source_free(rdd_source* source) { delete source; }

size_t rdd_source_letters(const rdd_source* source) {
  return source == nullptr ? 0 : source->impl.size();
}

rdd_status rdd_source_copy_probs(const rdd_source* source, double* buf, size_t count) {
  if (source == nullptr) return null_arg("source");
  return copy_out(source->impl.probs, buf, count, "probs");
}

rdd_status rdd_distortion_hamming(size_t letters, rdd_distortion** out) {
  if (out == nullptr) return null_arg("out");
  return guarded([&] { *out = new rdd_distortion{rdd::make_hamming_distortion(letters)}; });
}

rdd_status rdd_distortion_difference(const double* per_shift, size_t count,
                                     rdd_distortion** out) {
  if (per_shift == nullptr) return null_arg("per_shift");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    std::vector<double> dz(per_shift, per_shift + count);
    *out = new rdd_distortion{rdd::make_difference_distortion(dz)};
  });
}

rdd_status rdd_distortion_general(size_t source_letters, size_t repro_letters,
                                  const double* row_major, rdd_distortion** out) {
  if (row_major == nullptr) return null_arg("row_major");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    std::vector<double> m(row_major, row_major + source_letters * repro_letters);
    *out = new rdd_distortion{
        rdd::make_general_distortion(source_letters, repro_letters, std::move(m))};
  });
}

void rdd_distortion_free(rdd_distortion* dist) { delete dist; }

size_t rdd_distortion_source_letters(const rdd_distortion* dist) {
  return dist == nullptr ? 0 : dist->impl.num_source_letters;
}

size_t rdd_distortion_repro_letters(const rdd_distortion* dist) {
  return dist == nullptr ? 0 : dist->impl.num_repro_letters;
}

rdd_status rdd_trivial_distortion(const rdd_source* source, const rdd_distortion* dist,
                                  double* out) {
  if (source == nullptr) return null_arg("source");
  if (dist == nullptr) return null_arg("dist");
  if (out == nullptr) return null_arg("out");
  return guarded([&] { *out = rdd::trivial_distortion(source->impl.probs, dist->impl); });
}

/* ---- rate-distortion curve --------------------------------------------- */

rdd_status rdd_rd_at_distortion(const rdd_source* source, const rdd_distortion* dist,
                                double distortion, double rel_tol, rdd_rd_solution** out) {
  if (source == nullptr) return null_arg("source");
  if (dist == nullptr) return null_arg("dist");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    double tol = rel_tol > 0 ? rel_tol : 1e-7;
    *out = new rdd_rd_solution{
        rdd::rd_at_distortion(source->impl, dist->impl, distortion, tol)};
  });
}

rdd_status rdd_rd_at_slope(const rdd_source* source, const rdd_distortion* dist,
                           double lambda, double gap_tol, rdd_rd_solution** out) {
  if (source == nullptr) return null_arg("source");
  if (dist == nullptr) return null_arg("dist");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    double tol = gap_tol > 0 ? gap_tol : 1e-9;
    *out = new rdd_rd_solution{rdd::rd_at_slope(source->impl, dist->impl, lambda, tol)};
  });
}

void rdd_rd_solution_free(rdd_rd_solution* solution) { delete solution; }

double rdd_rd_solution_rate(const rdd_rd_solution* s) {
  return s == nullptr ? kNaN : s->impl.rate;
}
double rdd_rd_solution_distortion(const rdd_rd_solution* s) {
  return s == nullptr ? kNaN : s->impl.distortion;
}
double rdd_rd_solution_slope(const rdd_rd_solution* s) {
  return s == nullptr ? kNaN : s->impl.lambda;
}
int rdd_rd_solution_iterations(const rdd_rd_solution* s) {
  return s == nullptr ? 0 : s->impl.iterations;
}

rdd_status rdd_rd_solution_copy_repro_marginal(const rdd_rd_solution* s, double* buf,
                                               size_t count) {
  if (s == nullptr) return null_arg("solution");
  return copy_out(s->impl.repro_marginal, buf, count, "repro marginal");
}

rdd_status rdd_rdf_value(const rdd_source* source, const rdd_distortion* dist,
                         double distortion, double* out_rate) {
  if (source == nullptr) return null_arg("source");
  if (dist == nullptr) return null_arg("dist");
  if (out_rate == nullptr) return null_arg("out_rate");
  return guarded(
      [&] { *out_rate = rdd::rdf_value(source->impl.probs, dist->impl, distortion); });
}

/* ---- dispersion --------------------------------------------------------- */

rdd_status rdd_dispersion_report_create(const rdd_source* source,
                                        const rdd_distortion* dist, double distortion,
                                        int with_exponent, int with_d0,
                                        rdd_dispersion_report** out) {
  if (source == nullptr) return null_arg("source");
  if (dist == nullptr) return null_arg("dist");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    rdd::DispersionOptions options;
    options.with_exponent = with_exponent != 0;
    options.with_d0 = with_d0 != 0;
    *out = new rdd_dispersion_report{
        rdd::dispersion_report(source->impl, dist->impl, distortion, options)};
  });
}

void rdd_dispersion_report_free(rdd_dispersion_report* report) { delete report; }

double rdd_dispersion_rate(const rdd_dispersion_report* r) {
  return r == nullptr ? kNaN : r->impl.rate;
}
double rdd_dispersion_v_tilted(const rdd_dispersion_report* r) {
  return r == nullptr ? kNaN : r->impl.v_tilted;
}
double rdd_dispersion_v_derivative(const rdd_dispersion_report* r) {
  return r == nullptr ? kNaN : r->impl.v_derivative;
}
int rdd_dispersion_has_v_exponent(const rdd_dispersion_report* r) {
  return r != nullptr && r->impl.v_exponent.has_value() ? 1 : 0;
}
double rdd_dispersion_v_exponent(const rdd_dispersion_report* r) {
  return r != nullptr && r->impl.v_exponent.has_value() ? *r->impl.v_exponent : kNaN;
}
const char* rdd_dispersion_exponent_error(const rdd_dispersion_report* r) {
  return r == nullptr ? "" : r->impl.exponent_error.c_str();
}
int rdd_dispersion_jump_suspected(const rdd_dispersion_report* r) {
  return r != nullptr && r->impl.jump_suspected ? 1 : 0;
}
double rdd_dispersion_max_pairwise_rel_gap(const rdd_dispersion_report* r) {
  return r == nullptr ? kNaN : r->impl.max_pairwise_rel_gap;
}
int rdd_dispersion_has_d0(const rdd_dispersion_report* r) {
  return r != nullptr && r->impl.d0_estimate.has_value() ? 1 : 0;
}
double rdd_dispersion_d0(const rdd_dispersion_report* r) {
  return r != nullptr && r->impl.d0_estimate.has_value() ? *r->impl.d0_estimate : kNaN;
}
size_t rdd_dispersion_letters(const rdd_dispersion_report* r) {
  return r == nullptr ? 0 : r->impl.f_values.size();
}

rdd_status rdd_dispersion_copy_f_values(const rdd_dispersion_report* r, double* buf,
                                        size_t count) {
  if (r == nullptr) return null_arg("report");
  return copy_out(r->impl.f_values, buf, count, "f values");
}

rdd_status rdd_dispersion_copy_r_prime_deltas(const rdd_dispersion_report* r, double* buf,
                                              size_t count) {
  if (r == nullptr) return null_arg("report");
  return copy_out(r->impl.r_prime_deltas, buf, count, "derivative deltas");
}

rdd_status rdd_lossless_dispersion(const rdd_source* source, double* out) {
  if (source == nullptr) return null_arg("source");
  if (out == nullptr) return null_arg("out");
  return guarded([&] { *out = rdd::lossless_dispersion(source->impl); });
}

/* ---- excess-distortion exponent ----------------------------------------- */

rdd_status rdd_exponent_solve(const rdd_source* source, const rdd_distortion* dist,
                              double distortion, double rate_target, int resolution,
                              rdd_exponent_result** out) {
  if (source == nullptr) return null_arg("source");
  if (dist == nullptr) return null_arg("dist");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    rdd::ExponentOptions opts;
    if (resolution > 0) opts.resolution = resolution;
    *out = new rdd_exponent_result{
        rdd::exponent(source->impl, dist->impl, distortion, rate_target, opts)};
  });
}

void rdd_exponent_result_free(rdd_exponent_result* result) { delete result; }

double rdd_exponent_value(const rdd_exponent_result* r) {
  return r == nullptr ? kNaN : r->impl.value;
}
double rdd_exponent_rate_at_minimizer(const rdd_exponent_result* r) {
  return r == nullptr ? kNaN : r->impl.rate_at_minimizer;
}
int rdd_exponent_constraint_active(const rdd_exponent_result* r) {
  return r != nullptr && r->impl.constraint_active ? 1 : 0;
}
size_t rdd_exponent_letters(const rdd_exponent_result* r) {
  return r == nullptr ? 0 : r->impl.minimizer.size();
}

rdd_status rdd_exponent_copy_minimizer(const rdd_exponent_result* r, double* buf,
                                       size_t count) {
  if (r == nullptr) return null_arg("result");
  return copy_out(r->impl.minimizer, buf, count, "minimizer");
}

/* ---- finite-blocklength rates ------------------------------------------- */

rdd_status rdd_normal_approx_rate(const rdd_source* source, const rdd_distortion* dist,
                                  double distortion, double eps, int64_t n,
                                  double* out_rate) {
  if (source == nullptr) return null_arg("source");
  if (dist == nullptr) return null_arg("dist");
  if (out_rate == nullptr) return null_arg("out_rate");
  return guarded([&] {
    *out_rate = rdd::normal_approx_rate(source->impl, dist->impl, distortion, eps, n);
  });
}

rdd_status rdd_rate_redundancy_oracle(const rdd_source* source, const rdd_distortion* dist,
                                      double distortion, double eps, int64_t n,
                                      double eps_offset, double* out_delta_r,
                                      double* out_tail_probability,
                                      double* out_rate_rdf) {
  if (source == nullptr) return null_arg("source");
  if (dist == nullptr) return null_arg("dist");
  return guarded([&] {
    rdd::OracleResult res = rdd::rate_redundancy_oracle(source->impl, dist->impl,
                                                        distortion, eps, n, eps_offset);
    if (out_delta_r != nullptr) *out_delta_r = res.delta_r;
    if (out_tail_probability != nullptr) *out_tail_probability = res.tail_probability;
    if (out_rate_rdf != nullptr) *out_rate_rdf = res.rate_rdf;
  });
}

rdd_status rdd_berry_esseen_halfwidth(const rdd_source* source, const rdd_distortion* dist,
                                      double distortion, double eps, int64_t n,
                                      double* out_halfwidth) {
  if (source == nullptr) return null_arg("source");
  if (dist == nullptr) return null_arg("dist");
  if (out_halfwidth == nullptr) return null_arg("out_halfwidth");
  return guarded([&] {
    *out_halfwidth =
        rdd::berry_esseen_halfwidth(source->impl, dist->impl, distortion, eps, n);
  });
}

rdd_status rdd_lemma2_check(const rdd_source* source, int64_t n, double* out_lhs,
                            double* out_rhs, int* out_holds) {
  if (source == nullptr) return null_arg("source");
  return guarded([&] {
    rdd::Lemma2Result res = rdd::lemma2_check(source->impl, n);
    if (out_lhs != nullptr) *out_lhs = res.lhs;
    if (out_rhs != nullptr) *out_rhs = res.rhs;
    if (out_holds != nullptr) *out_holds = res.holds ? 1 : 0;
  });
}

rdd_status rdd_rate_curve_create(const rdd_source* source, const rdd_distortion* dist,
                                 double distortion, double eps, const int64_t* n_list,
                                 size_t count, int with_oracle, rdd_rate_curve** out) {
  if (source == nullptr) return null_arg("source");
  if (dist == nullptr) return null_arg("dist");
  if (n_list == nullptr) return null_arg("n_list");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    std::vector<std::int64_t> ns(n_list, n_list + count);
    *out = new rdd_rate_curve{rdd::rate_curve(source->impl, dist->impl, distortion, eps,
                                              ns, with_oracle != 0)};
  });
}

void rdd_rate_curve_free(rdd_rate_curve* curve) { delete curve; }

double rdd_rate_curve_rdf(const rdd_rate_curve* c) {
  return c == nullptr ? kNaN : c->impl.rate_rdf;
}
double rdd_rate_curve_dispersion(const rdd_rate_curve* c) {
  return c == nullptr ? kNaN : c->impl.dispersion;
}

rdd_status rdd_rate_curve_csv(const rdd_rate_curve* curve, char** out_text) {
  if (curve == nullptr) return null_arg("curve");
  if (out_text == nullptr) return null_arg("out_text");
  return guarded([&] { *out_text = dup_string(rdd::rate_curve_csv(curve->impl)); });
}

/* ---- quadratic-Gaussian source ------------------------------------------ */

rdd_status rdd_gaussian_rdf(double variance, double distortion, double* out) {
  if (out == nullptr) return null_arg("out");
  return guarded([&] { *out = rdd::gaussian_rdf(variance, distortion); });
}

rdd_status rdd_gaussian_exponent(double variance, double distortion, double rate,
                                 double* out) {
  if (out == nullptr) return null_arg("out");
  return guarded([&] { *out = rdd::gaussian_exponent(variance, distortion, rate); });
}

rdd_status rdd_chi2_tail(int64_t dof, double threshold, double* out) {
  if (out == nullptr) return null_arg("out");
  return guarded([&] { *out = rdd::chi2_tail(dof, threshold); });
}

rdd_status rdd_chi2_tail_inverse(int64_t dof, double eps, double* out) {
  if (out == nullptr) return null_arg("out");
  return guarded([&] { *out = rdd::chi2_tail_inverse(dof, eps); });
}

rdd_status rdd_gaussian_achievable_rate(double variance, double distortion, double eps,
                                        int64_t n, double c0, double* out) {
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    rdd::GaussianSpec spec = rdd::validate_gaussian_spec(variance, distortion, eps);
    *out = rdd::gaussian_achievable_rate(spec, n, c0);
  });
}

rdd_status rdd_gaussian_normal_approx(double variance, double distortion, double eps,
                                      int64_t n, double* out) {
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    rdd::GaussianSpec spec = rdd::validate_gaussian_spec(variance, distortion, eps);
    *out = rdd::gaussian_normal_approx(spec, n);
  });
}

rdd_status rdd_gaussian_converse_rate(double variance, double distortion, double eps,
                                      int64_t n, double* out) {
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    rdd::GaussianSpec spec = rdd::validate_gaussian_spec(variance, distortion, eps);
    *out = rdd::gaussian_converse_rate(spec, n);
  });
}

rdd_status rdd_gaussian_curve_csv(double variance, double distortion, double eps,
                                  const int64_t* n_list, size_t count, double c0,
                                  char** out_text) {
  if (n_list == nullptr) return null_arg("n_list");
  if (out_text == nullptr) return null_arg("out_text");
  return guarded([&] {
    rdd::GaussianSpec spec = rdd::validate_gaussian_spec(variance, distortion, eps);
    std::vector<std::int64_t> ns(n_list, n_list + count);
    *out_text = dup_string(rdd::gaussian_curve_csv(rdd::gaussian_curve(spec, ns, c0)));
  });
}

/* ---- desk-scale covering codes ------------------------------------------ */

rdd_status rdd_codebook_parse_text(const char* text, rdd_codebook** out) {
  if (text == nullptr) return null_arg("text");
  if (out == nullptr) return null_arg("out");
  return guarded([&] { *out = new rdd_codebook{rdd::codebook_parse_text(text)}; });
}

rdd_status rdd_codebook_to_text(const rdd_codebook* codebook, char** out_text) {
  if (codebook == nullptr) return null_arg("codebook");
  if (out_text == nullptr) return null_arg("out_text");
  return guarded([&] { *out_text = dup_string(rdd::codebook_to_text(codebook->impl)); });
}

void rdd_codebook_free(rdd_codebook* codebook) { delete codebook; }

int rdd_codebook_block_length(const rdd_codebook* cb) {
  return cb == nullptr ? 0 : cb->impl.n;
}
size_t rdd_codebook_word_count(const rdd_codebook* cb) {
  return cb == nullptr ? 0 : cb->impl.words.size();
}
size_t rdd_codebook_repro_letters(const rdd_codebook* cb) {
  return cb == nullptr ? 0 : cb->impl.repro_alphabet;
}

rdd_status rdd_codebook_rate(const rdd_codebook* cb, double* out) {
  if (cb == nullptr) return null_arg("codebook");
  if (out == nullptr) return null_arg("out");
  return guarded([&] { *out = cb->impl.rate(); });
}

rdd_status rdd_greedy_cover_code(const rdd_source* source, const rdd_distortion* dist,
                                 int n, double distortion, double eps,
                                 rdd_codebook** out) {
  if (source == nullptr) return null_arg("source");
  if (dist == nullptr) return null_arg("dist");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    *out = new rdd_codebook{
        rdd::greedy_cover_code(source->impl, dist->impl, n, distortion, eps)};
  });
}

rdd_status rdd_exact_min_code(const rdd_source* source, const rdd_distortion* dist, int n,
                              double distortion, double eps, rdd_codebook** out) {
  if (source == nullptr) return null_arg("source");
  if (dist == nullptr) return null_arg("dist");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    *out = new rdd_codebook{
        rdd::exact_min_code(source->impl, dist->impl, n, distortion, eps)};
  });
}

rdd_status rdd_type_union_code(const rdd_source* source, const rdd_distortion* dist,
                               int n, double distortion, double delta_r,
                               rdd_codebook** out) {
  if (source == nullptr) return null_arg("source");
  if (dist == nullptr) return null_arg("dist");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    *out = new rdd_codebook{
        rdd::type_union_code(source->impl, dist->impl, n, distortion, delta_r)};
  });
}

rdd_status rdd_converse_rate_bound(const rdd_source* source, const rdd_distortion* dist,
                                   int n, double distortion, double eps, double* out) {
  if (source == nullptr) return null_arg("source");
  if (dist == nullptr) return null_arg("dist");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    *out = rdd::converse_rate_bound(source->impl, dist->impl, n, distortion, eps);
  });
}

rdd_status rdd_coverage_exact(const rdd_source* source, const rdd_distortion* dist,
                              const rdd_codebook* codebook, double distortion,
                              rdd_coverage_result* out) {
  if (source == nullptr) return null_arg("source");
  if (dist == nullptr) return null_arg("dist");
  if (codebook == nullptr) return null_arg("codebook");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    rdd::CoverageResult res =
        rdd::coverage_exact(source->impl, dist->impl, codebook->impl, distortion);
    *out = rdd_coverage_result{res.covered_probability, res.monte_carlo ? 1 : 0,
                               res.mc_stderr, res.seed, res.samples};
  });
}

rdd_status rdd_coverage_mc(const rdd_source* source, const rdd_distortion* dist,
                           const rdd_codebook* codebook, double distortion, uint64_t seed,
                           uint64_t samples, rdd_coverage_result* out) {
  if (source == nullptr) return null_arg("source");
  if (dist == nullptr) return null_arg("dist");
  if (codebook == nullptr) return null_arg("codebook");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    rdd::CoverageResult res =
        rdd::coverage_mc(source->impl, dist->impl, codebook->impl, distortion, seed,
                         static_cast<std::size_t>(samples));
    *out = rdd_coverage_result{res.covered_probability, res.monte_carlo ? 1 : 0,
                               res.mc_stderr, res.seed, res.samples};
  });
}

} /* extern "C" */

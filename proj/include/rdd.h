/* Rate-distortion dispersion toolkit: C surface.
 *
 * Every computation returns an rdd_status; results travel through out
 * parameters or opaque handles.  On failure the out parameters are left
 * untouched and rdd_last_error_message() describes the problem for the
 * calling thread.  Handles are freed with their matching *_free; frees
 * accept NULL.  Rates are in nats throughout.
 */
#ifndef RDD_H
#define RDD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RDD_BUILD)
#    define RDD_API __declspec(dllexport)
#  else
#    define RDD_API __declspec(dllimport)
#  endif
#else
#  if defined(RDD_BUILD)
#    define RDD_API __attribute__((visibility("default")))
#  else
#    define RDD_API
#  endif
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rdd_status {
  RDD_OK = 0,
  RDD_ERR_INVALID_ARGUMENT,
  RDD_ERR_NON_POSITIVE_MASS,
  RDD_ERR_NOT_NORMALIZED,
  RDD_ERR_DIMENSION_MISMATCH,
  RDD_ERR_NEGATIVE_DISTORTION,
  RDD_ERR_NO_ZERO_ROW_MIN,
  RDD_ERR_D_OUT_OF_RANGE,
  RDD_ERR_NO_CONVERGENCE,
  RDD_ERR_SOLVER_FAILURE,
  RDD_ERR_ZERO_VARIANCE,
  RDD_ERR_RATE_BELOW_RDF,
  RDD_ERR_INFEASIBLE,
  RDD_ERR_GRID_CAP_EXCEEDED,
  RDD_ERR_ATLAS_TOO_LARGE,
  RDD_ERR_POOR_FIT,
  RDD_ERR_ENUMERATION_TOO_LARGE,
  RDD_ERR_SEARCH_SPACE_TOO_LARGE,
  RDD_ERR_UNREACHABLE_COVERAGE,
  RDD_ERR_PARSE,
  RDD_ERR_IO,
  RDD_ERR_NULL_ARGUMENT,
  RDD_ERR_BUFFER_TOO_SMALL,
  RDD_ERR_INTERNAL
} rdd_status;

typedef struct rdd_source rdd_source;
typedef struct rdd_distortion rdd_distortion;
typedef struct rdd_rd_solution rdd_rd_solution;
typedef struct rdd_dispersion_report rdd_dispersion_report;
typedef struct rdd_exponent_result rdd_exponent_result;
typedef struct rdd_rate_curve rdd_rate_curve;
typedef struct rdd_codebook rdd_codebook;

RDD_API const char* rdd_version(void);
RDD_API const char* rdd_status_name(rdd_status status);
/* Message for the most recent failing call on this thread; "" after a
 * success. The pointer stays valid until the thread's next rdd call. */
RDD_API const char* rdd_last_error_message(void);
/* Frees strings returned through char** out parameters. */
RDD_API void rdd_string_free(char* text);

/* ---- sources and distortion measures ---------------------------------- */

/* Validates positivity and normalization (strict: |sum-1| <= 1e-9). */
RDD_API rdd_status rdd_source_create(const double* probs, size_t count,
                                     rdd_source** out_source);
/* Parses {"probs":[...], "distortion":{...}}.  When the document has no
 * distortion block, *out_distortion is set to NULL. */
RDD_API rdd_status rdd_spec_parse_json(const char* json_text, rdd_source** out_source,
                                       rdd_distortion** out_distortion);
RDD_API void rdd_source_free(rdd_source* source);
RDD_API size_t rdd_source_letters(const rdd_source* source);
RDD_API rdd_status rdd_source_copy_probs(const rdd_source* source, double* buf,
                                         size_t count);

RDD_API rdd_status rdd_distortion_hamming(size_t letters, rdd_distortion** out);
/* Circulant measure d(x,xhat) = per_shift[(xhat - x) mod count]; the zero
 * shift must cost 0. */
RDD_API rdd_status rdd_distortion_difference(const double* per_shift, size_t count,
                                             rdd_distortion** out);
RDD_API rdd_status rdd_distortion_general(size_t source_letters, size_t repro_letters,
                                          const double* row_major, rdd_distortion** out);
RDD_API void rdd_distortion_free(rdd_distortion* dist);
RDD_API size_t rdd_distortion_source_letters(const rdd_distortion* dist);
RDD_API size_t rdd_distortion_repro_letters(const rdd_distortion* dist);

/* Zero-rate distortion: min over a single reproduction letter of E[d]. */
RDD_API rdd_status rdd_trivial_distortion(const rdd_source* source,
                                          const rdd_distortion* dist, double* out);

/* ---- rate-distortion curve --------------------------------------------- */

/* Operating point at expected distortion D (0 < D < trivial distortion),
 * matched to relative tolerance rel_tol (pass 0 for the default 1e-7). */
RDD_API rdd_status rdd_rd_at_distortion(const rdd_source* source,
                                        const rdd_distortion* dist, double distortion,
                                        double rel_tol, rdd_rd_solution** out);
/* Operating point at slope lambda >= 0 with dual gap below gap_tol (pass 0
 * for the default 1e-9). */
RDD_API rdd_status rdd_rd_at_slope(const rdd_source* source, const rdd_distortion* dist,
                                   double lambda, double gap_tol, rdd_rd_solution** out);
RDD_API void rdd_rd_solution_free(rdd_rd_solution* solution);
RDD_API double rdd_rd_solution_rate(const rdd_rd_solution* solution);
RDD_API double rdd_rd_solution_distortion(const rdd_rd_solution* solution);
RDD_API double rdd_rd_solution_slope(const rdd_rd_solution* solution);
RDD_API int rdd_rd_solution_iterations(const rdd_rd_solution* solution);
RDD_API rdd_status rdd_rd_solution_copy_repro_marginal(const rdd_rd_solution* solution,
                                                       double* buf, size_t count);
/* R(p, D) alone; returns 0 at and above the trivial distortion. */
RDD_API rdd_status rdd_rdf_value(const rdd_source* source, const rdd_distortion* dist,
                                 double distortion, double* out_rate);

/* ---- dispersion --------------------------------------------------------- */

/* Tilted and derivative routes always run; with_exponent adds the
 * exponent-curvature route (recording, not raising, its failures) and
 * with_d0 adds the additive-backward-channel threshold estimate. */
RDD_API rdd_status rdd_dispersion_report_create(const rdd_source* source,
                                                const rdd_distortion* dist,
                                                double distortion, int with_exponent,
                                                int with_d0,
                                                rdd_dispersion_report** out);
RDD_API void rdd_dispersion_report_free(rdd_dispersion_report* report);
RDD_API double rdd_dispersion_rate(const rdd_dispersion_report* report);
RDD_API double rdd_dispersion_v_tilted(const rdd_dispersion_report* report);
RDD_API double rdd_dispersion_v_derivative(const rdd_dispersion_report* report);
RDD_API int rdd_dispersion_has_v_exponent(const rdd_dispersion_report* report);
/* NaN when the route did not run or failed. */
RDD_API double rdd_dispersion_v_exponent(const rdd_dispersion_report* report);
/* Failure name for the exponent route, "" when it ran or was not asked. */
RDD_API const char* rdd_dispersion_exponent_error(const rdd_dispersion_report* report);
RDD_API int rdd_dispersion_jump_suspected(const rdd_dispersion_report* report);
RDD_API double rdd_dispersion_max_pairwise_rel_gap(const rdd_dispersion_report* report);
RDD_API int rdd_dispersion_has_d0(const rdd_dispersion_report* report);
RDD_API double rdd_dispersion_d0(const rdd_dispersion_report* report);
RDD_API size_t rdd_dispersion_letters(const rdd_dispersion_report* report);
RDD_API rdd_status rdd_dispersion_copy_f_values(const rdd_dispersion_report* report,
                                                double* buf, size_t count);
RDD_API rdd_status rdd_dispersion_copy_r_prime_deltas(const rdd_dispersion_report* report,
                                                      double* buf, size_t count);
/* Var[log p(X)]: the zero-distortion dispersion. */
RDD_API rdd_status rdd_lossless_dispersion(const rdd_source* source, double* out);

/* ---- excess-distortion exponent ----------------------------------------- */

/* min D(q||p) over sources q with R(q, D) >= rate_target.  resolution
 * controls the seeding grid (points per simplex edge; pass 0 for the
 * default 200).  Fails with RDD_ERR_INFEASIBLE when no source on the
 * alphabet reaches the target. */
RDD_API rdd_status rdd_exponent_solve(const rdd_source* source,
                                      const rdd_distortion* dist, double distortion,
                                      double rate_target, int resolution,
                                      rdd_exponent_result** out);
RDD_API void rdd_exponent_result_free(rdd_exponent_result* result);
RDD_API double rdd_exponent_value(const rdd_exponent_result* result);
RDD_API double rdd_exponent_rate_at_minimizer(const rdd_exponent_result* result);
RDD_API int rdd_exponent_constraint_active(const rdd_exponent_result* result);
RDD_API size_t rdd_exponent_letters(const rdd_exponent_result* result);
RDD_API rdd_status rdd_exponent_copy_minimizer(const rdd_exponent_result* result,
                                               double* buf, size_t count);

/* ---- finite-blocklength rates ------------------------------------------- */

/* R(p,D) + sqrt(V/n) * Qinv(eps). */
RDD_API rdd_status rdd_normal_approx_rate(const rdd_source* source,
                                          const rdd_distortion* dist, double distortion,
                                          double eps, int64_t n, double* out_rate);
/* Exact smallest rate redundancy at blocklength n by full type
 * enumeration; the tail target is eps + eps_offset (clamped at 0). */
RDD_API rdd_status rdd_rate_redundancy_oracle(const rdd_source* source,
                                              const rdd_distortion* dist,
                                              double distortion, double eps, int64_t n,
                                              double eps_offset, double* out_delta_r,
                                              double* out_tail_probability,
                                              double* out_rate_rdf);
/* Rate-units halfwidth of the normal-approximation error band. */
RDD_API rdd_status rdd_berry_esseen_halfwidth(const rdd_source* source,
                                              const rdd_distortion* dist,
                                              double distortion, double eps, int64_t n,
                                              double* out_halfwidth);
/* Exact probability that the empirical type leaves the sqrt(L ln n / n)
 * neighborhood of the source, against the 2L/n^2 bound. */
RDD_API rdd_status rdd_lemma2_check(const rdd_source* source, int64_t n, double* out_lhs,
                                    double* out_rhs, int* out_holds);
/* Sweep of the normal approximation (plus oracle and error band when
 * with_oracle is nonzero) over the given blocklengths.  Per-blocklength
 * failures are recorded inside the curve, not raised. */
RDD_API rdd_status rdd_rate_curve_create(const rdd_source* source,
                                         const rdd_distortion* dist, double distortion,
                                         double eps, const int64_t* n_list, size_t count,
                                         int with_oracle, rdd_rate_curve** out);
RDD_API void rdd_rate_curve_free(rdd_rate_curve* curve);
RDD_API double rdd_rate_curve_rdf(const rdd_rate_curve* curve);
RDD_API double rdd_rate_curve_dispersion(const rdd_rate_curve* curve);
RDD_API rdd_status rdd_rate_curve_csv(const rdd_rate_curve* curve, char** out_text);

/* ---- quadratic-Gaussian source ------------------------------------------ */

RDD_API rdd_status rdd_gaussian_rdf(double variance, double distortion, double* out);
RDD_API rdd_status rdd_gaussian_exponent(double variance, double distortion, double rate,
                                         double* out);
RDD_API rdd_status rdd_chi2_tail(int64_t dof, double threshold, double* out);
RDD_API rdd_status rdd_chi2_tail_inverse(int64_t dof, double eps, double* out);
RDD_API rdd_status rdd_gaussian_achievable_rate(double variance, double distortion,
                                                double eps, int64_t n, double c0,
                                                double* out);
RDD_API rdd_status rdd_gaussian_normal_approx(double variance, double distortion,
                                              double eps, int64_t n, double* out);
RDD_API rdd_status rdd_gaussian_converse_rate(double variance, double distortion,
                                              double eps, int64_t n, double* out);
RDD_API rdd_status rdd_gaussian_curve_csv(double variance, double distortion, double eps,
                                          const int64_t* n_list, size_t count, double c0,
                                          char** out_text);

/* ---- desk-scale covering codes ------------------------------------------ */

typedef struct rdd_coverage_result {
  double covered_probability;
  int monte_carlo;   /* nonzero when estimated by sampling */
  double mc_stderr;  /* 0 under exact enumeration */
  uint64_t seed;     /* meaningful under Monte Carlo */
  uint64_t samples;
} rdd_coverage_result;

RDD_API rdd_status rdd_codebook_parse_text(const char* text, rdd_codebook** out);
RDD_API rdd_status rdd_codebook_to_text(const rdd_codebook* codebook, char** out_text);
RDD_API void rdd_codebook_free(rdd_codebook* codebook);
RDD_API int rdd_codebook_block_length(const rdd_codebook* codebook);
RDD_API size_t rdd_codebook_word_count(const rdd_codebook* codebook);
RDD_API size_t rdd_codebook_repro_letters(const rdd_codebook* codebook);
RDD_API rdd_status rdd_codebook_rate(const rdd_codebook* codebook, double* out);

RDD_API rdd_status rdd_greedy_cover_code(const rdd_source* source,
                                         const rdd_distortion* dist, int n,
                                         double distortion, double eps,
                                         rdd_codebook** out);
RDD_API rdd_status rdd_exact_min_code(const rdd_source* source,
                                      const rdd_distortion* dist, int n,
                                      double distortion, double eps, rdd_codebook** out);
/* Union of per-type covers over types with RDF within delta_r of R(p,D)
 * inside the sqrt(L ln n / n) type neighborhood. */
RDD_API rdd_status rdd_type_union_code(const rdd_source* source,
                                       const rdd_distortion* dist, int n,
                                       double distortion, double delta_r,
                                       rdd_codebook** out);
/* Ball-counting lower bound on the rate of any (D, eps) cover. */
RDD_API rdd_status rdd_converse_rate_bound(const rdd_source* source,
                                           const rdd_distortion* dist, int n,
                                           double distortion, double eps, double* out);
RDD_API rdd_status rdd_coverage_exact(const rdd_source* source,
                                      const rdd_distortion* dist,
                                      const rdd_codebook* codebook, double distortion,
                                      rdd_coverage_result* out);
RDD_API rdd_status rdd_coverage_mc(const rdd_source* source, const rdd_distortion* dist,
                                   const rdd_codebook* codebook, double distortion,
                                   uint64_t seed, uint64_t samples,
                                   rdd_coverage_result* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RDD_H */

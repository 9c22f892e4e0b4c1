#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rdd/rd_solver.hpp"
#include "rdd/type_atlas.hpp"

namespace rdd {

// Fixed-rate block code: distinct length-n words over the reproduction
// alphabet.
struct Codebook {
  int n = 0;
  std::size_t repro_alphabet = 0;
  std::vector<std::vector<std::uint8_t>> words;

  double rate() const;  // (1/n) ln(count), nats
};

struct CodebookCaps {
  std::uint64_t enumeration_cap = 1ull << 24;  // max sequences enumerated per side
  std::uint64_t pair_cap = 1ull << 24;  // max source x word distortion tests (general path)
  std::uint64_t search_cap = 20;        // exact search: max K^n and L^n
  std::size_t mc_samples = 1000000;
};

struct CoverageResult {
  double covered_probability = 0;
  bool monte_carlo = false;
  double mc_stderr = 0;       // 0 under exact enumeration
  std::uint64_t seed = 0;     // meaningful under Monte Carlo
  std::uint64_t samples = 0;  // idem
};

// Exact probability that a source block is within per-letter distortion D
// of some codeword, by full enumeration.
CoverageResult coverage_exact(const Source& p, const Distortion& dist,
                              const Codebook& cb, double D,
                              const CodebookCaps& caps = {});

// Monte-Carlo estimate of the same probability.  Sampling is chunked
// through a splittable seeded generator, so results are reproducible for
// a given seed regardless of execution layout.
CoverageResult coverage_mc(const Source& p, const Distortion& dist, const Codebook& cb,
                           double D, std::uint64_t seed, std::size_t samples = 1000000);

// Greedy max-coverage construction: grows the codebook by the word
// covering the largest uncovered source mass (ties to the
// lexicographically smallest word) until coverage reaches 1 - eps.
Codebook greedy_cover_code(const Source& p, const Distortion& dist, int n, double D,
                           double eps, const CodebookCaps& caps = {});

// Exhaustive minimum-cardinality codebook with coverage >= 1 - eps.
// Iterative deepening over the size with a remaining-mass bound; the
// first hit in lexicographic combination order wins, so results are
// deterministic.
Codebook exact_min_code(const Source& p, const Distortion& dist, int n, double D,
                        double eps, const CodebookCaps& caps = {});

// Union of complete greedy covers of every type class whose RDF sits
// within delta_r of R(p, D) and whose type lies in the (L log n / n)
// neighborhood of p.
Codebook type_union_code(const Source& p, const Distortion& dist, int n, double D,
                         double delta_r, const CodebookCaps& caps = {},
                         const RdOptions& rd = {}, RdfCache* cache = nullptr);

// Ball-counting converse: any code with coverage >= 1 - eps needs at
// least ceil((1 - eps) / max-ball-mass) words.  Returns (1/n) ln of that.
double converse_rate_bound(const Source& p, const Distortion& dist, int n, double D,
                           double eps, const CodebookCaps& caps = {});

// Line format: header `n=<n> K=<K>`, then one word per line as
// space-separated symbol indices.
std::string codebook_to_text(const Codebook& cb);
Codebook codebook_parse_text(const std::string& text);

}  // namespace rdd

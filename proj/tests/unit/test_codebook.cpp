#include "rdd/codebook.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"

using namespace rdd;

namespace {

Source p28() { return validate_source({0.2, 0.8}); }
Distortion ham2() { return make_hamming_distortion(2); }

std::uint64_t splitmix(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

TEST_CASE("greedy construction is deterministic and covers what it claims") {
  // n = 4, D = 0.25, eps = 0.1: two words suffice.  First pick is the
  // all-ones word (covers the heavy types), second mops up weight-3
  // zero-heavy blocks; uncovered mass is exactly
  // 3 * 0.2^3 * 0.8 + 3 * 0.2^2 * 0.8^2 = 0.096.
  Codebook cb = greedy_cover_code(p28(), ham2(), 4, 0.25, 0.1);
  REQUIRE(cb.words.size() == 2);
  CHECK(cb.n == 4);
  CHECK(cb.words[0] == std::vector<std::uint8_t>{1, 1, 1, 1});
  CHECK(cb.words[1] == std::vector<std::uint8_t>{0, 0, 0, 1});
  CHECK(cb.rate() == doctest::Approx(std::log(2.0) / 4).epsilon(1e-15));

  CoverageResult cov = coverage_exact(p28(), ham2(), cb, 0.25);
  CHECK(cov.covered_probability == doctest::Approx(0.904).epsilon(1e-12));
  CHECK_FALSE(cov.monte_carlo);
  CHECK(cov.mc_stderr == 0.0);
}

TEST_CASE("full coverage terminates despite summation drift") {
  Codebook cb = greedy_cover_code(p28(), ham2(), 3, 0.34, 0.0);
  CoverageResult cov = coverage_exact(p28(), ham2(), cb, 0.34);
  CHECK(cov.covered_probability >= 1.0 - 1e-9);
}

TEST_CASE("exhaustive search never loses to greedy") {
  CodebookCaps caps;
  caps.search_cap = 300;
  Codebook ex = exact_min_code(p28(), ham2(), 4, 0.25, 0.1, caps);
  Codebook gr = greedy_cover_code(p28(), ham2(), 4, 0.25, 0.1);
  CHECK(ex.words.size() <= gr.words.size());
  CHECK(coverage_exact(p28(), ham2(), ex, 0.25).covered_probability >= 0.9 - 1e-12);

  // a handful of random small instances
  std::uint64_t state = 1234;
  for (int trial = 0; trial < 5; ++trial) {
    double a = 0.1 + 0.8 * (splitmix(state) >> 11) * 0x1p-53;
    Source p = validate_source({a, 1 - a});
    double d = 0.15 + 0.2 * (splitmix(state) >> 11) * 0x1p-53;
    double eps = 0.05 + 0.2 * (splitmix(state) >> 11) * 0x1p-53;
    Codebook e2 = exact_min_code(p, ham2(), 3, d, eps, caps);
    Codebook g2 = greedy_cover_code(p, ham2(), 3, d, eps);
    CHECK(e2.words.size() <= g2.words.size());
    CHECK(coverage_exact(p, ham2(), e2, d).covered_probability >= 1 - eps - 1e-12);
  }
}

TEST_CASE("type-partition construction covers its redundancy budget") {
  // delta_r wide enough to include every type within the concentration
  // neighborhood: cover must exceed 1 - eps for moderate eps
  Codebook cb = type_union_code(p28(), ham2(), 8, 0.25, 0.15);
  CHECK(cb.words.size() >= 1);
  CoverageResult cov = coverage_exact(p28(), ham2(), cb, 0.25);
  CHECK(cov.covered_probability > 0.85);
  // words are distinct
  for (std::size_t i = 0; i < cb.words.size(); ++i)
    for (std::size_t j = i + 1; j < cb.words.size(); ++j)
      CHECK(cb.words[i] != cb.words[j]);
}

TEST_CASE("ball-counting lower bound sits below constructive rates") {
  double lb = converse_rate_bound(p28(), ham2(), 4, 0.25, 0.1);
  CHECK(lb == doctest::Approx(std::log(2.0) / 4).epsilon(1e-12));
  Codebook gr = greedy_cover_code(p28(), ham2(), 4, 0.25, 0.1);
  CHECK(lb <= gr.rate() + 1e-12);

  for (int n = 4; n <= 8; ++n) {
    CHECK(converse_rate_bound(p28(), ham2(), n, 0.25, 0.1) <=
          greedy_cover_code(p28(), ham2(), n, 0.25, 0.1).rate() + 1e-12);
  }
}

TEST_CASE("sampled coverage is reproducible and consistent with enumeration") {
  Codebook cb = greedy_cover_code(p28(), ham2(), 4, 0.25, 0.1);
  CoverageResult a = coverage_mc(p28(), ham2(), cb, 0.25, 42, 200000);
  CoverageResult b = coverage_mc(p28(), ham2(), cb, 0.25, 42, 200000);
  CHECK(a.covered_probability == b.covered_probability);  // bitwise, same seed
  CHECK(a.covered_probability == doctest::Approx(0.905085).epsilon(1e-9));
  CHECK(a.mc_stderr == doctest::Approx(0.000655385927).epsilon(1e-6));
  CHECK(a.monte_carlo);
  CHECK(a.seed == 42);
  CHECK(a.samples == 200000);

  // within five standard errors of the exact value
  double exact = coverage_exact(p28(), ham2(), cb, 0.25).covered_probability;
  CHECK(std::abs(a.covered_probability - exact) <= 5 * a.mc_stderr);

  CoverageResult c = coverage_mc(p28(), ham2(), cb, 0.25, 43, 200000);
  CHECK(c.covered_probability != a.covered_probability);  // seed matters
}

TEST_CASE("text round trip and parse rejection") {
  Codebook cb = greedy_cover_code(p28(), ham2(), 4, 0.25, 0.1);
  std::string text = codebook_to_text(cb);
  CHECK(text.substr(0, 8) == "n=4 K=2\n");
  Codebook back = codebook_parse_text(text);
  CHECK(back.n == cb.n);
  CHECK(back.repro_alphabet == cb.repro_alphabet);
  CHECK(back.words == cb.words);

  CHECK_THROWS_AS(codebook_parse_text("K=2 n=4\n0 0 0 0\n"), error);
  CHECK_THROWS_AS(codebook_parse_text("n=4 K=2\n0 0 0\n"), error);       // short word
  CHECK_THROWS_AS(codebook_parse_text("n=4 K=2\n0 0 0 5\n"), error);     // out of range
  CHECK_THROWS_AS(codebook_parse_text("n=2 K=2\n0 1\n0 1\n"), error);    // duplicate
  CHECK_THROWS_AS(codebook_parse_text("n=2 K=2\n"), error);              // empty book
}

TEST_CASE("impossible coverage targets are refused") {
  // degenerate single-letter reproduction covering everything at no cost
  Distortion one_col = make_general_distortion(2, 1, {0.0, 0.0});
  Codebook cb = greedy_cover_code(p28(), one_col, 2, 0.0, 0.0);
  CHECK(cb.words.size() == 1);

  // a redundancy budget below -R(p, D) admits no type class at all
  try {
    type_union_code(p28(), ham2(), 6, 0.05, -1.0);
    FAIL("selected type classes for an impossible budget");
  } catch (const error& e) {
    CHECK(e.code() == errc::unreachable_coverage);
  }

  CHECK_THROWS_AS(greedy_cover_code(p28(), ham2(), 4, 0.25, -0.1), error);
  CHECK_THROWS_AS(greedy_cover_code(p28(), ham2(), 4, 0.25, 1.0), error);
}

TEST_CASE("search-space guards fire before work starts") {
  try {
    exact_min_code(p28(), ham2(), 6, 0.25, 0.1);  // 2^6 = 64 > default cap 20
    FAIL("searched past the cap");
  } catch (const error& e) {
    CHECK(e.code() == errc::search_space_too_large);
  }
  CodebookCaps tiny;
  tiny.enumeration_cap = 8;
  try {
    coverage_exact(p28(), ham2(), greedy_cover_code(p28(), ham2(), 4, 0.25, 0.1),
                   0.25, tiny);
    FAIL("enumerated past the cap");
  } catch (const error& e) {
    CHECK(e.code() == errc::enumeration_too_large);
  }
}

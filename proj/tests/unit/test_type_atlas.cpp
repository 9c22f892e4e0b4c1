#include "rdd/type_atlas.hpp"

#include <cmath>

#include "doctest.h"

using namespace rdd;

TEST_CASE("composition counts follow the stars-and-bars formula") {
  CHECK(type_count(4, 2) == doctest::Approx(5.0));
  CHECK(type_count(10, 3) == doctest::Approx(66.0));
  CHECK(type_count(1, 4) == doctest::Approx(4.0));
  CHECK(type_count(0, 3) == doctest::Approx(1.0));
  CHECK(type_count(100, 2) == doctest::Approx(101.0));
}

TEST_CASE("enumeration is exhaustive, ordered, and mass-complete") {
  Source p = validate_source({0.2, 0.8});
  TypeAtlas atlas = enumerate_types(4, p);
  REQUIRE(atlas.entries.size() == 5);
  CHECK(atlas.n == 4);
  CHECK(atlas.alphabet == 2);

  // lexicographic in counts: (0,4), (1,3), (2,2), (3,1), (4,0)
  CHECK(atlas.entries.front().counts == std::vector<std::int64_t>{0, 4});
  CHECK(atlas.entries.back().counts == std::vector<std::int64_t>{4, 0});

  double total = 0.0;
  for (const auto& e : atlas.entries) total += std::exp(e.log_prob);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  // P(type (1,3)) = C(4,1) 0.2 * 0.8^3
  CHECK(std::exp(atlas.entries[1].log_prob) ==
        doctest::Approx(4.0 * 0.2 * 0.8 * 0.8 * 0.8).epsilon(1e-12));

  // empirical pmf helper
  std::vector<double> q = atlas.entries[2].pmf(4);
  CHECK(q[0] == doctest::Approx(0.5));
  CHECK(q[1] == doctest::Approx(0.5));
}

TEST_CASE("ternary atlas mass sums to one") {
  Source p = validate_source({0.5, 0.3, 0.2});
  TypeAtlas atlas = enumerate_types(10, p);
  REQUIRE(atlas.entries.size() == 66);
  double total = 0.0;
  for (const auto& e : atlas.entries) {
    std::int64_t n = e.counts[0] + e.counts[1] + e.counts[2];
    CHECK(n == 10);
    total += std::exp(e.log_prob);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("oversized enumerations are refused up front") {
  Source p = validate_source({0.25, 0.25, 0.25, 0.25});
  try {
    enumerate_types(2000, p, /*cap=*/1000);
    FAIL("enumerated past the cap");
  } catch (const error& e) {
    CHECK(e.code() == errc::atlas_too_large);
  }
}

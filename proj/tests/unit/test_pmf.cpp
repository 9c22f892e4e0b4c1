#include "rdd/pmf.hpp"

#include <cmath>

#include "doctest.h"

using namespace rdd;

TEST_CASE("source validation normalizes and rejects bad mass") {
  Source s = validate_source({0.2, 0.2, 0.1});
  CHECK(s.size() == 3);
  CHECK(s[0] == doctest::Approx(0.4).epsilon(1e-12));

  CHECK_THROWS_AS(validate_source({0.5, 0.0, 0.5}), error);
  CHECK_THROWS_AS(validate_source({0.5, -0.1, 0.6}), error);
  CHECK_THROWS_AS(validate_source({}), error);

  try {
    validate_source({0.5, 0.6}, /*strict=*/true);
    FAIL("strict validation accepted an unnormalized pmf");
  } catch (const error& e) {
    CHECK(e.code() == errc::not_normalized);
  }
  // strict accepts tiny drift
  CHECK_NOTHROW(validate_source({0.5, 0.5 + 1e-12}, true));
}

TEST_CASE("entropy and divergence match hand values") {
  CHECK(entropy(std::vector<double>{0.2, 0.8}) ==
        doctest::Approx(0.5004024235381879).epsilon(1e-14));
  CHECK(entropy(std::vector<double>{0.5, 0.25, 0.25}) ==
        doctest::Approx(1.0397207708399179).epsilon(1e-14));
  CHECK(entropy(std::vector<double>{0.0, 1.0}) == doctest::Approx(0.0));
  CHECK(entropy(std::vector<double>{0.25, 0.25, 0.25, 0.25}) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-15));

  Source p = validate_source({0.2, 0.8});
  Source q = validate_source({0.3, 0.7});
  CHECK(divergence(q, p) == doctest::Approx(0.02816755759528336).epsilon(1e-13));
  CHECK(divergence(p, p) == doctest::Approx(0.0));
  // zero q entries contribute nothing
  CHECK(divergence(std::vector<double>{0.0, 1.0}, std::vector<double>{0.2, 0.8}) ==
        doctest::Approx(-std::log(0.8)).epsilon(1e-14));
  CHECK_THROWS_AS(divergence(std::vector<double>{0.5, 0.5},
                             std::vector<double>{0.2, 0.3, 0.5}),
                  error);
}

TEST_CASE("distortion constructors lay out the measures correctly") {
  Distortion h = make_hamming_distortion(3);
  CHECK(h.num_source_letters == 3);
  CHECK(h.num_repro_letters == 3);
  CHECK(h.kind == DistortionKind::hamming);
  CHECK(h.at(0, 0) == 0.0);
  CHECK(h.at(0, 1) == 1.0);
  CHECK(h.d_max == 1.0);
  CHECK(h.is_integral());

  // circulant: d(x, xhat) = dz[(xhat - x) mod 3]
  Distortion diff = make_difference_distortion({0.0, 1.0, 3.0});
  CHECK(diff.kind == DistortionKind::difference);
  CHECK(diff.at(0, 1) == 1.0);
  CHECK(diff.at(0, 2) == 3.0);
  CHECK(diff.at(1, 0) == 3.0);  // shift (0 - 1) mod 3 = 2
  CHECK(diff.at(2, 0) == 1.0);
  CHECK(diff.at(2, 2) == 0.0);
  CHECK(diff.is_integral());
  CHECK_THROWS_AS(make_difference_distortion({0.5, 1.0}), error);  // dz[0] != 0

  Distortion g = make_general_distortion(2, 3, {0.0, 2.0, 0.5, 1.0, 0.0, 0.25});
  CHECK(g.num_repro_letters == 3);
  CHECK(g.at(1, 2) == 0.25);
  CHECK_FALSE(g.is_integral());

  // every source letter needs a cost-free reproduction
  try {
    make_general_distortion(2, 2, {0.0, 1.0, 0.5, 0.5});
    FAIL("accepted a row without a zero entry");
  } catch (const error& e) {
    CHECK(e.code() == errc::no_zero_row_min);
  }
  CHECK_THROWS_AS(make_general_distortion(2, 2, {0.0, -1.0, 1.0, 0.0}), error);
}

TEST_CASE("trivial distortion is the best single-letter cost") {
  Source p = validate_source({0.2, 0.8});
  CHECK(trivial_distortion(p.probs, make_hamming_distortion(2)) ==
        doctest::Approx(0.2).epsilon(1e-15));
  Source p3 = validate_source({0.5, 0.3, 0.2});
  CHECK(trivial_distortion(p3.probs, make_hamming_distortion(3)) ==
        doctest::Approx(0.5).epsilon(1e-15));
  // zero-mass letters are ignored
  std::vector<double> with_zero{0.2, 0.8, 0.0};
  CHECK(trivial_distortion(with_zero, make_hamming_distortion(3)) ==
        doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("json source specs parse and validate") {
  SourceSpec s = parse_source_spec(
      R"({"probs":[0.2,0.8],"distortion":{"kind":"hamming"}})");
  CHECK(s.source.size() == 2);
  REQUIRE(s.distortion.has_value());
  CHECK(s.distortion->kind == DistortionKind::hamming);

  SourceSpec d = parse_source_spec(
      R"({"probs":[0.5,0.3,0.2],"distortion":{"kind":"difference","dz":[0,1,3]}})");
  REQUIRE(d.distortion.has_value());
  CHECK(d.distortion->at(1, 0) == 3.0);

  SourceSpec g = parse_source_spec(
      R"({"probs":[0.5,0.5],"distortion":{"kind":"general","matrix":[[0,1,0.5],[1,0,0.5]]}})");
  REQUIRE(g.distortion.has_value());
  CHECK(g.distortion->num_repro_letters == 3);

  SourceSpec bare = parse_source_spec(R"({"probs":[0.4,0.6]})");
  CHECK_FALSE(bare.distortion.has_value());

  CHECK_THROWS_AS(parse_source_spec("not json"), error);
  CHECK_THROWS_AS(parse_source_spec(R"({"probs":"nope"})"), error);
  // distortion rows must match the source alphabet
  CHECK_THROWS_AS(
      parse_source_spec(R"({"probs":[0.5,0.5],"distortion":{"kind":"general","matrix":[[0,1]]}})"),
      error);
  // document masses are lenient: normalized on the way in
  SourceSpec loose = parse_source_spec(R"({"probs":[0.7,0.4]})");
  CHECK(loose.source[0] == doctest::Approx(0.7 / 1.1).epsilon(1e-12));
  CHECK_THROWS_AS(parse_source_spec(R"({"probs":[0.7,0.0]})"), error);
}

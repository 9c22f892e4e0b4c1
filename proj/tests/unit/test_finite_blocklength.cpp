#include "rdd/finite_blocklength.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"

using namespace rdd;

namespace {

Source p28() { return validate_source({0.2, 0.8}); }
Distortion ham2() { return make_hamming_distortion(2); }

}  // namespace

TEST_CASE("normal approximation assembles rate, dispersion, and quantile") {
  double r = normal_approx_rate(p28(), ham2(), 0.05, 0.05, 1000);
  CHECK(r == doctest::Approx(0.33073033127461476).epsilon(1e-9));
  // R + sqrt(V/n) Qinv(eps) from the pinned ingredients
  double by_hand = 0.3018871801923153 +
                   std::sqrt(0.30748992890764887 / 1000.0) * 1.6448536269514729;
  CHECK(r == doctest::Approx(by_hand).epsilon(1e-9));
  // eps > 1/2 pulls the rate below R(p, D)
  CHECK(normal_approx_rate(p28(), ham2(), 0.05, 0.9, 1000) <
        0.3018871801923153);
}

TEST_CASE("exact redundancy oracle at pinned blocklengths") {
  OracleResult o100 = rate_redundancy_oracle(p28(), ham2(), 0.05, 0.05, 100);
  CHECK(o100.delta_r == doctest::Approx(0.0828564165904091).epsilon(1e-6));
  CHECK(o100.tail_probability ==
        doctest::Approx(0.034151629639074144).epsilon(1e-10));
  CHECK(o100.rate_rdf == doctest::Approx(0.3018871801923153).epsilon(1e-6));
  CHECK(o100.tail_probability <= 0.05);

  OracleResult o1000 = rate_redundancy_oracle(p28(), ham2(), 0.05, 0.05, 1000);
  CHECK(o1000.delta_r == doctest::Approx(0.02776829367521283).epsilon(1e-6));
  CHECK(o1000.tail_probability ==
        doctest::Approx(0.04592981388766015).epsilon(1e-10));
  CHECK(o1000.delta_r < o100.delta_r);  // redundancy shrinks with n
}

TEST_CASE("oracle offset shifts the tail target") {
  // eps + offset is all the oracle sees
  OracleResult a = rate_redundancy_oracle(p28(), ham2(), 0.05, 0.1, 100, -0.05);
  OracleResult b = rate_redundancy_oracle(p28(), ham2(), 0.05, 0.05, 100, 0.0);
  CHECK(a.delta_r == b.delta_r);
  CHECK(a.tail_probability == b.tail_probability);
  // an offset pushing the target to zero (clamped) forces an empty tail
  OracleResult strict = rate_redundancy_oracle(p28(), ham2(), 0.05, 0.05, 8, -1.0);
  CHECK(strict.tail_probability == doctest::Approx(0.0));
  CHECK(strict.delta_r >= 0.0);
  CHECK_THROWS_AS(rate_redundancy_oracle(p28(), ham2(), 0.05, 0.0, 8), error);
}

TEST_CASE("approximation error band matches the closed form and decays like 1/n") {
  double hw100 = berry_esseen_halfwidth(p28(), ham2(), 0.05, 0.05, 100);
  double hw1000 = berry_esseen_halfwidth(p28(), ham2(), 0.05, 0.05, 1000);
  CHECK(hw100 == doctest::Approx(0.05118510834791079).epsilon(1e-9));
  CHECK(hw1000 == doctest::Approx(0.005118510834791079).epsilon(1e-9));
  CHECK(hw100 / hw1000 == doctest::Approx(10.0).epsilon(1e-12));

  // classical constant scales the band by 6 / 0.56
  FbOptions paper;
  paper.be_paper_form = true;
  double hwp = berry_esseen_halfwidth(p28(), ham2(), 0.05, 0.05, 100, paper);
  CHECK(hwp / hw100 == doctest::Approx(6.0 / 0.5600).epsilon(1e-12));

  // zero dispersion has no band
  Source uni = validate_source({0.5, 0.5});
  try {
    berry_esseen_halfwidth(uni, ham2(), 0.1, 0.05, 100);
    FAIL("produced a band for a zero-variance rate function");
  } catch (const error& e) {
    CHECK(e.code() == errc::zero_variance);
  }
}

TEST_CASE("type concentration bound holds with exact tail mass") {
  Lemma2Result r16 = lemma2_check(p28(), 16);
  CHECK(r16.lhs == doctest::Approx(0.0002475776081920008).epsilon(1e-12));
  CHECK(r16.rhs == doctest::Approx(2.0 * 2 / (16.0 * 16.0)).epsilon(1e-15));
  CHECK(r16.holds);

  Lemma2Result r64 = lemma2_check(p28(), 64);
  CHECK(r64.lhs == doctest::Approx(1.2058996693268244e-06).epsilon(1e-10));
  CHECK(r64.rhs == doctest::Approx(0.0009765625).epsilon(1e-15));
  CHECK(r64.holds);
  CHECK(r64.lhs < r16.lhs);
}

TEST_CASE("rate sweep populates records and serializes to the fixed schema") {
  std::array<std::int64_t, 4> ns{100, 215, 464, 1000};
  RateCurve curve = rate_curve(p28(), ham2(), 0.05, 0.05, ns, /*with_oracle=*/true);
  CHECK(curve.rate_rdf == doctest::Approx(0.3018871801923153).epsilon(1e-6));
  CHECK(curve.dispersion == doctest::Approx(0.30748992890764887).epsilon(1e-9));
  REQUIRE(curve.records.size() == 4);
  for (const RateRecord& rec : curve.records) {
    REQUIRE(rec.r_oracle.has_value());
    REQUIRE(rec.be_halfwidth.has_value());
    CHECK(rec.error.empty());
    CHECK(*rec.r_oracle > curve.rate_rdf);  // positive redundancy region
  }
  CHECK(curve.records[0].r_oracle ==
        doctest::Approx(0.3018871801923153 + 0.0828564165904091).epsilon(1e-6));
  CHECK(curve.records[3].r_normal ==
        doctest::Approx(0.33073033127461476).epsilon(1e-9));

  std::string csv = rate_curve_csv(curve);
  CHECK(csv.substr(0, 21) == "#schema=rate_curve.v1");
  CHECK(csv.find("n,r_normal_nats,r_oracle_nats,be_halfwidth_nats,eps\n") !=
        std::string::npos);
  CHECK(csv.find("\n1000,") != std::string::npos);
  CHECK(csv.back() == '\n');
  // five fields per row
  std::size_t first_row = csv.find("\n100,") + 1;
  std::string row = csv.substr(first_row, csv.find('\n', first_row) - first_row);
  CHECK(std::count(row.begin(), row.end(), ',') == 4);
  CHECK(row.find("0.05") != std::string::npos);
}

TEST_CASE("sweep records per-blocklength failures without aborting") {
  // quaternary alphabet at n = 1000 wants ~1.7e8 types: over the cap
  Source p4 = validate_source({0.4, 0.3, 0.2, 0.1});
  Distortion d4 = make_hamming_distortion(4);
  std::array<std::int64_t, 2> ns{16, 1000};
  RateCurve curve = rate_curve(p4, d4, 0.1, 0.05, ns, true);
  REQUIRE(curve.records.size() == 2);
  CHECK(curve.records[0].r_oracle.has_value());
  CHECK_FALSE(curve.records[1].r_oracle.has_value());
  CHECK_FALSE(curve.records[1].error.empty());
  // the normal term never needs the atlas
  CHECK(curve.records[1].r_normal > 0.0);

  std::string csv = rate_curve_csv(curve);
  // missing oracle renders as an empty field: "...,,..."
  CHECK(csv.find(",,") != std::string::npos);
}

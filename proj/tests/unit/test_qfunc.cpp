#include "rdd/qfunc.hpp"

#include <cmath>
#include <initializer_list>

#include "doctest.h"

using namespace rdd;

TEST_CASE("gaussian tail values") {
  CHECK(q_function(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(q_function(1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-13));
  CHECK(q_function(-1.0) == doctest::Approx(1.0 - 0.15865525393145707).epsilon(1e-13));
  CHECK(q_function(10.0) < 1e-23);
  CHECK(q_function(-10.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("tail inverse values") {
  CHECK(q_inverse(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(q_inverse(0.05) == doctest::Approx(1.6448536269514729).epsilon(1e-12));
  CHECK(q_inverse(0.001) == doctest::Approx(3.090232306167813).epsilon(1e-12));
  CHECK(q_inverse(0.95) == doctest::Approx(-1.6448536269514729).epsilon(1e-12));
}

TEST_CASE("round trips and shape") {
  for (double x : {-3.0, -1.2, 0.0, 0.7, 2.5, 5.0}) {
    CHECK(q_inverse(q_function(x)) == doctest::Approx(x).epsilon(1e-10));
  }
  for (double e : {1e-6, 0.01, 0.3, 0.5, 0.8, 0.999}) {
    CHECK(q_function(q_inverse(e)) == doctest::Approx(e).epsilon(1e-12));
  }
  // symmetry and monotonicity
  CHECK(q_function(1.7) + q_function(-1.7) == doctest::Approx(1.0).epsilon(1e-14));
  double prev = 1.0;
  for (double x = -4.0; x <= 4.0; x += 0.25) {
    double q = q_function(x);
    CHECK(q < prev);
    prev = q;
  }
}

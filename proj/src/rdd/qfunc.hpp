#pragma once

namespace rdd {

// Standard normal upper tail Q(x) = P(N(0,1) > x).
double q_function(double x);

// Inverse of q_function on (0, 1).
double q_inverse(double eps);

}  // namespace rdd

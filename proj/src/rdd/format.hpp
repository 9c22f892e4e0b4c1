#pragma once

#include <cstdio>
#include <string>

namespace rdd {

// Rates and probabilities print with 9 significant digits everywhere a
// report is emitted, so repeated runs are byte-identical.
inline std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace rdd

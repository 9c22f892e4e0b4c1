#pragma once

#include <cstdint>
#include <vector>

#include "rdd/pmf.hpp"

namespace rdd {

// One empirical distribution class: composition counts and the log of the
// total probability mass of its sequences under the reference source.
struct TypeEntry {
  std::vector<std::int64_t> counts;
  double log_prob;

  std::vector<double> pmf(std::int64_t n) const {
    std::vector<double> q(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
      q[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
    return q;
  }
};

struct TypeAtlas {
  std::int64_t n = 0;
  std::size_t alphabet = 0;
  std::vector<TypeEntry> entries;
};

// Number of length-n compositions over L letters, C(n+L-1, L-1), as a
// double (may overflow to inf for absurd inputs; callers gate on a cap).
double type_count(std::int64_t n, std::size_t alphabet);

// Enumerates every composition of n over the source alphabet together with
// its multinomial log-probability.  Order is lexicographic in the counts
// vector.  Throws AtlasTooLarge past `cap` types.
TypeAtlas enumerate_types(std::int64_t n, const Source& p, std::size_t cap = 2000000);

}  // namespace rdd

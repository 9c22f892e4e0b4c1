#include "rdd/type_atlas.hpp"

#include <cmath>
#include <sstream>

namespace rdd {

double type_count(std::int64_t n, std::size_t alphabet) {
  if (n < 0 || alphabet == 0) fail(errc::invalid_argument, "type_count: bad arguments");
  double nd = static_cast<double>(n);
  double k = static_cast<double>(alphabet - 1);
  return std::exp(std::lgamma(nd + k + 1) - std::lgamma(nd + 1) - std::lgamma(k + 1));
}

TypeAtlas enumerate_types(std::int64_t n, const Source& p, std::size_t cap) {
  if (n < 1) fail(errc::invalid_argument, "enumerate_types: n must be >= 1");
  const std::size_t L = p.size();
  double est = type_count(n, L);
  if (!(est <= static_cast<double>(cap))) {
    std::ostringstream os;
    os << "type atlas for n=" << n << ", L=" << L << " has ~" << est
       << " entries, above cap " << cap;
    fail(errc::atlas_too_large, os.str());
  }

  std::vector<double> logp(L);
  for (std::size_t i = 0; i < L; ++i) logp[i] = std::log(p[i]);
  const double lg_n1 = std::lgamma(static_cast<double>(n) + 1);

  TypeAtlas atlas;
  atlas.n = n;
  atlas.alphabet = L;
  atlas.entries.reserve(static_cast<std::size_t>(est) + 1);

  std::vector<std::int64_t> counts(L, 0);
  // Recursively assign counts[0..L-2]; the last letter absorbs the rest.
  auto rec = [&](auto&& self, std::size_t pos, std::int64_t left) -> void {
    if (pos + 1 == L) {
      counts[pos] = left;
      double lp = lg_n1;
      for (std::size_t i = 0; i < L; ++i) {
        lp -= std::lgamma(static_cast<double>(counts[i]) + 1);
        if (counts[i] > 0) lp += static_cast<double>(counts[i]) * logp[i];
      }
      atlas.entries.push_back(TypeEntry{counts, lp});
      return;
    }
    for (std::int64_t c = 0; c <= left; ++c) {
      counts[pos] = c;
      self(self, pos + 1, left - c);
    }
  };
  rec(rec, 0, n);
  return atlas;
}

}  // namespace rdd

#include "rdd/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

namespace rdd {

double Codebook::rate() const {
  if (words.empty() || n <= 0) fail(errc::invalid_argument, "empty codebook has no rate");
  return std::log(static_cast<double>(words.size())) / static_cast<double>(n);
}

namespace {

std::uint64_t checked_pow(std::uint64_t base, int exp, std::uint64_t cap,
                          const char* what,
                          errc code = errc::enumeration_too_large) {
  std::uint64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (v > cap / base) {
      std::ostringstream os;
      os << what << ": " << base << "^" << exp << " exceeds cap " << cap;
      fail(code, os.str());
    }
    v *= base;
  }
  return v;
}

// Words map to integers with the first symbol most significant, so
// numeric order coincides with lexicographic word order.
void decode_word(std::uint64_t idx, int n, std::size_t alphabet, std::uint8_t* out) {
  for (int t = n - 1; t >= 0; --t) {
    out[t] = static_cast<std::uint8_t>(idx % alphabet);
    idx /= alphabet;
  }
}

// Block distortion threshold: integral matrices compare integer sums
// against floor(n D) exactly; otherwise a small slack absorbs float noise.
struct BlockThreshold {
  bool integral = false;
  std::int64_t int_limit = 0;
  double real_limit = 0;
  std::vector<std::int64_t> int_matrix;
  const Distortion* dist = nullptr;
  int n = 0;

  BlockThreshold(const Distortion& d, int n_, double D) : dist(&d), n(n_) {
    if (!(D >= 0)) fail(errc::d_out_of_range, "distortion threshold must be >= 0");
    integral = d.is_integral();
    if (integral) {
      int_limit = static_cast<std::int64_t>(std::floor(static_cast<double>(n_) * D + 1e-9));
      int_matrix.resize(d.matrix.size());
      for (std::size_t i = 0; i < d.matrix.size(); ++i)
        int_matrix[i] = std::llround(d.matrix[i]);
    } else {
      real_limit = static_cast<double>(n_) * D + 1e-9;
    }
  }

  bool covered(const std::uint8_t* x, const std::uint8_t* w) const {
    const std::size_t K = dist->num_repro_letters;
    if (integral) {
      std::int64_t s = 0;
      for (int t = 0; t < n; ++t) {
        s += int_matrix[x[t] * K + w[t]];
        if (s > int_limit) return false;
      }
      return true;
    }
    double s = 0;
    for (int t = 0; t < n; ++t) {
      s += dist->matrix[x[t] * K + w[t]];
      if (s > real_limit) return false;
    }
    return true;
  }
};

std::vector<double> sequence_probs(const Source& p, int n, std::uint64_t total) {
  const std::size_t L = p.size();
  std::vector<double> probs(total);
  std::vector<std::uint8_t> digits(n, 0);
  // Counting in base L visits sequences in index (= lex) order.
  double running = 1;
  for (int t = 0; t < n; ++t) running *= p[0];
  for (std::uint64_t idx = 0;; ++idx) {
    probs[idx] = running;
    if (idx + 1 == total) break;
    int t = n - 1;
    while (true) {
      running /= p[digits[t]];
      if (++digits[t] < L) {
        running *= p[digits[t]];
        break;
      }
      digits[t] = 0;
      running *= p[0];
      --t;
    }
  }
  return probs;
}

// Hamming-distance ball walker: visits every word differing from `center`
// in at most `radius` positions (the center itself included), in
// ascending index order of the changed positions.  Only valid for the
// symmetric 0/1 per-letter distortion.
template <typename F>
void hamming_ball(const std::uint8_t* center, int n, std::size_t alphabet, int radius,
                  const std::vector<std::uint64_t>& pow, F&& visit) {
  std::uint64_t base = 0;
  for (int t = 0; t < n; ++t) base += center[t] * pow[t];
  visit(base);
  if (radius <= 0) return;
  auto rec = [&](auto&& self, int start, std::int64_t delta, int depth) -> void {
    for (int t = start; t < n; ++t) {
      for (std::size_t v = 0; v < alphabet; ++v) {
        if (v == center[t]) continue;
        std::int64_t d2 =
            delta + (static_cast<std::int64_t>(v) - center[t]) * static_cast<std::int64_t>(pow[t]);
        visit(static_cast<std::uint64_t>(static_cast<std::int64_t>(base) + d2));
        if (depth + 1 < radius) self(self, t + 1, d2, depth + 1);
      }
    }
  };
  rec(rec, 0, 0, 0);
}

bool hamming_fast_path(const Distortion& dist) {
  return dist.kind == DistortionKind::hamming &&
         dist.num_source_letters == dist.num_repro_letters;
}

std::vector<std::uint64_t> index_powers(int n, std::size_t alphabet) {
  std::vector<std::uint64_t> pow(n, 1);
  for (int t = n - 2; t >= 0; --t) pow[t] = pow[t + 1] * alphabet;
  return pow;
}

struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
};

void validate_code_inputs(const Source& p, const Distortion& dist, int n) {
  if (n < 1) fail(errc::invalid_argument, "blocklength must be >= 1");
  if (p.size() != dist.num_source_letters)
    fail(errc::dimension_mismatch, "source alphabet does not match distortion rows");
}

Codebook from_indices(const std::vector<std::uint64_t>& idxs, int n, std::size_t K) {
  Codebook cb;
  cb.n = n;
  cb.repro_alphabet = K;
  cb.words.reserve(idxs.size());
  for (std::uint64_t idx : idxs) {
    std::vector<std::uint8_t> w(n);
    decode_word(idx, n, K, w.data());
    cb.words.push_back(std::move(w));
  }
  return cb;
}

}  // namespace

CoverageResult coverage_exact(const Source& p, const Distortion& dist,
                              const Codebook& cb, double D, const CodebookCaps& caps) {
  validate_code_inputs(p, dist, cb.n);
  if (cb.words.empty()) fail(errc::invalid_argument, "codebook is empty");
  if (cb.repro_alphabet != dist.num_repro_letters)
    fail(errc::dimension_mismatch, "codebook alphabet does not match distortion columns");
  const int n = cb.n;
  const std::uint64_t total =
      checked_pow(p.size(), n, caps.enumeration_cap, "exact coverage");
  BlockThreshold thr(dist, n, D);

  std::vector<double> probs = sequence_probs(p, n, total);
  std::vector<std::uint8_t> x(n);
  double covered = 0;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    decode_word(idx, n, p.size(), x.data());
    for (const auto& w : cb.words)
      if (thr.covered(x.data(), w.data())) {
        covered += probs[idx];
        break;
      }
  }
  CoverageResult res;
  res.covered_probability = covered;
  return res;
}

CoverageResult coverage_mc(const Source& p, const Distortion& dist, const Codebook& cb,
                           double D, std::uint64_t seed, std::size_t samples) {
  validate_code_inputs(p, dist, cb.n);
  if (cb.words.empty()) fail(errc::invalid_argument, "codebook is empty");
  if (samples < 1) fail(errc::invalid_argument, "need at least one sample");
  const int n = cb.n;
  BlockThreshold thr(dist, n, D);

  std::vector<double> cum(p.size());
  double acc = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    cum[i] = acc;
  }
  cum.back() = 1.0;

  // One generator per fixed-size chunk, all derived from the master seed:
  // the stream is reproducible and chunks could be drawn independently.
  constexpr std::size_t kChunk = 65536;
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  SplitMix64 master(seed);
  std::vector<std::uint64_t> chunk_seeds(chunks);
  for (std::size_t c = 0; c < chunks; ++c) chunk_seeds[c] = master.next();

  std::vector<std::uint8_t> x(n);
  std::uint64_t hit = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    SplitMix64 gen(chunk_seeds[c]);
    const std::size_t lo = c * kChunk;
    const std::size_t hi = std::min(samples, lo + kChunk);
    for (std::size_t s = lo; s < hi; ++s) {
      for (int t = 0; t < n; ++t) {
        double u = gen.uniform();
        std::size_t letter = 0;
        while (letter + 1 < p.size() && u >= cum[letter]) ++letter;
        x[t] = static_cast<std::uint8_t>(letter);
      }
      for (const auto& w : cb.words)
        if (thr.covered(x.data(), w.data())) {
          ++hit;
          break;
        }
    }
  }
  CoverageResult res;
  double phat = static_cast<double>(hit) / static_cast<double>(samples);
  res.covered_probability = phat;
  res.monte_carlo = true;
  res.mc_stderr = std::sqrt(phat * (1 - phat) / static_cast<double>(samples));
  res.seed = seed;
  res.samples = samples;
  return res;
}

namespace {

// Per-candidate covered-source lists for the general (non-Hamming) path.
std::vector<std::vector<std::uint32_t>> build_ball_lists(
    const Source& p, const Distortion& dist, int n, const BlockThreshold& thr,
    std::uint64_t ln, std::uint64_t kn, const CodebookCaps& caps) {
  if (ln > caps.pair_cap / kn) {
    std::ostringstream os;
    os << "general covering path needs " << ln << " x " << kn
       << " distortion tests, above cap " << caps.pair_cap;
    fail(errc::enumeration_too_large, os.str());
  }
  std::vector<std::vector<std::uint32_t>> lists(kn);
  std::vector<std::uint8_t> x(n), w(n);
  for (std::uint64_t j = 0; j < kn; ++j) {
    decode_word(j, n, dist.num_repro_letters, w.data());
    for (std::uint64_t i = 0; i < ln; ++i) {
      decode_word(i, n, p.size(), x.data());
      if (thr.covered(x.data(), w.data())) lists[j].push_back(static_cast<std::uint32_t>(i));
    }
  }
  return lists;
}

}  // namespace

Codebook greedy_cover_code(const Source& p, const Distortion& dist, int n, double D,
                           double eps, const CodebookCaps& caps) {
  validate_code_inputs(p, dist, n);
  if (!(eps >= 0) || !(eps < 1)) fail(errc::invalid_argument, "eps must sit in [0, 1)");
  const std::size_t L = p.size();
  const std::size_t K = dist.num_repro_letters;
  const std::uint64_t ln = checked_pow(L, n, caps.enumeration_cap, "greedy covering");
  const std::uint64_t kn = checked_pow(K, n, caps.enumeration_cap, "greedy covering");
  BlockThreshold thr(dist, n, D);

  std::vector<double> probs = sequence_probs(p, n, ln);
  std::vector<char> covered(ln, 0);
  const double target = 1 - eps;

  const bool fast = hamming_fast_path(dist);
  const int radius = fast ? static_cast<int>(thr.int_limit) : 0;
  const std::vector<std::uint64_t> pow = index_powers(n, K);
  std::vector<std::vector<std::uint32_t>> lists;
  if (!fast) lists = build_ball_lists(p, dist, n, thr, ln, kn, caps);

  std::vector<std::uint64_t> chosen;
  std::vector<std::uint8_t> w(n);
  double covered_mass = 0;
  // 1e-12 slack absorbs summation drift so eps=0 (full cover) terminates.
  while (covered_mass < target - 1e-12) {
    std::uint64_t best_j = kn;
    double best_gain = 0;
    for (std::uint64_t j = 0; j < kn; ++j) {
      double gain = 0;
      if (fast) {
        decode_word(j, n, K, w.data());
        hamming_ball(w.data(), n, K, radius, pow, [&](std::uint64_t x) {
          if (!covered[x]) gain += probs[x];
        });
      } else {
        for (std::uint32_t x : lists[j])
          if (!covered[x]) gain += probs[x];
      }
      if (gain > best_gain) {
        best_gain = gain;
        best_j = j;
      }
    }
    if (best_j == kn)
      fail(errc::unreachable_coverage, "no word adds coverage but the target is unmet");
    chosen.push_back(best_j);
    if (fast) {
      decode_word(best_j, n, K, w.data());
      hamming_ball(w.data(), n, K, radius, pow, [&](std::uint64_t x) { covered[x] = 1; });
    } else {
      for (std::uint32_t x : lists[best_j]) covered[x] = 1;
    }
    covered_mass = 0;  // exact recomputation sidesteps accumulation drift
    for (std::uint64_t i = 0; i < ln; ++i)
      if (covered[i]) covered_mass += probs[i];
  }
  return from_indices(chosen, n, K);
}

Codebook exact_min_code(const Source& p, const Distortion& dist, int n, double D,
                        double eps, const CodebookCaps& caps) {
  validate_code_inputs(p, dist, n);
  if (!(eps >= 0) || !(eps < 1)) fail(errc::invalid_argument, "eps must sit in [0, 1)");
  const std::size_t L = p.size();
  const std::size_t K = dist.num_repro_letters;
  const std::uint64_t ln = checked_pow(L, n, caps.search_cap, "exhaustive search",
                                       errc::search_space_too_large);
  const std::uint64_t kn = checked_pow(K, n, caps.search_cap, "exhaustive search",
                                       errc::search_space_too_large);
  BlockThreshold thr(dist, n, D);

  std::vector<double> probs = sequence_probs(p, n, ln);
  // Coverage sets as bitmasks over source sequences.
  std::vector<std::uint32_t> ball(kn, 0);
  std::vector<double> ball_mass(kn, 0);
  std::vector<std::uint8_t> x(n), w(n);
  for (std::uint64_t j = 0; j < kn; ++j) {
    decode_word(j, n, K, w.data());
    for (std::uint64_t i = 0; i < ln; ++i) {
      decode_word(i, n, L, x.data());
      if (thr.covered(x.data(), w.data())) {
        ball[j] |= (1u << i);
        ball_mass[j] += probs[i];
      }
    }
  }
  std::vector<double> suffix_max(kn + 1, 0);
  for (std::uint64_t j = kn; j-- > 0;)
    suffix_max[j] = std::max(suffix_max[j + 1], ball_mass[j]);

  auto mass_of = [&](std::uint32_t mask) {
    double m = 0;
    for (std::uint64_t i = 0; i < ln; ++i)
      if (mask & (1u << i)) m += probs[i];
    return m;
  };
  const double target = 1 - eps;

  std::vector<std::uint64_t> pick;
  // Iterative deepening: the first subset found at the minimal size, in
  // lexicographic combination order, is the deterministic winner.
  for (std::uint64_t size = 1; size <= kn; ++size) {
    pick.clear();
    auto dfs = [&](auto&& self, std::uint64_t start, std::uint32_t mask,
                   std::uint64_t depth) -> bool {
      if (depth == size) return mass_of(mask) >= target - 1e-12;
      double bound = mass_of(mask) +
                     static_cast<double>(size - depth) * suffix_max[start];
      if (bound < target - 1e-12) return false;
      for (std::uint64_t j = start; j + (size - depth) <= kn; ++j) {
        pick.push_back(j);
        if (self(self, j + 1, mask | ball[j], depth + 1)) return true;
        pick.pop_back();
      }
      return false;
    };
    if (dfs(dfs, 0, 0, 0)) return from_indices(pick, n, K);
  }
  fail(errc::unreachable_coverage, "even the full reproduction space misses the target");
}

Codebook type_union_code(const Source& p, const Distortion& dist, int n, double D,
                         double delta_r, const CodebookCaps& caps, const RdOptions& rd,
                         RdfCache* cache) {
  validate_code_inputs(p, dist, n);
  const std::size_t L = p.size();
  const std::size_t K = dist.num_repro_letters;
  const std::uint64_t ln = checked_pow(L, n, caps.enumeration_cap, "type covering");
  const std::uint64_t kn = checked_pow(K, n, caps.enumeration_cap, "type covering");
  BlockThreshold thr(dist, n, D);

  RdfCache local_cache;
  RdfCache* c = cache ? cache : &local_cache;
  const double rate_ref = rdf_value(p.probs, dist, D, c, rd);
  const double radius2 =
      static_cast<double>(L) * std::log(static_cast<double>(n)) / static_cast<double>(n);

  TypeAtlas atlas = enumerate_types(n, p, caps.enumeration_cap);
  RdfEvaluator ev(dist, D, rd, c);
  std::vector<std::vector<std::int64_t>> selected;
  for (const TypeEntry& e : atlas.entries) {
    std::vector<double> q = e.pmf(n);
    double dist2 = 0;
    for (std::size_t i = 0; i < L; ++i) {
      double diff = q[i] - p[i];
      dist2 += diff * diff;
    }
    if (dist2 > radius2) continue;
    // Slack well above solver noise (~1e-9) but far below the rate gap
    // between neighboring types at this scale, so the boundary type a
    // redundancy budget names is included regardless of solve order.
    if (ev.rate(q) <= rate_ref + delta_r + 1e-7) selected.push_back(e.counts);
  }
  if (selected.empty())
    fail(errc::unreachable_coverage, "no type class qualifies for covering");

  const bool fast = hamming_fast_path(dist);
  const int radius = fast ? static_cast<int>(thr.int_limit) : 0;
  const std::vector<std::uint64_t> pow = index_powers(n, K);

  std::set<std::uint64_t> union_words;
  std::vector<std::uint8_t> x(n), w(n);
  std::vector<std::int64_t> cnt(L);
  for (const auto& counts : selected) {
    // Members of this type class, in index order.
    std::vector<std::uint64_t> members;
    for (std::uint64_t idx = 0; idx < ln; ++idx) {
      decode_word(idx, n, L, x.data());
      std::fill(cnt.begin(), cnt.end(), 0);
      for (int t = 0; t < n; ++t) ++cnt[x[t]];
      if (std::equal(cnt.begin(), cnt.end(), counts.begin())) members.push_back(idx);
    }
    std::unordered_map<std::uint64_t, std::size_t> member_pos;
    member_pos.reserve(members.size() * 2);
    for (std::size_t i = 0; i < members.size(); ++i) member_pos.emplace(members[i], i);

    std::vector<char> covered(members.size(), 0);
    std::size_t remaining = members.size();
    std::vector<std::uint32_t> gain(kn, 0);
    while (remaining > 0) {
      std::uint64_t best_j = kn;
      std::uint32_t best_gain = 0;
      if (fast) {
        std::fill(gain.begin(), gain.end(), 0u);
        for (std::size_t m = 0; m < members.size(); ++m) {
          if (covered[m]) continue;
          decode_word(members[m], n, L, x.data());
          hamming_ball(x.data(), n, K, radius, pow, [&](std::uint64_t j) { ++gain[j]; });
        }
        for (std::uint64_t j = 0; j < kn; ++j)
          if (gain[j] > best_gain) {
            best_gain = gain[j];
            best_j = j;
          }
      } else {
        for (std::uint64_t j = 0; j < kn; ++j) {
          decode_word(j, n, K, w.data());
          std::uint32_t g = 0;
          for (std::size_t m = 0; m < members.size(); ++m) {
            if (covered[m]) continue;
            decode_word(members[m], n, L, x.data());
            if (thr.covered(x.data(), w.data())) ++g;
          }
          if (g > best_gain) {
            best_gain = g;
            best_j = j;
          }
        }
      }
      if (best_j == kn)
        fail(errc::unreachable_coverage, "type class member admits no covering word");
      union_words.insert(best_j);
      decode_word(best_j, n, K, w.data());
      if (fast) {
        hamming_ball(w.data(), n, K, radius, pow, [&](std::uint64_t xi) {
          auto it = member_pos.find(xi);
          if (it != member_pos.end() && !covered[it->second]) {
            covered[it->second] = 1;
            --remaining;
          }
        });
      } else {
        for (std::size_t m = 0; m < members.size(); ++m) {
          if (covered[m]) continue;
          decode_word(members[m], n, L, x.data());
          if (thr.covered(x.data(), w.data())) {
            covered[m] = 1;
            --remaining;
          }
        }
      }
    }
  }
  std::vector<std::uint64_t> idxs(union_words.begin(), union_words.end());
  return from_indices(idxs, n, K);
}

double converse_rate_bound(const Source& p, const Distortion& dist, int n, double D,
                           double eps, const CodebookCaps& caps) {
  validate_code_inputs(p, dist, n);
  if (!(eps >= 0) || !(eps < 1)) fail(errc::invalid_argument, "eps must sit in [0, 1)");
  const std::size_t L = p.size();
  const std::size_t K = dist.num_repro_letters;
  const std::uint64_t ln = checked_pow(L, n, caps.enumeration_cap, "ball counting");
  const std::uint64_t kn = checked_pow(K, n, caps.enumeration_cap, "ball counting");
  BlockThreshold thr(dist, n, D);
  std::vector<double> probs = sequence_probs(p, n, ln);

  const bool fast = hamming_fast_path(dist);
  double max_mass = 0;
  std::vector<std::uint8_t> x(n), w(n);
  if (fast) {
    const int radius = static_cast<int>(thr.int_limit);
    const std::vector<std::uint64_t> pow = index_powers(n, L);
    for (std::uint64_t j = 0; j < kn; ++j) {
      decode_word(j, n, K, w.data());
      double mass = 0;
      hamming_ball(w.data(), n, L, radius, pow, [&](std::uint64_t xi) { mass += probs[xi]; });
      max_mass = std::max(max_mass, mass);
    }
  } else {
    if (ln > caps.pair_cap / kn)
      fail(errc::enumeration_too_large, "ball counting above the pair cap");
    for (std::uint64_t j = 0; j < kn; ++j) {
      decode_word(j, n, K, w.data());
      double mass = 0;
      for (std::uint64_t i = 0; i < ln; ++i) {
        decode_word(i, n, L, x.data());
        if (thr.covered(x.data(), w.data())) mass += probs[i];
      }
      max_mass = std::max(max_mass, mass);
    }
  }
  if (!(max_mass > 0)) fail(errc::unreachable_coverage, "no word covers any source mass");
  double need = (1 - eps) / max_mass;
  std::uint64_t m = static_cast<std::uint64_t>(std::ceil(need - 1e-12));
  if (m < 1) m = 1;
  return std::log(static_cast<double>(m)) / static_cast<double>(n);
}

std::string codebook_to_text(const Codebook& cb) {
  if (cb.words.empty()) fail(errc::invalid_argument, "codebook is empty");
  std::string out = "n=" + std::to_string(cb.n) + " K=" + std::to_string(cb.repro_alphabet) + "\n";
  for (const auto& w : cb.words) {
    for (int t = 0; t < cb.n; ++t) {
      if (t) out += ' ';
      out += std::to_string(static_cast<int>(w[t]));
    }
    out += '\n';
  }
  return out;
}

Codebook codebook_parse_text(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header)) fail(errc::parse_error, "empty codebook text");
  int n = 0;
  unsigned long long k = 0;
  if (std::sscanf(header.c_str(), "n=%d K=%llu", &n, &k) != 2 || n < 1 || k < 1)
    fail(errc::parse_error, "codebook header must be n=<n> K=<K>");
  Codebook cb;
  cb.n = n;
  cb.repro_alphabet = static_cast<std::size_t>(k);
  std::string line;
  std::set<std::vector<std::uint8_t>> seen;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<std::uint8_t> w;
    long v;
    while (ls >> v) {
      if (v < 0 || static_cast<unsigned long long>(v) >= k)
        fail(errc::parse_error, "codeword symbol out of range");
      w.push_back(static_cast<std::uint8_t>(v));
    }
    if (!ls.eof()) fail(errc::parse_error, "codeword line holds a non-integer token");
    if (static_cast<int>(w.size()) != n) fail(errc::parse_error, "codeword length mismatch");
    if (!seen.insert(w).second) fail(errc::parse_error, "duplicate codeword");
    cb.words.push_back(std::move(w));
  }
  if (cb.words.empty()) fail(errc::parse_error, "codebook has no words");
  return cb;
}

}  // namespace rdd

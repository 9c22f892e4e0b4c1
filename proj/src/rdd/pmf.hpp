#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdd/errors.hpp"

namespace rdd {

// Finite-alphabet source distribution.  Entries are strictly positive and
// sum to 1 within 1e-12 after construction.
struct Source {
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }
  double operator[](std::size_t i) const { return probs[i]; }
};

// Validates and normalizes a pmf.  Rejects entries <= 0.  With `strict`,
// rejects |sum - 1| > 1e-9 instead of silently renormalizing.
Source validate_source(std::vector<double> probs, bool strict = false);

// Shannon entropy in nats; 0 log 0 = 0.  Entries may be zero.
double entropy(std::span<const double> p);

// KL divergence D(q || p) in nats.  Requires q absolutely continuous
// w.r.t. p; q entries may be zero, p entries must be positive wherever
// q is positive.
double divergence(std::span<const double> q, std::span<const double> p);
double divergence(const Source& q, const Source& p);

enum class DistortionKind { general, difference, hamming };

// Single-letter distortion measure d : X x Xhat -> [0, inf), stored row
// major (source letter index major).  Every source letter has at least
// one zero-distortion reproduction.
struct Distortion {
  std::size_t num_source_letters = 0;
  std::size_t num_repro_letters = 0;
  std::vector<double> matrix;
  DistortionKind kind = DistortionKind::general;
  double d_max = 0;

  double at(std::size_t x, std::size_t xhat) const {
    return matrix[x * num_repro_letters + xhat];
  }
  // True when every entry is a nonnegative integer (to 1e-9), so block
  // distortion thresholds can be handled exactly.
  bool is_integral() const;
};

Distortion make_hamming_distortion(std::size_t num_letters);
// Builds the circulant matrix d(x, xhat) = dz[(xhat - x) mod L].
// Requires dz[0] = 0.
Distortion make_difference_distortion(const std::vector<double>& dz);
Distortion make_general_distortion(std::size_t num_source_letters,
                                   std::size_t num_repro_letters,
                                   std::vector<double> matrix);

// Smallest achievable expected distortion (the zero-rate point):
// min over xhat of E_p[d(X, xhat)].  Letters with zero mass are ignored.
double trivial_distortion(std::span<const double> pmf, const Distortion& dist);

struct SourceSpec {
  Source source;
  std::optional<Distortion> distortion;
};

// Parses {"probs": [...], "distortion": {"kind": ..., "matrix": [[...]]}}.
// The distortion block is optional; kind defaults to "general" when a
// matrix is given.  "hamming" needs no matrix; "difference" accepts either
// a full circulant matrix or {"kind":"difference","dz":[...]}.
SourceSpec parse_source_spec(const std::string& json_text);

}  // namespace rdd

#include "rdd/pmf.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace rdd {

const char* errc_name(errc c) {
  switch (c) {
    case errc::ok: return "Ok";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::non_positive_mass: return "NonPositiveMass";
    case errc::not_normalized: return "NotNormalized";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::negative_distortion: return "NegativeDistortion";
    case errc::no_zero_row_min: return "NoZeroRowMin";
    case errc::d_out_of_range: return "DOutOfRange";
    case errc::no_convergence: return "NoConvergence";
    case errc::solver_failure: return "SolverFailure";
    case errc::zero_variance: return "ZeroVariance";
    case errc::rate_below_rdf: return "RateBelowRdf";
    case errc::infeasible: return "Infeasible";
    case errc::grid_cap_exceeded: return "GridCapExceeded";
    case errc::atlas_too_large: return "AtlasTooLarge";
    case errc::poor_fit: return "PoorFit";
    case errc::enumeration_too_large: return "EnumerationTooLarge";
    case errc::search_space_too_large: return "SearchSpaceTooLarge";
    case errc::unreachable_coverage: return "UnreachableCoverage";
    case errc::parse_error: return "ParseError";
    case errc::io_error: return "IoError";
  }
  return "Unknown";
}

Source validate_source(std::vector<double> probs, bool strict) {
  if (probs.empty()) fail(errc::invalid_argument, "source pmf is empty");
  double sum = 0;
  for (double v : probs) {
    if (!(v > 0) || !std::isfinite(v))
      fail(errc::non_positive_mass, "source pmf entries must be strictly positive");
    sum += v;
  }
  if (strict && std::fabs(sum - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "source pmf sums to " << sum << ", not 1";
    fail(errc::not_normalized, os.str());
  }
  for (double& v : probs) v /= sum;
  return Source{std::move(probs)};
}

double entropy(std::span<const double> p) {
  double h = 0;
  for (double v : p)
    if (v > 0) h -= v * std::log(v);
  return h;
}

double divergence(std::span<const double> q, std::span<const double> p) {
  if (q.size() != p.size())
    fail(errc::dimension_mismatch, "divergence: pmf lengths differ");
  double d = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] <= 0) continue;
    if (p[i] <= 0)
      fail(errc::invalid_argument, "divergence: q puts mass where p has none");
    d += q[i] * std::log(q[i] / p[i]);
  }
  return d > 0 ? d : 0;
}

double divergence(const Source& q, const Source& p) {
  return divergence(std::span<const double>(q.probs), std::span<const double>(p.probs));
}

bool Distortion::is_integral() const {
  for (double v : matrix)
    if (std::fabs(v - std::round(v)) > 1e-9) return false;
  return true;
}

namespace {

void check_matrix(const Distortion& d) {
  bool square_zero_diag = d.num_source_letters == d.num_repro_letters;
  for (std::size_t x = 0; x < d.num_source_letters; ++x) {
    double row_min = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < d.num_repro_letters; ++j) {
      double v = d.at(x, j);
      if (!(v >= 0) || !std::isfinite(v))
        fail(errc::negative_distortion, "distortion entries must be finite and >= 0");
      row_min = std::min(row_min, v);
      if (square_zero_diag && x == j && v != 0) square_zero_diag = false;
    }
    if (row_min != 0)
      fail(errc::no_zero_row_min,
           "every source letter needs a zero-distortion reproduction");
  }
  (void)square_zero_diag;
}

}  // namespace

Distortion make_hamming_distortion(std::size_t num_letters) {
  if (num_letters < 2) fail(errc::invalid_argument, "hamming distortion needs >= 2 letters");
  Distortion d;
  d.num_source_letters = d.num_repro_letters = num_letters;
  d.matrix.assign(num_letters * num_letters, 1.0);
  for (std::size_t i = 0; i < num_letters; ++i) d.matrix[i * num_letters + i] = 0;
  d.kind = DistortionKind::hamming;
  d.d_max = 1.0;
  return d;
}

Distortion make_difference_distortion(const std::vector<double>& dz) {
  const std::size_t L = dz.size();
  if (L < 2) fail(errc::invalid_argument, "difference distortion needs >= 2 letters");
  if (dz[0] != 0) fail(errc::no_zero_row_min, "difference distortion requires dz[0] = 0");
  Distortion d;
  d.num_source_letters = d.num_repro_letters = L;
  d.matrix.assign(L * L, 0);
  d.d_max = 0;
  for (std::size_t x = 0; x < L; ++x)
    for (std::size_t j = 0; j < L; ++j) {
      double v = dz[(j + L - x % L) % L];
      d.matrix[x * L + j] = v;
      d.d_max = std::max(d.d_max, v);
    }
  d.kind = DistortionKind::difference;
  check_matrix(d);
  return d;
}

Distortion make_general_distortion(std::size_t num_source_letters,
                                   std::size_t num_repro_letters,
                                   std::vector<double> matrix) {
  if (num_source_letters == 0 || num_repro_letters == 0)
    fail(errc::invalid_argument, "distortion alphabets must be nonempty");
  if (matrix.size() != num_source_letters * num_repro_letters)
    fail(errc::dimension_mismatch, "distortion matrix size mismatch");
  Distortion d;
  d.num_source_letters = num_source_letters;
  d.num_repro_letters = num_repro_letters;
  d.matrix = std::move(matrix);
  d.kind = DistortionKind::general;
  d.d_max = 0;
  for (double v : d.matrix) d.d_max = std::max(d.d_max, v);
  check_matrix(d);
  return d;
}

double trivial_distortion(std::span<const double> pmf, const Distortion& dist) {
  if (pmf.size() != dist.num_source_letters)
    fail(errc::dimension_mismatch, "pmf length does not match distortion rows");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < dist.num_repro_letters; ++j) {
    double e = 0;
    for (std::size_t x = 0; x < pmf.size(); ++x)
      if (pmf[x] > 0) e += pmf[x] * dist.at(x, j);
    best = std::min(best, e);
  }
  return best;
}

namespace {

using nlohmann::json;

std::vector<double> parse_number_array(const json& j, const char* what) {
  if (!j.is_array()) fail(errc::parse_error, std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) fail(errc::parse_error, std::string(what) + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Distortion parse_distortion_block(const json& j, std::size_t source_letters) {
  if (!j.is_object()) fail(errc::parse_error, "distortion block must be an object");
  std::string kind = j.value("kind", j.contains("matrix") ? "general" : "hamming");
  if (kind == "hamming") {
    std::size_t L = source_letters;
    if (j.contains("letters")) L = j.at("letters").get<std::size_t>();
    return make_hamming_distortion(L);
  }
  if (kind == "difference") {
    if (j.contains("dz")) return make_difference_distortion(parse_number_array(j.at("dz"), "dz"));
    if (!j.contains("matrix")) fail(errc::parse_error, "difference distortion needs dz or matrix");
    // Full matrix given: recover dz from the first row and check circulant.
    const json& m = j.at("matrix");
    if (!m.is_array() || m.empty()) fail(errc::parse_error, "matrix must be a nonempty array of rows");
    std::vector<double> dz = parse_number_array(m.at(0), "matrix row");
    Distortion d = make_difference_distortion(dz);
    if (m.size() != dz.size()) fail(errc::parse_error, "difference matrix must be square");
    for (std::size_t x = 0; x < m.size(); ++x) {
      std::vector<double> row = parse_number_array(m.at(x), "matrix row");
      if (row.size() != dz.size()) fail(errc::parse_error, "distortion matrix rows differ in length");
      for (std::size_t c = 0; c < row.size(); ++c)
        if (row[c] != d.at(x, c))
          fail(errc::parse_error, "matrix is not circulant; use kind \"general\"");
    }
    return d;
  }
  if (kind == "general") {
    if (!j.contains("matrix")) fail(errc::parse_error, "general distortion needs a matrix");
    const json& m = j.at("matrix");
    if (!m.is_array() || m.empty()) fail(errc::parse_error, "matrix must be a nonempty array of rows");
    std::vector<double> flat;
    std::size_t cols = 0;
    for (std::size_t x = 0; x < m.size(); ++x) {
      std::vector<double> row = parse_number_array(m.at(x), "matrix row");
      if (x == 0)
        cols = row.size();
      else if (row.size() != cols)
        fail(errc::parse_error, "distortion matrix rows differ in length");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return make_general_distortion(m.size(), cols, std::move(flat));
  }
  fail(errc::parse_error, "unknown distortion kind \"" + kind + "\"");
}

}  // namespace

SourceSpec parse_source_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    fail(errc::parse_error, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("probs"))
    fail(errc::parse_error, "source spec needs a \"probs\" array");
  SourceSpec spec;
  spec.source = validate_source(parse_number_array(j.at("probs"), "probs"));
  if (j.contains("distortion"))
    spec.distortion = parse_distortion_block(j.at("distortion"), spec.source.size());
  if (spec.distortion && spec.distortion->num_source_letters != spec.source.size())
    fail(errc::dimension_mismatch, "distortion rows do not match source alphabet");
  return spec;
}

}  // namespace rdd

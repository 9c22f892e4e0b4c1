#pragma once

#include <stdexcept>
#include <string>

namespace rdd {

// Stable failure taxonomy shared by the C++ core and the C surface.
enum class errc {
  ok = 0,
  invalid_argument,
  non_positive_mass,
  not_normalized,
  dimension_mismatch,
  negative_distortion,
  no_zero_row_min,
  d_out_of_range,
  no_convergence,
  solver_failure,
  zero_variance,
  rate_below_rdf,
  infeasible,
  grid_cap_exceeded,
  atlas_too_large,
  poor_fit,
  enumeration_too_large,
  search_space_too_large,
  unreachable_coverage,
  parse_error,
  io_error,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace rdd

#pragma once

#include <stdexcept>
#include <string>

namespace spilab {

/// Failure categories; the CLI maps each to a distinct exit code.
enum class Errc {
  invalid_argument,
  parse_error,
  non_integrable_density,
  tail_mass_exceeded,
  non_finite_value,
  no_sign_change,
  max_iter_exceeded,
  eigen_convergence,
  grid_too_coarse,
  insufficient_spectrum,
  norm_unbounded,
  hypothesis_not_satisfied,
  empty_input,
  io_error,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

const char* errc_name(Errc code);

}  // namespace spilab

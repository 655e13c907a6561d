#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace dshock {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class Errc {
  invalid_dimension,
  invalid_parameter,
  invalid_input,
  dimension_mismatch,
  degenerate_gradient,
  off_surface,
  stencil,
  empty_quadrature,
  support_violation,
  unsupported_front,
  no_delta_shock,
  ambiguous_root,
  stiffness,
  caustic,
  undersampled,
  not_converged,
  internal,
  audit_invalid,
  invalid_battery,
  parse,
  schema,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Throws invalid_input when any entry of v is NaN or infinite.
void require_finite(const Vec& v, const char* what);
void require_finite(double v, const char* what);

}  // namespace dshock

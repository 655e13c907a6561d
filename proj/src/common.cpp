#include "dshock/common.hpp"

#include <cmath>

namespace dshock {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::invalid_dimension: return "invalid-dimension";
    case Errc::invalid_parameter: return "invalid-parameter";
    case Errc::invalid_input: return "invalid-input";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::degenerate_gradient: return "degenerate-gradient";
    case Errc::off_surface: return "off-surface";
    case Errc::stencil: return "stencil";
    case Errc::empty_quadrature: return "empty-quadrature";
    case Errc::support_violation: return "support-violation";
    case Errc::unsupported_front: return "unsupported-front";
    case Errc::no_delta_shock: return "no-delta-shock";
    case Errc::ambiguous_root: return "ambiguous-root";
    case Errc::stiffness: return "stiffness";
    case Errc::caustic: return "caustic";
    case Errc::undersampled: return "undersampled";
    case Errc::not_converged: return "not-converged";
    case Errc::internal: return "internal";
    case Errc::audit_invalid: return "audit-invalid";
    case Errc::invalid_battery: return "invalid-battery";
    case Errc::parse: return "parse";
    case Errc::schema: return "schema";
  }
  return "unknown";
}

void require_finite(const Vec& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw Error(Errc::invalid_input, std::string(what) + " is not finite");
  }
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw Error(Errc::invalid_input, std::string(what) + " is not finite");
}

}  // namespace dshock

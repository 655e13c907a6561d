#include "dshock/rh.hpp"

#include <cmath>

namespace dshock {

void SideStates::validate() const {
  if (U_minus.size() != U_plus.size() || U_minus.size() == 0)
    throw Error(Errc::dimension_mismatch, "side velocities must have equal, positive size");
  require_finite(rho_minus, "rho_minus");
  require_finite(rho_plus, "rho_plus");
  require_finite(U_minus, "U_minus");
  require_finite(U_plus, "U_plus");
  if (rho_minus < 0.0 || rho_plus < 0.0) throw Error(Errc::invalid_input, "densities must be nonnegative");
}

SideStates SideStates::swapped() const { return {rho_plus, rho_minus, U_plus, U_minus}; }

FrontState::FrontState(double e_, const Vec& nu_, double G_, double K_) : e(e_), nu(nu_), G(G_), K(K_) {
  require_finite(e, "surface density e");
  require_finite(nu, "front normal");
  require_finite(G, "normal speed");
  require_finite(K, "mean curvature");
  if (e < 0.0) throw Error(Errc::invalid_input, "surface density must be nonnegative");
  if (std::fabs(nu.norm() - 1.0) > 1e-12) throw Error(Errc::invalid_input, "front normal must have unit length");
  U_delta = G * nu;
}

namespace {

struct Jumps {
  Vec rhoF;    // [rho F(U)]
  double rho;  // [rho]
  Vec rhoU;    // [rho U]
  Mat rhoN;    // [rho N(U)]
};

Jumps jumps(const FluxModel& flux, const SideStates& s) {
  s.validate();
  if (s.dim() != flux.dim()) throw Error(Errc::dimension_mismatch, "side states and flux differ in dimension");
  return {s.rho_minus * flux.F(s.U_minus) - s.rho_plus * flux.F(s.U_plus), s.rho_minus - s.rho_plus,
          s.rho_minus * s.U_minus - s.rho_plus * s.U_plus,
          s.rho_minus * flux.N(s.U_minus) - s.rho_plus * flux.N(s.U_plus)};
}

RHDeficit contract(const Jumps& j, const Vec& nu, double G) {
  return {j.rhoF.dot(nu) - j.rho * G, j.rhoN * nu - j.rhoU * G};
}

}  // namespace

RHDeficit deficits(const FluxModel& flux, const SideStates& s, const FrontState& f) {
  if (f.nu.size() != flux.dim()) throw Error(Errc::dimension_mismatch, "front normal and flux differ in dimension");
  return contract(jumps(flux, s), f.nu, f.G);
}

RHDeficit spacetime_deficits(const FluxModel& flux, const SideStates& s, const Vec& n) {
  const int d = flux.dim();
  if (n.size() != d + 1) throw Error(Errc::dimension_mismatch, "space-time normal must have n + 1 components");
  require_finite(n, "space-time normal");
  const double nx = n.head(d).norm();
  if (nx < 1e-14) throw Error(Errc::degenerate_gradient, "space-time normal has no spatial part");
  return contract(jumps(flux, s), n.head(d) / nx, -n[d] / nx);
}

double RHResidual::max_abs() const {
  double m = std::fabs(mass);
  if (momentum.size() > 0) m = std::max(m, momentum.cwiseAbs().maxCoeff());
  return m;
}

RHResidual rh_residual(const FluxModel& flux, const SideStates& s, const FrontState& f, double de_dt,
                       const Vec& deU_dt) {
  const RHDeficit def = deficits(flux, s, f);
  if (deU_dt.size() != flux.dim()) throw Error(Errc::dimension_mismatch, "momentum rate has wrong size");
  const double curv = 2.0 * f.K * f.G * f.e;
  return {de_dt - curv - def.mass, deU_dt - curv * f.U_delta - def.momentum};
}

Vec tangential_residual(const FluxModel& flux, const SideStates& s, const FrontState& f) {
  const Vec m = deficits(flux, s, f).momentum;
  return m - f.nu * f.nu.dot(m);
}

bool entropy_ok(const SideStates& s, const FrontState& f, bool strict) {
  const double up = s.U_plus.dot(f.nu);
  const double um = s.U_minus.dot(f.nu);
  const double ud = f.G;
  return strict ? (up < ud && ud < um) : (up <= ud && ud <= um);
}

}  // namespace dshock

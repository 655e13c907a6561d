#pragma once

#include "dshock/common.hpp"
#include "dshock/fluxes.hpp"
#include "dshock/rh.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>

namespace dshock {

// Constant states (rho_l, u_l) for x < 0 and (rho_r, u_r) for x > 0 with an
// optional point mass e0 at the origin moving initially at u_delta0.
struct RiemannData1D {
  double rho_l = 1.0, rho_r = 1.0;
  double u_l = 0.0, u_r = 0.0;
  FluxModel flux = standard_flux(1);
  double e0 = 0.0;
  std::optional<double> u_delta0;

  void validate() const;
  // Left is the "-" side of a front with nu = +1.
  SideStates sides() const;
};

// Coefficients of the constant-speed quadratic
//   [rho] u^2 - ([rho F] + [rho u]) u + [rho N] = 0.
struct RHQuadratic {
  double a;  // [rho F]
  double b;  // [rho]
  double c;  // [rho N]
  double d;  // [rho u]
};
RHQuadratic rh_quadratic(const RiemannData1D& d);

// Entropy-selected root of the quadratic (linear branch when [rho] = 0).
// Throws no_delta_shock when no root satisfies u_r < u < u_l, ambiguous_root
// when a second root satisfies the non-strict condition.
double delta_shock_speed(const RiemannData1D& d);

// rho_l rho_r (u_l - u_r)^2 == 0 within 1e-14.
bool classical_shock_feasible(const RiemannData1D& d);

struct DeltaShockPath1D {
  std::string kind;  // "constant", "accretion" (closed form), "integrated"
  std::function<double(double)> phi, u_delta, e;
  // Time derivatives of e and e*u_delta from the closed form or the ODE.
  std::function<double(double)> e_dot, momentum_dot;
  // Entropy root of the quadratic: the speed for e0 = 0 and the long-time
  // limit otherwise.
  double u_asymptotic = 0.0;
  double t_max = std::numeric_limits<double>::infinity();
};

// Exact path for constant side states. Integrated paths are valid on [0, horizon].
DeltaShockPath1D solve_constant_states(const RiemannData1D& d, double horizon = 10.0);

struct PointAtom {
  double position;
  double e;
};
struct PointEvaluation {
  double rho;
  double u;
  std::optional<PointAtom> atom;
};
PointEvaluation evaluate_solution(const DeltaShockPath1D& path, const RiemannData1D& d, double x, double t);

}  // namespace dshock

#pragma once

// A delta-shock candidate: regular part on both sides of one front plus the
// surface density carried by the front. Every geometry reduces to a normal
// coordinate s:
//   line / plane:  s = nu . x, front at s = front(t), S = s - front(t);
//                  Omega^- is s < front (the "below" side).
//   sphere:        s = r = |x|, front at r = front(t), S = -r + front(t);
//                  Omega^- is r > front (the "above" side), nu = -x/r.

#include "dshock/common.hpp"
#include "dshock/fluxes.hpp"
#include "dshock/geometry.hpp"
#include "dshock/rh.hpp"
#include "dshock/riemann1d.hpp"
#include "dshock/spherical.hpp"

#include <functional>
#include <limits>
#include <string>
#include <utility>

namespace dshock {

enum class FrontGeometry { line, plane, sphere };

const char* to_string(FrontGeometry g);

struct SideField {
  std::function<double(double, double)> rho;  // (s, t)
  // Full velocity (line / plane) or the radial velocity as a size-1 vector (sphere).
  std::function<Vec(double, double)> U;
  // Interval of s outside which rho vanishes.
  std::function<std::pair<double, double>(double)> support;
};

struct DeltaShockSolution {
  std::string name;
  FrontGeometry geometry = FrontGeometry::line;
  int dim = 1;
  FluxModel flux = standard_flux(1);  // one-dimensional (radial) for spheres
  Vec nu;                             // line / plane normal
  SideField below, above;             // s < front and s > front
  std::function<double(double)> front, front_speed, e;
  double t_max = std::numeric_limits<double>::infinity();
  bool closed_form = true;  // false for ODE-integrated fronts

  // Side states and front data in the rh conventions at time t (for the
  // sphere: the one-dimensional radial picture with nu = -1).
  SideStates sides(double t) const;
  FrontState front_state(double t) const;
  double omega() const;  // |S^{n-1}| for spheres, 1 otherwise
  // Surface measure of Gamma_t per unit transverse area (line / plane) or in total (sphere).
  double front_measure(double t) const;

  // Cartesian velocity of the regular part at x (line / plane / sphere).
  double rho_at(const Vec& x, double t) const;
  Vec U_at(const Vec& x, double t) const;
  double coordinate(const Vec& x) const;

  // The front as a level set S(x, t) with analytic derivatives.
  LevelSetFront level_set() const;
};

// Constant states on [-L, 0) and (0, L] at t = 0 with the blocks' outer edges
// advected at F(u); the front follows the exact Riemann path.
DeltaShockSolution riemann_solution(const RiemannData1D& d, const DeltaShockPath1D& path, double L);

// Same data with the front replaced by a prescribed candidate: position
// x0 + speed t, surface density e0 + rate t. Used for perturbed and
// time-reversed sanity candidates.
DeltaShockSolution riemann_candidate(const RiemannData1D& d, double L, double speed, double e0, double rate,
                                     double x0 = 0.0);

// Planar front with normal nu separating constant states U_minus (s < 0) and
// U_plus (s > 0) on [-L, L]; the normal dynamics follow the 1-D path with
// u_l = U_minus . nu and u_r = U_plus . nu.
DeltaShockSolution planar_solution(const Vec& nu, double rho_minus, const Vec& U_minus, double rho_plus,
                                   const Vec& U_plus, const DeltaShockPath1D& path, double L);
DeltaShockSolution planar_solution(const Vec& nu, double rho_minus, const Vec& U_minus, double rho_plus,
                                   const Vec& U_plus, const DeltaShockPath1D& path, double L,
                                   const FluxModel& flux);

DeltaShockSolution spherical_solution(const SphericalTrajectory& traj, const RadialField& inner,
                                      const RadialField& outer, int n, const FluxModel& flux = standard_flux(1));

}  // namespace dshock

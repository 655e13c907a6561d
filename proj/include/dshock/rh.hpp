#pragma once

// Rankine-Hugoniot deficits of a delta-shock front. Jumps are [g] = g^- - g^+,
// with "-" the side S < 0 that nu points away from (see geometry.hpp).

#include "dshock/common.hpp"
#include "dshock/fluxes.hpp"

namespace dshock {

struct SideStates {
  double rho_minus = 0.0;
  double rho_plus = 0.0;
  Vec U_minus;
  Vec U_plus;

  int dim() const { return static_cast<int>(U_minus.size()); }
  // Throws on invalid entries or mismatched sizes.
  void validate() const;
  // The same states seen from the other side of the front.
  SideStates swapped() const;
};

// Front data at one point. U_delta is always G * nu.
struct FrontState {
  double e = 0.0;
  Vec nu;
  double G = 0.0;
  double K = 0.0;
  Vec U_delta;

  FrontState() = default;
  // Throws unless |nu| = 1 (to 1e-12) and e >= 0.
  FrontState(double e, const Vec& nu, double G, double K = 0.0);
};

struct RHDeficit {
  double mass = 0.0;
  Vec momentum;
};

// ([rho F] - [rho] U_delta) . nu  and  [rho N] nu - [rho U] G.
RHDeficit deficits(const FluxModel& flux, const SideStates& s, const FrontState& f);

// The same deficits obtained by contracting the space-time jumps
// ([rho F], [rho]) and ([rho N], [rho U]) with any non-degenerate space-time
// normal n = (n_x, n_t) of the front (n_x not zero), normalised so that its
// spatial part has unit length.
RHDeficit spacetime_deficits(const FluxModel& flux, const SideStates& s, const Vec& spacetime_normal);

struct RHResidual {
  double mass = 0.0;
  Vec momentum;

  double max_abs() const;
};

// (de/dt - 2 K G e - mass deficit,  d(e U_delta)/dt - 2 K G e U_delta - momentum deficit)
RHResidual rh_residual(const FluxModel& flux, const SideStates& s, const FrontState& f, double de_dt,
                       const Vec& deU_dt);

// Tangential part of the momentum deficit. With U_delta parallel to nu this is a
// constraint on the side data and is reported, never solved for.
Vec tangential_residual(const FluxModel& flux, const SideStates& s, const FrontState& f);

// U^+ . nu < U_delta . nu < U^- . nu (non-strict variant uses <=).
bool entropy_ok(const SideStates& s, const FrontState& f, bool strict = true);

}  // namespace dshock

#pragma once

// Global functionals of a delta-shock solution and the conservation and energy
// laws checked on them.
//
//   M = int rho dx,  P = int rho U dx,  W = 1/2 int rho |U|^2 dx     (regular part)
//   m = int_Gamma e dmu,  p = int_Gamma e U_delta dmu,  w = 1/2 int_Gamma e |U_delta|^2 dmu
//
// Line and plane solutions are measured per unit transverse area. For spheres
// the momenta are radial: int rho u dx and m phi'.

#include "dshock/common.hpp"
#include "dshock/rh.hpp"
#include "dshock/solution.hpp"
#include "dshock/weakcheck.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dshock {

struct BalanceSample {
  double t = 0.0;
  double M = 0.0, m = 0.0;
  Vec P, p;
  double W = 0.0, w = 0.0;
  double mdot = 0.0;           // finite difference of m on the sample grid
  double mdot_analytic = 0.0;  // |Gamma_t| times the mass deficit
  double dissipation = 0.0;    // |Gamma_t| times energy_dissipation_rate (standard flux)
  bool entropy_strict = false;
  bool jump = false;  // side data differ at the front

  double sum_mass() const { return M + m; }
  Vec sum_momentum() const { return P + p; }
  double sum_energy() const { return W + w; }
};

struct AuditOptions {
  std::optional<double> tol_cons;  // defaults: 1e-8 closed form, 1e-6 integrated
  std::optional<double> tol_mono;  // defaults: 1e-9 closed form, 1e-6 integrated
  int panels = 64;
  int q = 8;
  double box_factor = 1.2;
  // Explicit audit interval in the normal coordinate (overrides box_factor).
  std::optional<std::pair<double, double>> box;
};

struct BalanceReport {
  std::string name;
  int dim = 1;
  int momentum_components = 1;
  std::vector<BalanceSample> samples;
  std::pair<double, double> box;
  double tol_cons = 0.0, tol_mono = 0.0;
  bool energy_checked = false;  // energy laws apply to the standard flux only

  double mass_drift = 0.0;      // max |(M+m)(t) - (M+m)(0)| / (M+m)(0)
  double momentum_drift = 0.0;  // max over components, relative to the total |momentum| at t = 0
  double energy_rise = 0.0;     // max increase of W+w between samples, relative to max(1, (W+w)(0))
  double W_rise = 0.0;
  double min_mdot = 0.0;        // over samples with a jump

  bool mass_ok = true, momentum_ok = true;
  bool concentration_ok = true;  // mdot > 0 where entropy is strict and data differ
  bool mdot_positive = true;     // mdot > 0 at every sample with a jump
  bool entropy_ok = true;        // strict entropy at every sample with a jump
  bool energy_ok = true, W_ok = true;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

// Samples must be strictly increasing, within [0, t_max].
BalanceReport audit(const DeltaShockSolution& solution, const std::vector<double>& times, const AuditOptions& opts = {});

struct DissipationRate {
  double value;
  bool entropy_ok;  // strict entropy condition at this front state
};

// Surface density of -d(W+w)/dt for the standard flux:
//   1/2 (rho- |U-_tan|^2 (U-.nu - G) + rho+ |U+_tan|^2 (G - U+.nu) + rho- (U-.nu - G)^3 + rho+ (G - U+.nu)^3).
DissipationRate energy_dissipation_rate(const SideStates& s, const FrontState& f);

struct EnergyInequalityReport {
  std::vector<std::size_t> members;  // indices of nonnegative battery members
  std::vector<double> values;
  double min_value = 0.0;
  double tol = 1e-6;
  bool ok() const { return min_value >= -tol; }
};

// V(phi) = int int rho u^2 phi_t + rho u^3 phi_x + int_Gamma e u_delta^2 dphi/dt
//          + int rho0 u0^2 phi(., 0) + e0 u_delta0^2 phi(front, 0),
// which is >= 0 for every nonnegative phi when (rho u^2)_t + (rho u^3)_x <= 0.
EnergyInequalityReport check_energy_inequality_1d(const DeltaShockSolution& solution,
                                                  const TestFunctionBattery& battery, int panels = 32, int q = 8,
                                                  double tol = 1e-6);

}  // namespace dshock

#pragma once

// Spherically symmetric delta-shock fronts S = -r + phi(t).
//
// Orientation: Omega^- is the EXTERIOR (r > phi), nu = -x/r, G = -phi'.
// Every "minus" quantity in this module therefore refers to the outer field
// and every "plus" quantity to the inner one. Jumps are [g] = g_outer - g_inner.
//
// For n = 1 the radial coordinate is the line coordinate itself (it may be
// negative), the unit "sphere" is a single point and its measure is 1.

#include "dshock/common.hpp"
#include "dshock/expr.hpp"
#include "dshock/fluxes.hpp"
#include "dshock/ode.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace dshock {

// Measure of the unit sphere S^{n-1}; 1 for n = 1.
double unit_sphere_measure(int n);

struct RadialField {
  std::string kind;  // "constant", "free-flow", "expression"
  std::function<double(double, double)> rho;
  std::function<double(double, double)> u;
  // Interval of r outside which rho vanishes, as a function of time.
  std::function<std::pair<double, double>(double)> support;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// rho and u constant on [r_lo, r_hi] at t = 0, translated with speed flux_speed
// (F(u) for the mass flux in use; u for the standard flux).
RadialField constant_field(double rho, double u, double r_lo = -kInf, double r_hi = kInf,
                           double flux_speed = std::numeric_limits<double>::quiet_NaN());

// Free streaming of initial data (rho0, u0) given on [r_lo, r_hi] (finite):
// characteristics r = r0 + t u0(r0), rho = rho0(r0) (r0/r)^(n-1) / (1 + t u0'(r0)).
// Evaluation at or beyond the first crossing of characteristics throws caustic.
RadialField free_flow_field(int n, std::function<double(double)> rho0, std::function<double(double)> u0, double r_lo,
                            double r_hi);

RadialField expression_field(const Expression& rho, const Expression& u, double r_lo = -kInf, double r_hi = kInf);

struct SampleBox {
  double r_lo, r_hi, t_lo, t_hi;
  int samples = 16;
};

// Largest finite-difference residual of the radial pressureless equations
//   rho_t + (rho u)_r + (n-1) rho u / r = 0,  (rho u)_t + (rho u^2)_r + (n-1) rho u^2 / r = 0
// over a samples x samples grid of the box.
double validate_field(const RadialField& f, int n, const SampleBox& box, double h = 1e-4);

struct SphericalFrontState {
  double t = 0.0;
  double phi = 1.0;
  double e = 0.0;
  double u_delta = 0.0;
};

struct SphericalOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double r_min = -1.0;       // negative selects 1e-3 * phi0 (unused for n = 1)
  double start_step = 1e-8;  // exact local step used when e0 = 0
};

enum class SphericalStop { t_end, r_min, entropy };

struct SphericalTrajectory {
  int n = 3;
  std::vector<SphericalFrontState> states;  // accepted steps
  SphericalStop stop = SphericalStop::t_end;
  double r_min = 0.0;
  SphericalFrontState initial;
  // Exact start-up step from a massless front: on [initial.t, t_start] the
  // front moves at startup_speed and e grows at startup_rate.
  double t_start = 0.0;
  double startup_speed = 0.0;
  double startup_rate = 0.0;
  // Dense output of (phi, m, Q) with m = e phi^(n-1), Q = m phi'. Empty for massless fronts.
  std::shared_ptr<const OdeSolution> ode;
  // Massless front moving with the common side velocity.
  bool massless = false;

  double t_final() const { return states.back().t; }
  SphericalFrontState at(double t) const;
  bool focused() const { return stop == SphericalStop::r_min; }
  bool entropy_violated() const { return stop == SphericalStop::entropy; }
};

// Integrates the front from init.t to t_end. The flux must be one-dimensional
// and is applied to radial components.
SphericalTrajectory integrate_front(const RadialField& inner, const RadialField& outer,
                                    const SphericalFrontState& init, int n, double t_end,
                                    const FluxModel& flux = standard_flux(1), const SphericalOptions& opts = {});

struct SphericalMassSample {
  double t, M, m, total;
};

std::vector<SphericalMassSample> mass_audit_spherical(const SphericalTrajectory& traj, const RadialField& inner,
                                                      const RadialField& outer, int n,
                                                      const std::vector<double>& times);

}  // namespace dshock

#pragma once

// Weak (distributional) form of a delta-shock candidate tested against smooth
// compactly supported functions:
//   int int rho (phi_t + F(U).grad phi) dx dt + int int_{Gamma_t} e dphi/dt dmu dt
//     + int rho^0 phi(x, 0) dx + int_{Gamma_0} e^0 phi(x, 0) dmu = 0
// and the analogous momentum identities, with every density multiplied by U.

#include "dshock/common.hpp"
#include "dshock/geometry.hpp"
#include "dshock/solution.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace dshock {

// phi(x, t) = P(xi, tau) * prod_k beta(xi_k) * beta(tau), with
// xi_k = (x_k - c_k) / h_k, tau = (t - t_c) / h_t, beta(s) = exp(1 - 1/(1 - s^2))
// on |s| < 1 and P = a0 + sum a_k xi_k + a_t tau.
struct TestFunction {
  Vec center, half;
  double t_center = 0.0, t_half = 1.0;
  double a0 = 1.0;
  Vec a;
  double a_t = 0.0;

  double value(const Vec& x, double t) const;
  Vec gradient(const Vec& x, double t) const;
  double time_derivative(const Vec& x, double t) const;

  Vec lo() const { return center - half; }
  Vec hi() const { return center + half; }
  double t_lo() const { return t_center - t_half; }
  double t_hi() const { return t_center + t_half; }
  bool nonnegative() const { return a0 >= 0.0 && a_t == 0.0 && (a.size() == 0 || a.isZero(0.0)); }

  // The same function as a geometry field with analytic derivatives and support box.
  SpaceTimeField field() const;
};

struct BatteryBox {
  Vec lo, hi;
  double t_lo = 0.0, t_hi = 1.0;
};

struct TestFunctionBattery {
  BatteryBox box;
  std::uint64_t seed = 0;
  std::vector<TestFunction> functions;
};

// Deterministic battery: member 0 is a centred nonnegative bump, every third
// member is nonnegative, the rest carry random linear factors. Spatial supports
// lie inside the box; when box.t_lo == 0 supports may straddle t = 0 so the
// initial-data terms are exercised. Throws invalid_battery for t_lo < 0.
TestFunctionBattery make_battery(const BatteryBox& box, int count, std::uint64_t seed);

struct WeakLevel {
  int panels = 0;
  std::vector<double> max_abs;  // per identity: mass, momentum_1..n
};

struct WeakResidual {
  std::vector<WeakLevel> levels;
  std::vector<std::vector<double>> finest;  // [member][identity] at the finest level
  std::vector<double> max_residual;         // per identity at the finest level
  std::vector<double> observed_order;       // per identity, from the finest level pair above the floor (NaN if none)
  double max_all() const;
};

struct WeakOptions {
  int q = 8;            // Gauss points per panel
  int base_panels = 2;  // panels at level 0; doubled at each level
  double floor = 1e-13; // residuals below this do not enter the order estimate
};

// Generic space-time functional of the candidate against one test function,
// split at the front and at the edges of the regular part:
//   sum over time nodes of volume(x, t, w) at regular points and
//   surface(x, t, w) at front points, plus initial_volume / initial_surface at t = 0.
struct FunctionalTerms {
  std::function<void(const Vec&, double, double, Vec&)> volume;
  std::function<void(const Vec&, double, double, Vec&)> surface;
  std::function<void(const Vec&, double, Vec&)> initial_volume;
  std::function<void(const Vec&, double, Vec&)> initial_surface;
};
Vec space_time_functional(const DeltaShockSolution& c, const TestFunction& f, int panels, int q, int components,
                          const FunctionalTerms& terms);

// Mass and momentum identity values for one test function.
Vec identity_values(const DeltaShockSolution& c, const TestFunction& f, int panels, int q = 8);

WeakResidual evaluate_identities(const DeltaShockSolution& c, const TestFunctionBattery& battery, int levels,
                                 const WeakOptions& opts = {});

}  // namespace dshock

#include "dshock/balance.hpp"

#include "dshock/parallel.hpp"
#include "dshock/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace dshock {

namespace {

struct Interval {
  double lo, hi;
};

// Part of a side's support that lies on its own side of the front, or nothing
// when the side carries no mass there.
std::optional<Interval> occupied(const DeltaShockSolution& c, const SideField& side, bool lower, double t) {
  auto [lo, hi] = side.support(t);
  const double s = c.front(t);
  if (lower) hi = std::min(hi, s);
  else lo = std::max(lo, s);
  if (c.geometry == FrontGeometry::sphere) lo = std::max(lo, 0.0);
  if (!(hi > lo)) return std::nullopt;
  if (std::isfinite(lo) && std::isfinite(hi)) return Interval{lo, hi};
  // Unbounded: acceptable only for a vacuum side.
  const double base = std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi : s);
  for (double off : {0.5, 1.0, 10.0, 100.0, 1e4}) {
    const double probe = lower ? (std::isfinite(hi) ? hi - off : base - off) : (std::isfinite(lo) ? lo + off : base + off);
    if (c.geometry == FrontGeometry::sphere && probe < 0.0) continue;
    if (side.rho(probe, t) != 0.0)
      throw Error(Errc::audit_invalid, "solution is not compactly supported; balance laws do not apply");
  }
  return std::nullopt;
}

struct Functionals {
  double M = 0.0, W = 0.0;
  double P_abs = 0.0;  // int rho |U| dx
  Vec P;
};

Functionals regular_part(const DeltaShockSolution& c, double t, const Interval& box, int panels, int q) {
  const bool sphere = c.geometry == FrontGeometry::sphere;
  const int k = sphere ? 1 : c.dim;
  Functionals out;
  out.P = Vec::Zero(k);
  std::vector<double> breaks{c.front(t)};
  for (const auto* side : {&c.below, &c.above}) {
    const auto [a, b] = side->support(t);
    breaks.push_back(a);
    breaks.push_back(b);
  }
  const double s_front = c.front(t);
  const double om = c.omega();
  for (const auto& node : split_panel_rule(box.lo, box.hi, breaks, panels, q)) {
    const SideField& side = node.x < s_front ? c.below : c.above;
    const double rho = side.rho(node.x, t);
    if (rho == 0.0) continue;
    const Vec U = side.U(node.x, t);
    const double w = sphere ? node.w * om * std::pow(node.x, c.dim - 1) : node.w;
    out.M += w * rho;
    out.P += w * rho * U;
    out.P_abs += w * rho * U.norm();
    out.W += 0.5 * w * rho * U.squaredNorm();
  }
  return out;
}

double surface_mass(const DeltaShockSolution& c, double t) {
  const double e = c.e(t);
  const auto quad = c.geometry == FrontGeometry::sphere
                        ? sphere_quadrature(c.dim, c.front(t), Vec::Zero(c.dim), 64)
                        : plane_quadrature(c.nu, c.front(t), Vec::Zero(c.dim - 1), Vec::Ones(c.dim - 1), 1, 1);
  return surface_integral([e](const Vec&) { return e; }, quad);
}

bool sides_differ(const SideStates& s) { return s.rho_minus != s.rho_plus || s.U_minus != s.U_plus; }

}  // namespace

DissipationRate energy_dissipation_rate(const SideStates& s, const FrontState& f) {
  const double um = s.U_minus.dot(f.nu);
  const double up = s.U_plus.dot(f.nu);
  const double tm = (s.U_minus - um * f.nu).squaredNorm();
  const double tp = (s.U_plus - up * f.nu).squaredNorm();
  const double a = um - f.G;
  const double b = f.G - up;
  const double value = 0.5 * (s.rho_minus * tm * a + s.rho_plus * tp * b + s.rho_minus * a * a * a +
                              s.rho_plus * b * b * b);
  return {value, entropy_ok(s, f, true)};
}

BalanceReport audit(const DeltaShockSolution& c, const std::vector<double>& times, const AuditOptions& opts) {
  if (times.empty()) throw Error(Errc::invalid_parameter, "audit needs at least one sample time");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0 || times[i] > c.t_max)
      throw Error(Errc::invalid_parameter, "sample time outside the solution's time range");
    if (i > 0 && !(times[i] > times[i - 1])) throw Error(Errc::invalid_parameter, "sample times must increase strictly");
  }
  const bool sphere = c.geometry == FrontGeometry::sphere;
  BalanceReport r;
  r.name = c.name;
  r.dim = c.dim;
  r.momentum_components = sphere ? 1 : c.dim;
  r.tol_cons = opts.tol_cons.value_or(c.closed_form ? 1e-8 : 1e-6);
  r.tol_mono = opts.tol_mono.value_or(c.closed_form ? 1e-9 : 1e-6);
  r.energy_checked = c.flux.name() == "standard";

  // Support bounding box over all samples.
  double lo = kInf, hi = -kInf;
  for (double t : times) {
    lo = std::min(lo, c.front(t));
    hi = std::max(hi, c.front(t));
    if (auto iv = occupied(c, c.below, true, t)) lo = std::min(lo, iv->lo), hi = std::max(hi, iv->hi);
    if (auto iv = occupied(c, c.above, false, t)) lo = std::min(lo, iv->lo), hi = std::max(hi, iv->hi);
  }
  Interval box;
  if (opts.box) {
    box = {opts.box->first, opts.box->second};
    if (!(box.lo < lo && hi < box.hi))
      throw Error(Errc::audit_invalid, "solution support touches the audit boundary");
  } else {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * opts.box_factor * std::max(hi - lo, 1e-12);
    box = {mid - half, mid + half};
  }
  if (sphere) box.lo = std::max(box.lo, 0.0);
  r.box = {box.lo, box.hi};

  r.samples.resize(times.size());
  parallel_for(times.size(), [&](std::size_t i) {
    const double t = times[i];
    BalanceSample& s = r.samples[i];
    s.t = t;
    const Functionals f = regular_part(c, t, box, opts.panels, opts.q);
    s.M = f.M;
    s.P = f.P;
    s.W = f.W;
    s.m = surface_mass(c, t);
    const double ud = c.front_speed(t);
    s.p = sphere ? Vec::Constant(1, s.m * ud) : Vec(s.m * ud * c.nu);
    s.w = 0.5 * s.m * ud * ud;
    const SideStates st = c.sides(t);
    const FrontState fs = c.front_state(t);
    s.jump = sides_differ(st);
    s.entropy_strict = entropy_ok(st, fs, true);
    s.mdot_analytic = c.front_measure(t) * deficits(c.flux, st, fs).mass;
    if (r.energy_checked) s.dissipation = c.front_measure(t) * energy_dissipation_rate(st, fs).value;
  });

  const std::size_t N = r.samples.size();
  for (std::size_t i = 0; i < N; ++i) {
    auto& s = r.samples[i];
    if (N == 1) {
      s.mdot = s.mdot_analytic;
    } else if (i == 0) {
      s.mdot = (r.samples[1].m - s.m) / (r.samples[1].t - s.t);
    } else if (i + 1 == N) {
      s.mdot = (s.m - r.samples[i - 1].m) / (s.t - r.samples[i - 1].t);
    } else {
      s.mdot = (r.samples[i + 1].m - r.samples[i - 1].m) / (r.samples[i + 1].t - r.samples[i - 1].t);
    }
  }

  const BalanceSample& s0 = r.samples.front();
  const double mass0 = s0.sum_mass();
  const Vec mom0 = s0.sum_momentum();
  const double mom_scale = regular_part(c, s0.t, box, opts.panels, opts.q).P_abs + s0.p.norm();
  const double e0 = std::max(1.0, s0.sum_energy());
  r.min_mdot = kInf;
  bool any_jump = false;
  for (std::size_t i = 0; i < N; ++i) {
    const auto& s = r.samples[i];
    r.mass_drift = std::max(r.mass_drift, std::fabs(s.sum_mass() - mass0) / (mass0 > 0.0 ? mass0 : 1.0));
    const Vec dm = (s.sum_momentum() - mom0).cwiseAbs();
    r.momentum_drift = std::max(r.momentum_drift, dm.maxCoeff() / (mom_scale > 0.0 ? mom_scale : 1.0));
    if (s.jump) {
      any_jump = true;
      r.min_mdot = std::min(r.min_mdot, s.mdot);
      if (!(s.mdot > 0.0)) r.mdot_positive = false;
      if (!s.entropy_strict) r.entropy_ok = false;
      if (s.entropy_strict && !(s.mdot > 0.0)) r.concentration_ok = false;
    }
    if (i > 0 && r.energy_checked) {
      const auto& prev = r.samples[i - 1];
      r.energy_rise = std::max(r.energy_rise, (s.sum_energy() - prev.sum_energy()) / e0);
      r.W_rise = std::max(r.W_rise, (s.W - prev.W) / e0);
    }
  }
  if (!any_jump) r.min_mdot = 0.0;
  r.mass_ok = r.mass_drift <= r.tol_cons;
  r.momentum_ok = r.momentum_drift <= r.tol_cons;
  r.energy_ok = r.energy_rise <= r.tol_mono;
  r.W_ok = r.W_rise <= r.tol_mono;
  if (!r.entropy_ok) r.failures.push_back("entropy condition U+.nu < U_delta.nu < U-.nu violated");
  if (!r.mass_ok) r.failures.push_back("mass balance M + m not conserved");
  if (!r.momentum_ok) r.failures.push_back("momentum balance P + p not conserved");
  if (!r.mdot_positive) r.failures.push_back("concentration: front mass not strictly increasing");
  if (!r.energy_ok) r.failures.push_back("energy W + w increased");
  if (!r.W_ok) r.failures.push_back("regular energy W increased");
  return r;
}

EnergyInequalityReport check_energy_inequality_1d(const DeltaShockSolution& c, const TestFunctionBattery& battery,
                                                  int panels, int q, double tol) {
  if (c.dim != 1 || c.geometry != FrontGeometry::line)
    throw Error(Errc::invalid_dimension, "energy inequality check is one-dimensional");
  if (c.flux.name() != "standard") throw Error(Errc::invalid_parameter, "energy inequality needs the standard flux");
  if (battery.box.t_lo < 0.0) throw Error(Errc::invalid_battery, "battery box reaches into t < 0");
  EnergyInequalityReport r;
  r.tol = tol;
  for (std::size_t i = 0; i < battery.functions.size(); ++i) {
    if (battery.functions[i].nonnegative()) r.members.push_back(i);
  }
  if (r.members.empty()) throw Error(Errc::invalid_battery, "battery has no nonnegative member");
  r.values.resize(r.members.size());
  parallel_for(r.members.size(), [&](std::size_t j) {
    const TestFunction& f = battery.functions[r.members[j]];
    const LevelSetFront ls = c.level_set();
    const SpaceTimeField phi = f.field();
    FunctionalTerms terms;
    terms.volume = [&](const Vec& x, double t, double w, Vec& acc) {
      const double rho = c.rho_at(x, t);
      if (rho == 0.0) return;
      const double u = c.U_at(x, t)[0];
      acc[0] += w * rho * u * u * (f.time_derivative(x, t) + u * f.gradient(x, t)[0]);
    };
    terms.surface = [&](const Vec& x, double t, double w, Vec& acc) {
      const double e = c.e(t);
      if (e == 0.0) return;
      const double ud = c.front_speed(t);
      acc[0] += w * e * ud * ud * delta_derivative_time(phi, ls, x, t);
    };
    terms.initial_volume = [&](const Vec& x, double w, Vec& acc) {
      const double rho = c.rho_at(x, 0.0);
      if (rho == 0.0) return;
      const double u = c.U_at(x, 0.0)[0];
      acc[0] += w * rho * u * u * f.value(x, 0.0);
    };
    terms.initial_surface = [&](const Vec& x, double w, Vec& acc) {
      const double ud = c.front_speed(0.0);
      acc[0] += w * c.e(0.0) * ud * ud * f.value(x, 0.0);
    };
    r.values[j] = space_time_functional(c, f, panels, q, 1, terms)[0];
  });
  r.min_value = *std::min_element(r.values.begin(), r.values.end());
  return r;
}

}  // namespace dshock

#include "dshock/spherical.hpp"

#include "dshock/quadrature.hpp"
#include "dshock/rh.hpp"
#include "dshock/riemann1d.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace dshock {

double unit_sphere_measure(int n) {
  if (n < 1) throw Error(Errc::invalid_dimension, "dimension must be >= 1");
  if (n == 1) return 1.0;
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

RadialField constant_field(double rho, double u, double r_lo, double r_hi, double flux_speed) {
  require_finite(rho, "constant density");
  require_finite(u, "constant velocity");
  if (rho < 0.0) throw Error(Errc::invalid_input, "density must be nonnegative");
  if (!(r_lo < r_hi)) throw Error(Errc::invalid_parameter, "support must be a nonempty interval");
  const double c = std::isnan(flux_speed) ? u : flux_speed;
  RadialField f;
  f.kind = "constant";
  f.support = [=](double t) { return std::make_pair(r_lo + c * t, r_hi + c * t); };
  f.rho = [=](double r, double t) { return (r >= r_lo + c * t && r <= r_hi + c * t) ? rho : 0.0; };
  f.u = [=](double, double) { return u; };
  return f;
}

namespace {

struct FreeFlow {
  int n;
  std::function<double(double)> rho0, u0;
  double lo, hi;
  double t_caustic;

  double du0(double r0) const { return richardson_derivative(u0, r0, 1e-5 * std::max(1.0, hi - lo)); }

  // Foot of the characteristic through (r, t); nullopt outside the image of [lo, hi].
  std::optional<double> foot(double r, double t) const {
    if (t >= t_caustic) throw Error(Errc::caustic, "free-flow characteristics cross at t = " + std::to_string(t_caustic));
    auto X = [&](double r0) { return r0 + t * u0(r0); };
    double a = lo, b = hi;
    const double xa = X(a), xb = X(b);
    if (r < xa || r > xb) return std::nullopt;
    if (r == xa) return a;
    if (r == xb) return b;
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;
      if (X(m) < r) a = m;
      else b = m;
    }
    return 0.5 * (a + b);
  }
};

}  // namespace

RadialField free_flow_field(int n, std::function<double(double)> rho0, std::function<double(double)> u0, double r_lo,
                            double r_hi) {
  if (n < 1) throw Error(Errc::invalid_dimension, "dimension must be >= 1");
  if (!std::isfinite(r_lo) || !std::isfinite(r_hi) || !(r_lo < r_hi))
    throw Error(Errc::invalid_parameter, "free-flow data need a finite support interval");
  if (n >= 2 && r_lo < 0.0) throw Error(Errc::invalid_parameter, "radial support must lie in r >= 0");
  auto ff = std::make_shared<FreeFlow>(FreeFlow{n, std::move(rho0), std::move(u0), r_lo, r_hi, kInf});
  // Earliest crossing of characteristics: 1 + t u0'(r0) = 0.
  constexpr int kGrid = 4096;
  for (int i = 0; i <= kGrid; ++i) {
    const double r0 = r_lo + (r_hi - r_lo) * i / kGrid;
    const double d = ff->du0(r0);
    if (d < 0.0) ff->t_caustic = std::min(ff->t_caustic, -1.0 / d);
  }
  RadialField f;
  f.kind = "free-flow";
  f.support = [ff](double t) {
    return std::make_pair(ff->lo + t * ff->u0(ff->lo), ff->hi + t * ff->u0(ff->hi));
  };
  f.rho = [ff](double r, double t) {
    const auto r0 = ff->foot(r, t);
    if (!r0) return 0.0;
    if (ff->n >= 2 && !(r > 0.0)) throw Error(Errc::invalid_input, "radial field evaluated at r <= 0");
    const double jac = 1.0 + t * ff->du0(*r0);
    if (!(jac > 0.0)) throw Error(Errc::caustic, "free-flow characteristics have crossed");
    return ff->rho0(*r0) * std::pow(*r0 / r, ff->n - 1) / jac;
  };
  f.u = [ff](double r, double t) {
    const auto r0 = ff->foot(r, t);
    if (!r0) return ff->u0(r < ff->lo + t * ff->u0(ff->lo) ? ff->lo : ff->hi);
    return ff->u0(*r0);
  };
  return f;
}

RadialField expression_field(const Expression& rho, const Expression& u, double r_lo, double r_hi) {
  RadialField f;
  f.kind = "expression";
  f.support = [=](double) { return std::make_pair(r_lo, r_hi); };
  f.rho = [=](double r, double t) { return (r >= r_lo && r <= r_hi) ? rho.eval_scalar(r, t) : 0.0; };
  f.u = [=](double r, double t) { return u.eval_scalar(r, t); };
  return f;
}

double validate_field(const RadialField& f, int n, const SampleBox& box, double h) {
  if (box.samples < 1) throw Error(Errc::invalid_parameter, "sample count must be >= 1");
  double worst = 0.0;
  for (int i = 0; i < box.samples; ++i) {
    const double r = box.r_lo + (box.r_hi - box.r_lo) * (i + 0.5) / box.samples;
    for (int j = 0; j < box.samples; ++j) {
      const double t = box.t_lo + (box.t_hi - box.t_lo) * (j + 0.5) / box.samples;
      auto rho = [&](double rr, double tt) { return f.rho(rr, tt); };
      auto mom = [&](double rr, double tt) { return f.rho(rr, tt) * f.u(rr, tt); };
      auto mom_flux = [&](double rr, double tt) {
        const double u = f.u(rr, tt);
        return f.rho(rr, tt) * u * u;
      };
      const double geo = (n - 1) / r;
      const double mass_res = richardson_derivative([&](double s) { return rho(r, s); }, t, h) +
                              richardson_derivative([&](double s) { return mom(s, t); }, r, h) + geo * mom(r, t);
      const double mom_res = richardson_derivative([&](double s) { return mom(r, s); }, t, h) +
                             richardson_derivative([&](double s) { return mom_flux(s, t); }, r, h) +
                             geo * mom_flux(r, t);
      worst = std::max({worst, std::fabs(mass_res), std::fabs(mom_res)});
    }
  }
  return worst;
}

SphericalFrontState SphericalTrajectory::at(double t) const {
  if (t <= initial.t) return initial;
  if (t >= t_final()) return states.back();
  if (t <= t_start) {
    const double dt = t - initial.t;
    return {t, initial.phi + startup_speed * dt, startup_rate * dt, startup_speed};
  }
  const Vec y = ode->at(t);
  if (massless) return {t, y[0], 0.0, initial.u_delta};
  const double w = std::pow(y[0], n - 1);
  return {t, y[0], y[1] / w, y[2] / y[1]};
}

namespace {

SideStates radial_sides(const RadialField& inner, const RadialField& outer, double phi, double t) {
  return {outer.rho(phi, t), inner.rho(phi, t), Vec::Constant(1, outer.u(phi, t)),
          Vec::Constant(1, inner.u(phi, t))};
}

}  // namespace

SphericalTrajectory integrate_front(const RadialField& inner, const RadialField& outer,
                                    const SphericalFrontState& init, int n, double t_end, const FluxModel& flux,
                                    const SphericalOptions& opts) {
  if (n < 1) throw Error(Errc::invalid_dimension, "dimension must be >= 1");
  if (flux.dim() != 1) throw Error(Errc::dimension_mismatch, "radial integration needs a one-dimensional flux");
  for (double v : {init.t, init.phi, init.e, init.u_delta, t_end}) require_finite(v, "spherical front data");
  if (init.e < 0.0) throw Error(Errc::invalid_input, "surface density must be nonnegative");
  if (!(t_end >= init.t)) throw Error(Errc::invalid_parameter, "t_end must not precede the initial time");

  SphericalTrajectory traj;
  traj.n = n;
  traj.initial = init;
  traj.t_start = init.t;
  traj.r_min = n == 1 ? -kInf : (opts.r_min < 0.0 ? 1e-3 * init.phi : opts.r_min);
  if (n >= 2 && !(init.phi > traj.r_min)) throw Error(Errc::invalid_input, "initial radius must exceed r_min");
  traj.states.push_back(init);

  OdeOptions ode_opts;
  ode_opts.rtol = opts.rtol;
  ode_opts.atol = opts.atol;
  std::vector<OdeEvent> events;
  if (n >= 2) {
    const double r_min = traj.r_min;
    events.push_back([r_min](double, const Vec& y) { return y[0] - r_min; });
  }
  auto finish = [&](const OdeSolution& sol, int entropy_event) {
    traj.ode = std::make_shared<const OdeSolution>(sol);
    for (std::size_t k = 1; k < sol.t.size(); ++k) {
      const Vec& y = sol.y[k];
      if (traj.massless) {
        traj.states.push_back({sol.t[k], y[0], 0.0, init.u_delta});
      } else {
        const double w = std::pow(y[0], n - 1);
        traj.states.push_back({sol.t[k], y[0], y[1] / w, y[2] / y[1]});
      }
    }
    if (sol.event >= 0) traj.stop = sol.event == entropy_event ? SphericalStop::entropy : SphericalStop::r_min;
  };

  double t0 = init.t;
  Vec y0(3);
  const SideStates s0 = radial_sides(inner, outer, init.phi, init.t);
  if (init.e == 0.0) {
    const double ui = s0.U_plus[0], uo = s0.U_minus[0];
    if (std::fabs(ui - uo) <= 1e-14 * (1.0 + std::fabs(ui))) {
      // No velocity jump: the front is a massless material surface.
      traj.massless = true;
      traj.initial.u_delta = ui;
      auto rhs = [&](double t, const Vec& y) { return Vec::Constant(1, outer.u(y[0], t)); };
      finish(integrate_dopri5(rhs, t0, Vec::Constant(1, init.phi), t_end, ode_opts, events), -1);
      return traj;
    }
    // Exact start-up step with the local constant-state delta shock
    // (inner field on the left, outer field on the right).
    RiemannData1D local;
    local.rho_l = s0.rho_plus;
    local.rho_r = s0.rho_minus;
    local.u_l = ui;
    local.u_r = uo;
    local.flux = flux;
    const RHQuadratic q = rh_quadratic(local);
    const double u = delta_shock_speed(local);
    const double rate = q.a - q.b * u;
    const double tau = std::min(opts.start_step, t_end - t0);
    traj.initial.u_delta = u;
    traj.startup_speed = u;
    traj.startup_rate = rate;
    traj.t_start = t0 + tau;
    const double phi = init.phi + u * tau;
    const double e = rate * tau;
    traj.states.push_back({t0 + tau, phi, e, u});
    t0 += tau;
    const double m = e * std::pow(phi, n - 1);
    y0 << phi, m, m * u;
  } else {
    const double m = init.e * std::pow(init.phi, n - 1);
    y0 << init.phi, m, m * init.u_delta;
    const FrontState f(init.e, Vec::Constant(1, -1.0), -init.u_delta);
    if (!entropy_ok(s0, f, true)) {
      traj.stop = SphericalStop::entropy;
      return traj;
    }
  }
  if (t0 >= t_end) return traj;

  auto rhs = [&](double t, const Vec& y) {
    const double phi = y[0], m = y[1], Q = y[2];
    // A trial stage past the origin is rejected by the step-size control.
    if (n >= 2 && !(phi > 0.0)) return Vec(Vec::Constant(3, std::numeric_limits<double>::quiet_NaN()));
    const double ud = Q / m;
    const double w = std::pow(phi, n - 1);
    const SideStates s = radial_sides(inner, outer, phi, t);
    const FrontState f(m / w, Vec::Constant(1, -1.0), -ud);
    const RHDeficit def = deficits(flux, s, f);
    Vec dy(3);
    dy << ud, w * def.mass, w * def.momentum[0];
    return dy;
  };
  events.push_back([&](double t, const Vec& y) {
    const double ud = y[2] / y[1];
    return std::min(ud - outer.u(y[0], t), inner.u(y[0], t) - ud);
  });
  const int entropy_event = static_cast<int>(events.size()) - 1;
  finish(integrate_dopri5(rhs, t0, y0, t_end, ode_opts, events), entropy_event);
  return traj;
}

std::vector<SphericalMassSample> mass_audit_spherical(const SphericalTrajectory& traj, const RadialField& inner,
                                                      const RadialField& outer, int n,
                                                      const std::vector<double>& times) {
  const double omega = unit_sphere_measure(n);
  auto shell = [&](const RadialField& f, double a, double b, double t) {
    if (!(b > a)) return 0.0;
    if (!std::isfinite(a) || !std::isfinite(b))
      throw Error(Errc::audit_invalid, "field support is unbounded; mass is not finite");
    return integrate([&](double r) { return f.rho(r, t) * std::pow(r, n - 1); }, a, b, 16, 16);
  };
  std::vector<SphericalMassSample> out;
  for (double t : times) {
    const SphericalFrontState s = traj.at(t);
    const auto [ilo, ihi] = inner.support(t);
    const auto [olo, ohi] = outer.support(t);
    const double lower = n >= 2 ? std::max(0.0, ilo) : ilo;
    double M = 0.0;
    if (inner.rho(s.phi, t) != 0.0 || std::isfinite(lower)) M += shell(inner, lower, std::min(s.phi, ihi), t);
    if (outer.rho(s.phi, t) != 0.0 || std::isfinite(ohi)) M += shell(outer, std::max(s.phi, olo), ohi, t);
    M *= omega;
    const double m = omega * s.e * std::pow(s.phi, n - 1);
    out.push_back({t, M, m, M + m});
  }
  return out;
}

}  // namespace dshock

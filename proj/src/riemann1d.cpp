#include "dshock/riemann1d.hpp"

#include "dshock/ode.hpp"

#include <cmath>
#include <memory>
#include <vector>

namespace dshock {

void RiemannData1D::validate() const {
  if (flux.dim() != 1) throw Error(Errc::invalid_dimension, "Riemann data need a one-dimensional flux");
  for (double v : {rho_l, rho_r, u_l, u_r, e0}) require_finite(v, "Riemann data");
  if (rho_l < 0.0 || rho_r < 0.0) throw Error(Errc::invalid_input, "densities must be nonnegative");
  if (e0 < 0.0) throw Error(Errc::invalid_input, "initial point mass must be nonnegative");
  if (e0 > 0.0 && !u_delta0) throw Error(Errc::invalid_input, "a point mass needs an initial velocity u_delta0");
  if (u_delta0) require_finite(*u_delta0, "u_delta0");
}

SideStates RiemannData1D::sides() const {
  return {rho_l, rho_r, Vec::Constant(1, u_l), Vec::Constant(1, u_r)};
}

RHQuadratic rh_quadratic(const RiemannData1D& d) {
  d.validate();
  return {d.rho_l * d.flux.F1(d.u_l) - d.rho_r * d.flux.F1(d.u_r), d.rho_l - d.rho_r,
          d.rho_l * d.flux.N1(d.u_l) - d.rho_r * d.flux.N1(d.u_r), d.rho_l * d.u_l - d.rho_r * d.u_r};
}

double delta_shock_speed(const RiemannData1D& d) {
  const RHQuadratic q = rh_quadratic(d);
  const double A = q.b, B = -(q.a + q.d), C = q.c;
  const double scale = std::max({std::fabs(A), std::fabs(B), std::fabs(C), 1e-300});
  std::vector<double> roots;
  if (std::fabs(A) <= 1e-14 * scale) {
    if (std::fabs(B) <= 1e-14 * scale)
      throw Error(Errc::no_delta_shock, "degenerate RH equation: no jump in density or mass flux");
    roots.push_back(-C / B);
  } else {
    double disc = B * B - 4.0 * A * C;
    if (disc < -1e-12 * B * B) throw Error(Errc::no_delta_shock, "RH quadratic has no real root");
    disc = std::max(disc, 0.0);
    const double s = -0.5 * (B + std::copysign(std::sqrt(disc), B));
    roots.push_back(s / A);
    const double other = s != 0.0 ? C / s : 0.0;
    if (other != roots.front()) roots.push_back(other);
  }
  const double tol = 1e-12 * std::max({1.0, std::fabs(d.u_l), std::fabs(d.u_r)});
  int strict = 0, loose = 0;
  double chosen = 0.0;
  for (double u : roots) {
    if (d.u_r < u && u < d.u_l) {
      ++strict;
      chosen = u;
    }
    if (d.u_r - tol <= u && u <= d.u_l + tol) ++loose;
  }
  if (strict == 0)
    throw Error(Errc::no_delta_shock, "no RH root satisfies the entropy condition u_r < u_delta < u_l");
  if (loose > 1) throw Error(Errc::ambiguous_root, "both RH roots satisfy the entropy condition");
  return chosen;
}

bool classical_shock_feasible(const RiemannData1D& d) {
  const double du = d.u_l - d.u_r;
  return std::fabs(d.rho_l * d.rho_r * du * du) <= 1e-14;
}

DeltaShockPath1D solve_constant_states(const RiemannData1D& d, double horizon) {
  const RHQuadratic q = rh_quadratic(d);
  const double u = delta_shock_speed(d);
  DeltaShockPath1D p;
  p.u_asymptotic = u;

  if (d.e0 == 0.0) {
    const double rate = q.a - q.b * u;
    p.kind = "constant";
    p.phi = [u](double t) { return u * t; };
    p.u_delta = [u](double) { return u; };
    p.e = [rate](double t) { return rate * t; };
    p.e_dot = [rate](double) { return rate; };
    p.momentum_dot = [rate, u](double) { return rate * u; };
    return p;
  }

  const double e0 = d.e0, q0 = d.e0 * *d.u_delta0;
  const double a = q.a, b = q.b, c = q.c, dd = q.d;

  if (d.flux.name() == "standard") {
    // a == d here, which makes e^2 an explicit quadratic in t.
    auto radicand = [=](double t) { return (e0 + a * t) * (e0 + a * t) - 2.0 * b * (q0 * t + 0.5 * c * t * t); };
    auto e = [=](double t) { return std::sqrt(std::max(0.0, radicand(t))); };
    auto phi = [=](double t) {
      const double P = e0 + a * t;
      return 2.0 * (q0 * t + 0.5 * c * t * t) / (P + e(t));
    };
    auto ud = [=](double t) { return (q0 + c * t - dd * phi(t)) / e(t); };
    // radicand = e0^2 + 2 (a e0 - b q0) t + (a^2 - b c) t^2; find its first positive root.
    const double A = a * a - b * c, B = 2.0 * (a * e0 - b * q0), C = e0 * e0;
    double t_max = std::numeric_limits<double>::infinity();
    if (std::fabs(A) < 1e-300) {
      if (B < 0.0) t_max = -C / B;
    } else {
      const double disc = B * B - 4.0 * A * C;
      if (disc >= 0.0) {
        const double s = -0.5 * (B + std::copysign(std::sqrt(disc), B));
        for (double r : {s / A, s != 0.0 ? C / s : -1.0}) {
          if (r > 0.0) t_max = std::min(t_max, r);
        }
      }
    }
    p.kind = "accretion";
    p.phi = phi;
    p.e = e;
    p.u_delta = ud;
    p.e_dot = [=](double t) { return (a * (e0 + a * t) - b * q0 - b * c * t) / e(t); };
    p.momentum_dot = [=](double t) { return c - dd * ud(t); };
    p.t_max = t_max;
    return p;
  }

  // General flux: phi' = (q0 + c t - d phi) / (e0 + a t - b phi).
  auto rhs = [=](double t, const Vec& y) {
    Vec out(1);
    out[0] = (q0 + c * t - dd * y[0]) / (e0 + a * t - b * y[0]);
    return out;
  };
  auto mass = [=](double t, const Vec& y) { return e0 + a * t - b * y[0]; };
  OdeOptions opts;
  opts.rtol = 1e-12;
  opts.atol = 1e-14;
  auto sol = std::make_shared<OdeSolution>(integrate_dopri5(rhs, 0.0, Vec::Zero(1), horizon, opts, {mass}));
  auto phi = [sol](double t) { return sol->at(t)[0]; };
  auto e = [=](double t) { return e0 + a * t - b * phi(t); };
  auto ud = [=](double t) { return (q0 + c * t - dd * phi(t)) / e(t); };
  p.kind = "integrated";
  p.phi = phi;
  p.e = e;
  p.u_delta = ud;
  p.e_dot = [=](double t) { return a - b * ud(t); };
  p.momentum_dot = [=](double t) { return c - dd * ud(t); };
  p.t_max = sol->t_final();
  return p;
}

PointEvaluation evaluate_solution(const DeltaShockPath1D& path, const RiemannData1D& d, double x, double t) {
  if (!(t >= 0.0)) throw Error(Errc::invalid_parameter, "time must be nonnegative");
  const double front = path.phi(t);
  PointEvaluation out{};
  if (x <= front) {
    out.rho = d.rho_l;
    out.u = d.u_l;
  } else {
    out.rho = d.rho_r;
    out.u = d.u_r;
  }
  out.atom = PointAtom{front, path.e(t)};
  return out;
}

}  // namespace dshock

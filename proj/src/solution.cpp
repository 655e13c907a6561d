#include "dshock/solution.hpp"

#include <cmath>

namespace dshock {

const char* to_string(FrontGeometry g) {
  switch (g) {
    case FrontGeometry::line: return "line";
    case FrontGeometry::plane: return "plane";
    case FrontGeometry::sphere: return "sphere";
  }
  return "unknown";
}

SideStates DeltaShockSolution::sides(double t) const {
  const double s = front(t);
  if (geometry == FrontGeometry::sphere) return {above.rho(s, t), below.rho(s, t), above.U(s, t), below.U(s, t)};
  return {below.rho(s, t), above.rho(s, t), below.U(s, t), above.U(s, t)};
}

FrontState DeltaShockSolution::front_state(double t) const {
  if (geometry == FrontGeometry::sphere) {
    const double phi = front(t);
    return FrontState(e(t), Vec::Constant(1, -1.0), -front_speed(t), (dim - 1) / (2.0 * phi));
  }
  return FrontState(e(t), nu, front_speed(t), 0.0);
}

double DeltaShockSolution::omega() const {
  return geometry == FrontGeometry::sphere ? unit_sphere_measure(dim) : 1.0;
}

double DeltaShockSolution::front_measure(double t) const {
  return geometry == FrontGeometry::sphere ? omega() * std::pow(front(t), dim - 1) : 1.0;
}

double DeltaShockSolution::coordinate(const Vec& x) const {
  return geometry == FrontGeometry::sphere ? x.norm() : nu.dot(x);
}

double DeltaShockSolution::rho_at(const Vec& x, double t) const {
  const double s = coordinate(x);
  return s < front(t) ? below.rho(s, t) : above.rho(s, t);
}

Vec DeltaShockSolution::U_at(const Vec& x, double t) const {
  const double s = coordinate(x);
  const SideField& f = s < front(t) ? below : above;
  if (geometry == FrontGeometry::sphere) {
    if (!(s > 0.0)) return Vec::Zero(x.size());
    return f.U(s, t)[0] * x / s;
  }
  return f.U(s, t);
}

LevelSetFront DeltaShockSolution::level_set() const {
  if (geometry == FrontGeometry::sphere) return inward_sphere_front(Vec::Zero(dim), front, front_speed);
  return plane_front(nu, front, front_speed);
}

namespace {

// Block of constant state whose trailing edge (away from the front) moves with the mass-flux speed.
SideField lower_block(double rho, const Vec& U, double edge0, double speed) {
  SideField f;
  f.rho = [=](double s, double t) { return s >= edge0 + speed * t ? rho : 0.0; };
  f.U = [=](double, double) { return U; };
  f.support = [=](double t) { return std::make_pair(edge0 + speed * t, kInf); };
  return f;
}

SideField upper_block(double rho, const Vec& U, double edge0, double speed) {
  SideField f;
  f.rho = [=](double s, double t) { return s <= edge0 + speed * t ? rho : 0.0; };
  f.U = [=](double, double) { return U; };
  f.support = [=](double t) { return std::make_pair(-kInf, edge0 + speed * t); };
  return f;
}

}  // namespace

DeltaShockSolution riemann_solution(const RiemannData1D& d, const DeltaShockPath1D& path, double L) {
  d.validate();
  if (!(L > 0.0)) throw Error(Errc::invalid_parameter, "half-width L must be positive");
  DeltaShockSolution s;
  s.name = "riemann";
  s.geometry = FrontGeometry::line;
  s.dim = 1;
  s.flux = d.flux;
  s.nu = Vec::Constant(1, 1.0);
  s.below = lower_block(d.rho_l, Vec::Constant(1, d.u_l), -L, d.flux.F1(d.u_l));
  s.above = upper_block(d.rho_r, Vec::Constant(1, d.u_r), L, d.flux.F1(d.u_r));
  s.front = path.phi;
  s.front_speed = path.u_delta;
  s.e = path.e;
  s.t_max = path.t_max;
  s.closed_form = path.kind != "integrated";
  return s;
}

DeltaShockSolution riemann_candidate(const RiemannData1D& d, double L, double speed, double e0, double rate,
                                     double x0) {
  d.validate();
  if (!(L > 0.0)) throw Error(Errc::invalid_parameter, "half-width L must be positive");
  if (e0 < 0.0) throw Error(Errc::invalid_input, "surface density must be nonnegative");
  DeltaShockSolution s;
  s.name = "candidate";
  s.geometry = FrontGeometry::line;
  s.dim = 1;
  s.flux = d.flux;
  s.nu = Vec::Constant(1, 1.0);
  s.below = lower_block(d.rho_l, Vec::Constant(1, d.u_l), -L, d.flux.F1(d.u_l));
  s.above = upper_block(d.rho_r, Vec::Constant(1, d.u_r), L, d.flux.F1(d.u_r));
  s.front = [=](double t) { return x0 + speed * t; };
  s.front_speed = [=](double) { return speed; };
  s.e = [=](double t) { return e0 + rate * t; };
  s.t_max = rate < 0.0 ? e0 / -rate : kInf;
  return s;
}

DeltaShockSolution planar_solution(const Vec& nu, double rho_minus, const Vec& U_minus, double rho_plus,
                                   const Vec& U_plus, const DeltaShockPath1D& path, double L,
                                   const FluxModel& flux) {
  const int n = static_cast<int>(nu.size());
  if (U_minus.size() != n || U_plus.size() != n || flux.dim() != n)
    throw Error(Errc::dimension_mismatch, "planar data differ in dimension");
  if (std::fabs(nu.norm() - 1.0) > 1e-12) throw Error(Errc::invalid_input, "plane normal must have unit length");
  if (!(L > 0.0)) throw Error(Errc::invalid_parameter, "half-width L must be positive");
  DeltaShockSolution s;
  s.name = "planar";
  s.geometry = n == 1 ? FrontGeometry::line : FrontGeometry::plane;
  s.dim = n;
  s.flux = flux;
  s.nu = nu;
  s.below = lower_block(rho_minus, U_minus, -L, flux.F(U_minus).dot(nu));
  s.above = upper_block(rho_plus, U_plus, L, flux.F(U_plus).dot(nu));
  s.front = path.phi;
  s.front_speed = path.u_delta;
  s.e = path.e;
  s.t_max = path.t_max;
  s.closed_form = path.kind != "integrated";
  return s;
}

DeltaShockSolution planar_solution(const Vec& nu, double rho_minus, const Vec& U_minus, double rho_plus,
                                   const Vec& U_plus, const DeltaShockPath1D& path, double L) {
  return planar_solution(nu, rho_minus, U_minus, rho_plus, U_plus, path, L, standard_flux(static_cast<int>(nu.size())));
}

DeltaShockSolution spherical_solution(const SphericalTrajectory& traj, const RadialField& inner,
                                      const RadialField& outer, int n, const FluxModel& flux) {
  DeltaShockSolution s;
  s.name = "spherical";
  s.geometry = n == 1 ? FrontGeometry::line : FrontGeometry::sphere;
  s.dim = n;
  s.flux = flux;
  // n = 1 is an ordinary line front with the inner field below it.
  s.nu = Vec::Constant(1, 1.0);
  auto side = [n](const RadialField& f) {
    SideField out;
    out.rho = f.rho;
    out.U = [u = f.u](double r, double t) { return Vec::Constant(1, u(r, t)); };
    out.support = [n, sup = f.support](double t) {
      auto [lo, hi] = sup(t);
      if (n >= 2) lo = std::max(lo, 0.0);
      return std::make_pair(lo, hi);
    };
    return out;
  };
  s.below = side(inner);
  s.above = side(outer);
  auto shared = std::make_shared<SphericalTrajectory>(traj);
  s.front = [shared](double t) { return shared->at(t).phi; };
  s.front_speed = [shared](double t) { return shared->at(t).u_delta; };
  s.e = [shared](double t) { return shared->at(t).e; };
  s.t_max = traj.t_final();
  s.closed_form = false;
  return s;
}

}  // namespace dshock

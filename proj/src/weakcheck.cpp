#include "dshock/weakcheck.hpp"

#include "dshock/parallel.hpp"
#include "dshock/quadrature.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace dshock {

namespace {

double beta(double s) { return std::fabs(s) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0; }

double beta_prime(double s) {
  if (std::fabs(s) >= 1.0) return 0.0;
  const double d = 1.0 - s * s;
  return beta(s) * (-2.0 * s / (d * d));
}

double unit_double(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

}  // namespace

double TestFunction::value(const Vec& x, double t) const {
  const double tau = (t - t_center) / t_half;
  double b = beta(tau);
  if (b == 0.0) return 0.0;
  double p = a0 + a_t * tau;
  for (int k = 0; k < x.size(); ++k) {
    const double xi = (x[k] - center[k]) / half[k];
    b *= beta(xi);
    if (b == 0.0) return 0.0;
    p += a[k] * xi;
  }
  return p * b;
}

Vec TestFunction::gradient(const Vec& x, double t) const {
  const int n = static_cast<int>(x.size());
  Vec g = Vec::Zero(n);
  const double tau = (t - t_center) / t_half;
  const double bt = beta(tau);
  if (bt == 0.0) return g;
  Vec xi(n), b(n), db(n);
  double p = a0 + a_t * tau;
  for (int k = 0; k < n; ++k) {
    xi[k] = (x[k] - center[k]) / half[k];
    b[k] = beta(xi[k]);
    if (b[k] == 0.0) return g;
    db[k] = beta_prime(xi[k]);
    p += a[k] * xi[k];
  }
  const double B = b.prod() * bt;
  for (int k = 0; k < n; ++k) {
    double others = bt;
    for (int j = 0; j < n; ++j) {
      if (j != k) others *= b[j];
    }
    g[k] = (a[k] * B + p * others * db[k]) / half[k];
  }
  return g;
}

double TestFunction::time_derivative(const Vec& x, double t) const {
  const double tau = (t - t_center) / t_half;
  const double bt = beta(tau);
  if (bt == 0.0) return 0.0;
  double bx = 1.0, p = a0 + a_t * tau;
  for (int k = 0; k < x.size(); ++k) {
    const double xi = (x[k] - center[k]) / half[k];
    bx *= beta(xi);
    if (bx == 0.0) return 0.0;
    p += a[k] * xi;
  }
  return (a_t * bx * bt + p * bx * beta_prime(tau)) / t_half;
}

SpaceTimeField TestFunction::field() const {
  SpaceTimeField f;
  const TestFunction self = *this;
  f.value = [self](const Vec& x, double t) { return self.value(x, t); };
  f.gradient = [self](const Vec& x, double t) { return self.gradient(x, t); };
  f.time_derivative = [self](const Vec& x, double t) { return self.time_derivative(x, t); };
  f.support_lo = lo();
  f.support_hi = hi();
  f.support_t_lo = t_lo();
  f.support_t_hi = t_hi();
  return f;
}

TestFunctionBattery make_battery(const BatteryBox& box, int count, std::uint64_t seed) {
  if (count < 1) throw Error(Errc::invalid_parameter, "battery needs at least one function");
  if (box.lo.size() == 0 || box.lo.size() != box.hi.size())
    throw Error(Errc::dimension_mismatch, "battery box corners differ in dimension");
  if (box.t_lo < 0.0) throw Error(Errc::invalid_battery, "battery box reaches into t < 0");
  if (!(box.t_hi > box.t_lo) || !((box.hi - box.lo).minCoeff() > 0.0))
    throw Error(Errc::invalid_parameter, "battery box must have positive extent");
  const int n = static_cast<int>(box.lo.size());
  const Vec ext = box.hi - box.lo;
  const double T = box.t_hi - box.t_lo;
  const bool at_origin = box.t_lo == 0.0;

  TestFunctionBattery b;
  b.box = box;
  b.seed = seed;
  std::mt19937_64 gen(seed);
  for (int i = 0; i < count; ++i) {
    TestFunction f;
    f.a = Vec::Zero(n);
    if (i == 0) {
      f.center = 0.5 * (box.lo + box.hi);
      f.half = 0.45 * ext;
      f.t_center = at_origin ? 0.4 * T : box.t_lo + 0.5 * T;
      f.t_half = at_origin ? 0.55 * T : 0.45 * T;
    } else {
      f.center.resize(n);
      f.half.resize(n);
      for (int k = 0; k < n; ++k) {
        f.half[k] = ext[k] * (0.15 + 0.3 * unit_double(gen));
        f.center[k] = box.lo[k] + f.half[k] + (ext[k] - 2.0 * f.half[k]) * unit_double(gen);
      }
      f.t_half = T * (0.15 + 0.3 * unit_double(gen));
      const double first = at_origin ? -0.5 * f.t_half : box.t_lo + f.t_half;
      const double last = box.t_hi - f.t_half;
      f.t_center = first + (last - first) * unit_double(gen);
      if (i % 3 != 0) {
        f.a0 = 2.0 * unit_double(gen) - 1.0;
        for (int k = 0; k < n; ++k) f.a[k] = 2.0 * unit_double(gen) - 1.0;
        f.a_t = 2.0 * unit_double(gen) - 1.0;
      }
    }
    b.functions.push_back(f);
  }
  return b;
}

double WeakResidual::max_all() const {
  double m = 0.0;
  for (double v : max_residual) m = std::max(m, v);
  return m;
}

namespace {

// Regular-part quadrature nodes at time t, split at the front and the support edges.
void volume_nodes(const DeltaShockSolution& c, const TestFunction& f, double t, int panels, int q,
                  const std::function<void(const Vec&, double)>& emit) {
  const Vec lo = f.lo(), hi = f.hi();
  std::vector<double> breaks{c.front(t)};
  for (const auto* side : {&c.below, &c.above}) {
    const auto [a, b] = side->support(t);
    if (std::isfinite(a)) breaks.push_back(a);
    if (std::isfinite(b)) breaks.push_back(b);
  }
  if (c.geometry == FrontGeometry::sphere) {
    double r_lo = 0.0, r_hi = 0.0;
    for (int k = 0; k < lo.size(); ++k) {
      const double near = std::max({0.0, lo[k], -hi[k]});
      r_lo += near * near;
      const double far = std::max(std::fabs(lo[k]), std::fabs(hi[k]));
      r_hi += far * far;
    }
    const int res = q * panels;
    for (const auto& rn : split_panel_rule(std::sqrt(r_lo), std::sqrt(r_hi), breaks, panels, q)) {
      const auto shell = sphere_quadrature(c.dim, rn.x, Vec::Zero(c.dim), res);
      for (std::size_t i = 0; i < shell.nodes.size(); ++i) emit(shell.nodes[i], rn.w * shell.weights[i]);
    }
    return;
  }
  const int n = c.dim;
  double s_lo = 0.0, s_hi = 0.0;
  for (int k = 0; k < n; ++k) {
    s_lo += std::min(c.nu[k] * lo[k], c.nu[k] * hi[k]);
    s_hi += std::max(c.nu[k] * lo[k], c.nu[k] * hi[k]);
  }
  Vec y_lo(n - 1), y_hi(n - 1);
  if (n > 1) {
    const Mat T = tangent_basis(c.nu);
    for (int j = 0; j < n - 1; ++j) {
      y_lo[j] = y_hi[j] = 0.0;
      for (int k = 0; k < n; ++k) {
        y_lo[j] += std::min(T(k, j) * lo[k], T(k, j) * hi[k]);
        y_hi[j] += std::max(T(k, j) * lo[k], T(k, j) * hi[k]);
      }
    }
  }
  for (const auto& sn : split_panel_rule(s_lo, s_hi, breaks, panels, q)) {
    const auto slab = plane_quadrature(c.nu, sn.x, y_lo, y_hi, panels, q);
    for (std::size_t i = 0; i < slab.nodes.size(); ++i) emit(slab.nodes[i], sn.w * slab.weights[i]);
  }
}

void surface_nodes(const DeltaShockSolution& c, const TestFunction& f, double t, int panels, int q,
                   const std::function<void(const Vec&, double)>& emit) {
  const double s = c.front(t);
  if (c.geometry == FrontGeometry::sphere) {
    const auto quad = sphere_quadrature(c.dim, s, Vec::Zero(c.dim), q * panels);
    for (std::size_t i = 0; i < quad.nodes.size(); ++i) emit(quad.nodes[i], quad.weights[i]);
    return;
  }
  const int n = c.dim;
  const Vec lo = f.lo(), hi = f.hi();
  Vec y_lo(n - 1), y_hi(n - 1);
  if (n > 1) {
    const Mat T = tangent_basis(c.nu);
    for (int j = 0; j < n - 1; ++j) {
      y_lo[j] = y_hi[j] = 0.0;
      for (int k = 0; k < n; ++k) {
        y_lo[j] += std::min(T(k, j) * lo[k], T(k, j) * hi[k]);
        y_hi[j] += std::max(T(k, j) * lo[k], T(k, j) * hi[k]);
      }
    }
  }
  const auto quad = plane_quadrature(c.nu, s, y_lo, y_hi, panels, q);
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) emit(quad.nodes[i], quad.weights[i]);
}

bool inside(const TestFunction& f, const Vec& x) {
  for (int k = 0; k < x.size(); ++k) {
    if (std::fabs(x[k] - f.center[k]) >= f.half[k]) return false;
  }
  return true;
}

}  // namespace

Vec space_time_functional(const DeltaShockSolution& c, const TestFunction& f, int panels, int q, int components,
                          const FunctionalTerms& terms) {
  if (f.center.size() != c.dim) throw Error(Errc::dimension_mismatch, "test function and candidate differ in dimension");
  Vec acc = Vec::Zero(components);
  const double t_a = std::max(0.0, f.t_lo());
  const double t_b = f.t_hi();
  if (t_b > c.t_max + 1e-12)
    throw Error(Errc::invalid_battery, "test function support extends beyond the candidate's time horizon");
  for (const auto& tn : panel_rule(t_a, t_b, panels, q)) {
    volume_nodes(c, f, tn.x, panels, q, [&](const Vec& x, double w) {
      if (inside(f, x)) terms.volume(x, tn.x, tn.w * w, acc);
    });
    surface_nodes(c, f, tn.x, panels, q, [&](const Vec& x, double w) {
      if (inside(f, x)) terms.surface(x, tn.x, tn.w * w, acc);
    });
  }
  if (f.t_lo() < 0.0 && f.t_hi() > 0.0) {
    volume_nodes(c, f, 0.0, panels, q, [&](const Vec& x, double w) {
      if (inside(f, x)) terms.initial_volume(x, w, acc);
    });
    surface_nodes(c, f, 0.0, panels, q, [&](const Vec& x, double w) {
      if (inside(f, x)) terms.initial_surface(x, w, acc);
    });
  }
  return acc;
}

Vec identity_values(const DeltaShockSolution& c, const TestFunction& f, int panels, int q) {
  const int n = c.dim;
  const bool sphere = c.geometry == FrontGeometry::sphere;
  const LevelSetFront ls = c.level_set();
  const SpaceTimeField phi = f.field();

  // rho * (F(U), N(U)) contracted with grad phi, in Cartesian form.
  auto fluxes = [&](const Vec& x, double t, const Vec& g, Vec& U, double& Fg, Vec& Ng) {
    if (sphere) {
      const double r = x.norm();
      const double u = (r < c.front(t) ? c.below : c.above).U(r, t)[0];
      const Vec xhat = x / r;
      const double gr = xhat.dot(g);
      U = u * xhat;
      Fg = c.flux.F1(u) * gr;
      Ng = c.flux.N1(u) * gr * xhat;
    } else {
      U = c.U_at(x, t);
      Fg = c.flux.F(U).dot(g);
      Ng = c.flux.N(U) * g;
    }
  };

  FunctionalTerms terms;
  terms.volume = [&](const Vec& x, double t, double w, Vec& acc) {
    const double rho = c.rho_at(x, t);
    if (rho == 0.0) return;
    const double pt = f.time_derivative(x, t);
    const Vec g = f.gradient(x, t);
    Vec U, Ng;
    double Fg;
    fluxes(x, t, g, U, Fg, Ng);
    acc[0] += w * rho * (pt + Fg);
    acc.tail(n) += w * rho * (U * pt + Ng);
  };
  terms.surface = [&](const Vec& x, double t, double w, Vec& acc) {
    const double e = c.e(t);
    if (e == 0.0) return;
    const double dphi = delta_derivative_time(phi, ls, x, t);
    const Vec Ud = delta_shock_velocity(ls, x, t);
    acc[0] += w * e * dphi;
    acc.tail(n) += w * e * dphi * Ud;
  };
  terms.initial_volume = [&](const Vec& x, double w, Vec& acc) {
    const double rho = c.rho_at(x, 0.0);
    if (rho == 0.0) return;
    const double p = f.value(x, 0.0);
    Vec U, Ng;
    double Fg;
    fluxes(x, 0.0, Vec::Zero(n), U, Fg, Ng);
    acc[0] += w * rho * p;
    acc.tail(n) += w * rho * p * U;
  };
  terms.initial_surface = [&](const Vec& x, double w, Vec& acc) {
    const double e = c.e(0.0);
    if (e == 0.0) return;
    const double p = f.value(x, 0.0);
    acc[0] += w * e * p;
    acc.tail(n) += w * e * p * delta_shock_velocity(ls, x, 0.0);
  };
  return space_time_functional(c, f, panels, q, 1 + n, terms);
}

WeakResidual evaluate_identities(const DeltaShockSolution& c, const TestFunctionBattery& battery, int levels,
                                 const WeakOptions& opts) {
  if (levels < 1) throw Error(Errc::invalid_parameter, "at least one quadrature level is required");
  if (battery.box.t_lo < 0.0) throw Error(Errc::invalid_battery, "battery box reaches into t < 0");
  if (battery.functions.empty()) throw Error(Errc::invalid_battery, "battery is empty");
  const int K = 1 + c.dim;
  const std::size_t members = battery.functions.size();
  WeakResidual out;
  for (int level = 0; level < levels; ++level) {
    const int panels = opts.base_panels << level;
    std::vector<Vec> values(members);
    parallel_for(members, [&](std::size_t i) {
      values[i] = identity_values(c, battery.functions[i], panels, opts.q);
    });
    WeakLevel lv;
    lv.panels = panels;
    lv.max_abs.assign(static_cast<std::size_t>(K), 0.0);
    for (const Vec& v : values) {
      for (int k = 0; k < K; ++k) lv.max_abs[static_cast<std::size_t>(k)] = std::max(lv.max_abs[static_cast<std::size_t>(k)], std::fabs(v[k]));
    }
    out.levels.push_back(lv);
    if (level == levels - 1) {
      for (const Vec& v : values) out.finest.emplace_back(v.data(), v.data() + v.size());
      out.max_residual = lv.max_abs;
    }
  }
  out.observed_order.assign(static_cast<std::size_t>(K), std::numeric_limits<double>::quiet_NaN());
  for (int k = 0; k < K; ++k) {
    for (std::size_t l = 0; l + 1 < out.levels.size(); ++l) {
      const double r0 = out.levels[l].max_abs[static_cast<std::size_t>(k)];
      const double r1 = out.levels[l + 1].max_abs[static_cast<std::size_t>(k)];
      if (r0 <= opts.floor || r1 <= opts.floor) continue;
      out.observed_order[static_cast<std::size_t>(k)] = std::log2(r0 / r1);
    }
  }
  return out;
}

}  // namespace dshock

#include "dshock/geom_suite.hpp"

#include "dshock/geometry.hpp"
#include "dshock/weakcheck.hpp"

#include <cmath>
#include <numbers>

namespace dshock {

namespace {

// e^t (1 + x1^2): smooth and time dependent so the central difference in t has a visible error.
SpaceTimeField weighted_field() {
  SpaceTimeField f;
  f.value = [](const Vec& x, double t) { return std::exp(t) * (1.0 + x[0] * x[0]); };
  f.gradient = [](const Vec& x, double t) {
    Vec g = Vec::Zero(x.size());
    g[0] = 2.0 * std::exp(t) * x[0];
    return g;
  };
  f.time_derivative = [](const Vec& x, double t) { return std::exp(t) * (1.0 + x[0] * x[0]); };
  return f;
}

template <class Residual>
ConvergenceStudy study(const std::string& name, Residual residual) {
  ConvergenceStudy s;
  s.name = name;
  for (double dt = 0.04; dt > 0.004; dt *= 0.5) {
    s.steps.push_back(dt);
    s.residuals.push_back(residual(dt));
  }
  const std::size_t k = s.residuals.size();
  s.observed_order = std::log2(s.residuals[k - 2] / s.residuals[k - 1]);
  s.default_residual = residual(1e-4);
  return s;
}

}  // namespace

GeometrySuiteReport run_geometry_suite() {
  GeometrySuiteReport r;
  for (int n : {2, 3}) {
    for (double R : {0.5, 1.0, 2.0}) {
      const double expected = -(n - 1) / (2.0 * R);
      Vec x = Vec::Zero(n);
      x[0] = R;
      GeometryOptions opts;
      opts.length_scale = R;
      const auto analytic = sphere_front(Vec::Zero(n), [R](double) { return R; }, [](double) { return 0.0; }, opts);
      const double ka = mean_curvature(analytic, x, 0.0);
      r.curvature.push_back({n, R, true, ka, expected, std::fabs(ka - expected)});
      const std::string src = (n == 2 ? std::string("sqrt(x1^2 + x2^2) - ") : std::string("sqrt(x1^2 + x2^2 + x3^2) - ")) +
                              std::to_string(R);
      const auto numeric = expression_front(n, Expression(src), opts);
      const double kn = mean_curvature(numeric, x, 0.0);
      r.curvature.push_back({n, R, false, kn, expected, std::fabs(kn - expected)});
    }
  }
  for (const auto& c : r.curvature) r.curvature_max_error = std::max(r.curvature_max_error, c.error);

  const SpaceTimeField e = weighted_field();
  const auto circle = moving_sphere(2, Vec::Zero(2), [](double t) { return 1.0 - t; }, [](double) { return -1.0; }, 64);
  r.surface = study("shrinking circle", [&](double dt) { return check_surface_transport(e, circle, 0.25, dt).residual; });
  const auto ball = MovingRegion::ball(3, Vec::Zero(3), [](double t) { return 1.0 + t; }, [](double) { return 1.0; }, 24);
  r.volume = study("growing ball", [&](double dt) { return check_volume_transport(e, ball, 0.0, dt).residual; });

  // Translating plane x1 = 0.5 t in 2-D with e = 1 and a compact bump.
  const auto plane = moving_plane(Vec::Unit(2, 0), [](double t) { return 0.5 * t; }, [](double) { return 0.5; },
                                  Vec::Constant(1, -1.0), Vec::Constant(1, 1.0), 16);
  TestFunction bump;
  bump.center = Vec::Constant(2, 0.1);
  bump.half = Vec::Constant(2, 0.6);
  bump.a = Vec::Zero(2);
  bump.t_center = 0.3;
  bump.t_half = 0.5;
  const SpaceTimeBox box{Vec::Constant(2, -1.0), Vec::Constant(2, 1.0), 1.0};
  r.ibp_residual = check_integration_by_parts(SpaceTimeField::constant(1.0), bump.field(), plane, box, 32, 8).residual;
  return r;
}

}  // namespace dshock

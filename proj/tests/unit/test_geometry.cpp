#include "doctest.h"
#include "support.hpp"
#include "oracle_values.hpp"

#include "dshock/geom_suite.hpp"
#include "dshock/geometry.hpp"
#include "dshock/weakcheck.hpp"

#include <cmath>
#include <numbers>

using namespace dshock;

namespace {

LevelSetFront coordinate_plane(int n, double c) {
  Vec e1 = Vec::Zero(n);
  e1[0] = 1.0;
  return plane_front(e1, [c](double t) { return c * t; }, [c](double) { return c; });
}

LevelSetFront static_sphere(int n, double R) {
  return sphere_front(Vec::Zero(n), [R](double) { return R; }, [](double) { return 0.0; });
}

SpaceTimeField field(ScalarField v) {
  SpaceTimeField f;
  f.value = std::move(v);
  return f;
}

}  // namespace

TEST_CASE("normals") {
  auto plane = coordinate_plane(3, 0.0);
  CHECK((normal(plane, vec({0, 1, 2}), 0.3) - vec({1, 0, 0})).norm() < 1e-15);

  auto sphere = static_sphere(3, 2.0);
  CHECK((normal(sphere, vec({2, 0, 0}), 0.0) - vec({1, 0, 0})).norm() < 1e-15);

  auto inward = inward_sphere_front(Vec::Zero(2), [](double t) { return 1.0 + 0.5 * t; },
                                    [](double) { return 0.5; });
  const Vec x = vec({0.6, 0.8});
  CHECK((normal(inward, x, 0.0) + x).norm() < 1e-15);
}

TEST_CASE("normal points from the negative into the positive side") {
  auto expr = expression_front(2, Expression("x1^2 + 4*x2^2 - 1"));
  const Vec x = vec({0.6, 0.4});
  const Vec nu = normal(expr, x, 0.0);
  CHECK(expr.value(x + 1e-3 * nu, 0.0) > 0.0);
  CHECK(expr.value(x - 1e-3 * nu, 0.0) < 0.0);
}

TEST_CASE("degenerate gradient and off-surface points are errors") {
  auto cone = expression_front(2, Expression("x1^2 + x2^2"));
  CHECK_ERRC(normal(cone, vec({0, 0}), 0.0), Errc::degenerate_gradient);
  auto sphere = static_sphere(3, 1.0);
  CHECK_ERRC(normal(sphere, vec({2, 0, 0}), 0.0), Errc::off_surface);
}

TEST_CASE("normal speed") {
  auto fixed = static_sphere(2, 1.0);
  CHECK(normal_speed(fixed, vec({1, 0}), 0.4) == 0.0);
  CHECK(normal_speed(coordinate_plane(2, 1.5), vec({0.0, 3.0}), 0.0) == doctest::Approx(1.5));
  auto growing = sphere_front(Vec::Zero(3), [](double t) { return 1.0 + 0.25 * t; }, [](double) { return 0.25; });
  CHECK(normal_speed(growing, vec({0, 1.25, 0}), 1.0) == doctest::Approx(0.25));
  auto from_expr = expression_front(3, Expression("|x| - 1 - 0.25*t"));
  CHECK(normal_speed(from_expr, vec({0, 1.25, 0}), 1.0) == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("delta shock velocity") {
  const Vec U = delta_shock_velocity(coordinate_plane(3, 2.0), vec({2, 0, 0}), 1.0);
  CHECK((U - vec({2, 0, 0})).norm() < 1e-15);

  auto inward = inward_sphere_front(Vec::Zero(2), [](double t) { return 1.0 + 0.5 * t; },
                                    [](double) { return 0.5; });
  const Vec x = vec({0.6, 0.8});
  CHECK((delta_shock_velocity(inward, x, 0.0) - 0.5 * x).norm() < 1e-15);

  CHECK(delta_shock_velocity(static_sphere(2, 1.0), x, 0.0).norm() == 0.0);
}

TEST_CASE("delta shock velocity is normal times speed") {
  std::mt19937_64 rng(3);
  auto front = expression_front(2, Expression("x1 + 0.3*x2^2 - 0.7*t"));
  for (int k = 0; k < 20; ++k) {
    const double y = std::uniform_real_distribution<double>(-1, 1)(rng);
    const double t = 0.5;
    const Vec x = vec({0.7 * t - 0.3 * y * y, y});
    const Vec U = delta_shock_velocity(front, x, t);
    CHECK(std::fabs(U.dot(normal(front, x, t)) - normal_speed(front, x, t)) < 1e-8);
  }
  auto analytic = coordinate_plane(3, 0.7);
  const Vec x = vec({0.35, 1, 2});
  CHECK(std::fabs(delta_shock_velocity(analytic, x, 0.5).dot(normal(analytic, x, 0.5)) -
                  normal_speed(analytic, x, 0.5)) < 1e-12);
}

TEST_CASE("mean curvature of planes and spheres") {
  CHECK(mean_curvature(coordinate_plane(3, 1.0), vec({1, 0.3, -2}), 1.0) == doctest::Approx(0.0));
  for (int n : {2, 3, 4}) {
    for (double R : {0.5, 1.0, 2.0}) {
      Vec x = Vec::Zero(n);
      x[n - 1] = R;
      CHECK(mean_curvature(static_sphere(n, R), x, 0.0) == doctest::Approx(-(n - 1) / (2.0 * R)).epsilon(1e-9));
    }
  }
}

TEST_CASE("surface divergence of the normal is minus twice the curvature") {
  auto sphere = sphere_front(Vec::Zero(3), [](double) { return 1.5; }, [](double) { return 0.0; });
  const Vec x = 1.5 * vec({0.48, 0.6, 0.64});
  VectorFieldFn nu = [&](const Vec& y, double t) { return normal_field(sphere, y, t); };
  CHECK(tangential_divergence(nu, sphere, x, 0.0) ==
        doctest::Approx(-2.0 * mean_curvature(sphere, x, 0.0)).epsilon(1e-8));
}

TEST_CASE("delta derivative in time") {
  auto plane = coordinate_plane(2, 0.8);
  const Vec x = vec({0.4, 0.2});
  CHECK(delta_derivative_time(SpaceTimeField::constant(3.0), plane, x, 0.5) == doctest::Approx(0.0));
  CHECK(delta_derivative_time(field([](const Vec&, double t) { return t; }), plane, x, 0.5) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(delta_derivative_time(field([](const Vec& y, double) { return y[0]; }), plane, x, 0.5) ==
        doctest::Approx(0.8).epsilon(1e-10));
}

TEST_CASE("delta derivative does not depend on the extension") {
  // Two extensions agreeing on the circle |x| = 1 + t/2.
  auto front = sphere_front(Vec::Zero(2), [](double t) { return 1.0 + 0.5 * t; }, [](double) { return 0.5; });
  auto f1 = field([](const Vec& y, double t) { return y[0] * std::exp(t); });
  auto f2 = field([](const Vec& y, double t) {
    const double R = 1.0 + 0.5 * t;
    return y[0] * std::exp(t) + std::sin(3.0 * y[1]) * (y.squaredNorm() - R * R);
  });
  const double t = 0.4;
  const Vec x = (1.0 + 0.5 * t) * vec({0.6, -0.8});
  CHECK(std::fabs(delta_derivative_time(f1, front, x, t) - delta_derivative_time(f2, front, x, t)) < 1e-7);
}

TEST_CASE("tangential gradient has no normal component") {
  auto front = expression_front(3, Expression("x1^2 + x2^2/4 + x3^2 - 1"));
  const Vec x = vec({0.6, 0.0, 0.8});
  auto f = field([](const Vec& y, double) { return y[0] * y[1] + std::sin(y[2]); });
  CHECK(std::fabs(tangential_gradient(f, front, x, 0.0).dot(normal(front, x, 0.0))) < 1e-8);
}

TEST_CASE("tangential divergence examples") {
  auto plane = coordinate_plane(3, 0.0);
  VectorFieldFn tangent = [](const Vec&, double) { return vec({0, 1, 2}); };
  CHECK(std::fabs(tangential_divergence(tangent, plane, vec({0, 1, 1}), 0.0)) < 1e-10);

  // e U_delta on a growing sphere with e = 1, G = 1: -2 K G = 2 / R.
  const double R = 2.0;
  auto sphere = sphere_front(Vec::Zero(3), [R](double t) { return R + t; }, [](double) { return 1.0; });
  VectorFieldFn eU = [&](const Vec& y, double t) { return normal_field(sphere, y, t); };
  CHECK(tangential_divergence(eU, sphere, vec({0, 0, R}), 0.0) == doctest::Approx(2.0 / R).epsilon(1e-8));

  VectorFieldFn zero = [](const Vec&, double) { return Vec::Zero(3); };
  CHECK(tangential_divergence(zero, sphere, vec({0, 0, R}), 0.0) == 0.0);
}

TEST_CASE("surface integrals") {
  auto unit = sphere_quadrature(3, 1.0, Vec::Zero(3), 16);
  CHECK(surface_integral([](const Vec&) { return 1.0; }, unit) == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-12));
  CHECK(std::fabs(surface_integral([](const Vec& x) { return x[0] * x[0]; }, unit) - oracle::kSphereX1Squared) < 1e-10);
  auto circle = sphere_quadrature(2, 2.0, Vec::Zero(2), 32);
  CHECK(std::fabs(circle.measure() - oracle::kCircleLength2) < 1e-10);
  for (double w : circle.weights) CHECK(w > 0.0);
  SurfacePatchQuadrature empty;
  CHECK_ERRC(surface_integral([](const Vec&) { return 1.0; }, empty), Errc::empty_quadrature);
}

TEST_CASE("plane and graph charts") {
  auto patch = plane_quadrature(vec({0.6, 0.8}), 0.5, vec({-1}), vec({2}), 4);
  CHECK(patch.measure() == doctest::Approx(3.0).epsilon(1e-14));
  for (const auto& x : patch.nodes) CHECK(std::fabs(x.dot(vec({0.6, 0.8})) - 0.5) < 1e-14);
  // hemisphere z = sqrt(1 - x^2 - y^2) over a small window: area by the graph chart
  auto graph = graph_quadrature(3, 2, [](const Vec& y) { return 0.1 * y[0] + 0.2 * y[1]; }, vec({0, 0}), vec({1, 1}), 2);
  CHECK(graph.measure() == doctest::Approx(std::sqrt(1.0 + 0.01 + 0.04)).epsilon(1e-13));
}

TEST_CASE("surface transport") {
  // static plane
  Vec lo = vec({-1}), hi = vec({1});
  auto plane = moving_plane(vec({1, 0}), [](double) { return 0.0; }, [](double) { return 0.0; }, lo, hi, 4);
  auto e = field([](const Vec& x, double) { return 1.0 + x[1] * x[1]; });
  CHECK(check_surface_transport(e, plane, 0.3, 1e-4).residual < 1e-10);

  // shrinking circle R = 1 - t, e = 1
  auto circle = moving_sphere(2, Vec::Zero(2), [](double t) { return 1.0 - t; }, [](double) { return -1.0; }, 64);
  auto r = check_surface_transport(SpaceTimeField::constant(1.0), circle, 0.0, 1e-4);
  CHECK(r.lhs == doctest::Approx(oracle::kShrinkingCircleRate).epsilon(1e-7));
  CHECK(r.rhs == doctest::Approx(oracle::kShrinkingCircleRate).epsilon(1e-10));

  auto zero = check_surface_transport(SpaceTimeField::constant(0.0), circle, 0.0, 1e-4);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
}

TEST_CASE("volume transport") {
  auto ball = MovingRegion::ball(3, Vec::Zero(3), [](double t) { return 1.0 + t; }, [](double) { return 1.0; });
  auto r = check_volume_transport(SpaceTimeField::constant(1.0), ball, 0.0, 1e-4);
  CHECK(r.lhs == doctest::Approx(oracle::kGrowingBallRate).epsilon(1e-7));
  CHECK(r.rhs == doctest::Approx(oracle::kGrowingBallRate).epsilon(1e-10));

  auto fixed = MovingRegion::ball(2, Vec::Zero(2), [](double) { return 1.0; }, [](double) { return 0.0; });
  auto f = field([](const Vec& x, double) { return std::exp(x[0]); });
  CHECK(check_volume_transport(f, fixed, 0.2, 1e-4).residual < 1e-10);
  CHECK(check_volume_transport(SpaceTimeField::constant(0.0), ball, 0.0, 1e-4).residual == 0.0);
}

TEST_CASE("integration by parts") {
  Vec lo = vec({-1.5}), hi = vec({1.5});
  auto plane = moving_plane(vec({1, 0}), [](double t) { return 0.5 * t; }, [](double) { return 0.5; }, lo, hi, 16);
  SpaceTimeBox box{vec({-1, -1}), vec({1, 1}), 1.0};
  TestFunction bump;
  bump.center = vec({0.1, 0.1});
  bump.half = vec({0.6, 0.6});
  bump.t_center = 0.3;
  bump.t_half = 0.5;
  bump.a = Vec::Zero(2);
  auto phi = bump.field();

  CHECK(check_integration_by_parts(SpaceTimeField::constant(0.0), phi, plane, box).residual == 0.0);
  CHECK(check_integration_by_parts(SpaceTimeField::constant(1.0), phi, plane, box, 32, 8).residual < 1e-6);

  // phi supported away from the front
  TestFunction away = bump;
  away.center = vec({-0.6, 0.0});
  away.half = vec({0.3, 0.3});
  away.t_center = 0.5;
  away.t_half = 0.3;
  auto r = check_integration_by_parts(SpaceTimeField::constant(1.0), away.field(), plane, box);
  CHECK(r.lhs == 0.0);
  CHECK(r.residual == 0.0);

  TestFunction wide = bump;
  wide.half = vec({1.5, 0.6});
  CHECK_ERRC(check_integration_by_parts(SpaceTimeField::constant(1.0), wide.field(), plane, box),
             Errc::support_violation);
}

TEST_CASE("geometry suite passes") {
  auto rep = run_geometry_suite();
  CHECK(rep.curvature_ok());
  CHECK(rep.surface_ok());
  CHECK(rep.volume_ok());
  CHECK(rep.ibp_ok());
  CHECK(rep.curvature.size() == 12);
}

#pragma once

// Moving-hypersurface calculus for fronts Gamma_t = {x : S(x, t) = 0}.
//
// Sign conventions (used by every other module, never redefined there):
//   nu = grad S / |grad S|        points from Omega^- (S < 0) into Omega^+ (S > 0)
//   G  = -S_t / |grad S|          normal speed of the front along nu
//   U_delta = G nu                front velocity
//   K  = -1/2 div nu              mean curvature (negative on a sphere with outward nu)
//   df/dt (delta) = f_t + G df/dnu
//   grad_Gamma f  = grad f - nu (nu . grad f)

#include "dshock/common.hpp"
#include "dshock/expr.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dshock {

using ScalarField = std::function<double(const Vec&, double)>;
using VectorFieldFn = std::function<Vec(const Vec&, double)>;

// Scalar field on space-time. Derivatives are optional; missing ones are
// taken by fourth-order central differences.
struct SpaceTimeField {
  ScalarField value;
  VectorFieldFn gradient;
  ScalarField time_derivative;

  // Optional compact support [lo, hi] x [t_lo, t_hi] (closed box outside of which value == 0).
  std::optional<Vec> support_lo, support_hi;
  std::optional<double> support_t_lo, support_t_hi;

  static SpaceTimeField constant(double c);
};

struct GeometryOptions {
  double length_scale = 1.0;
  double h_rel = 1e-4;               // finite-difference step relative to length_scale
  double tol_on_surface_rel = 1e-9;  // accepted |S| / |grad S| relative to length_scale
  double newton_band_rel = 1e-5;     // band in which one Newton projection step is tried
};

class LevelSetFront {
 public:
  LevelSetFront(int dim, ScalarField S, VectorFieldFn grad = {}, ScalarField S_t = {},
                GeometryOptions options = {});

  int dim() const { return dim_; }
  const GeometryOptions& options() const { return options_; }
  bool analytic_gradient() const { return static_cast<bool>(grad_); }
  double step() const { return options_.h_rel * options_.length_scale; }

  double value(const Vec& x, double t) const;
  Vec gradient(const Vec& x, double t) const;
  double time_derivative(const Vec& x, double t) const;

 private:
  int dim_;
  ScalarField S_;
  VectorFieldFn grad_;
  ScalarField S_t_;
  GeometryOptions options_;
};

// Built-in fronts with analytic derivatives.
// Plane nu . x = offset(t), nu fixed unit vector; G = offset'(t).
LevelSetFront plane_front(const Vec& normal, std::function<double(double)> offset,
                          std::function<double(double)> speed, GeometryOptions options = {});
// |x - c| = R(t) with outward normal; G = R'(t).
LevelSetFront sphere_front(const Vec& center, std::function<double(double)> radius,
                           std::function<double(double)> radius_rate, GeometryOptions options = {});
// S = -|x - c| + phi(t): Omega^- is the exterior, nu = -(x - c)/r, G = -phi'(t).
LevelSetFront inward_sphere_front(const Vec& center, std::function<double(double)> radius,
                                  std::function<double(double)> radius_rate, GeometryOptions options = {});
// S given by an expression in x1..xn, t (derivatives by finite differences).
LevelSetFront expression_front(int dim, const Expression& expr, GeometryOptions options = {});

// Returns x, or x after one Newton step along grad S when it lies within the
// Newton band; throws off_surface otherwise.
Vec project_to_surface(const LevelSetFront& front, const Vec& x, double t);

Vec normal(const LevelSetFront& front, const Vec& x, double t);
double normal_speed(const LevelSetFront& front, const Vec& x, double t);
Vec delta_shock_velocity(const LevelSetFront& front, const Vec& x, double t);
double mean_curvature(const LevelSetFront& front, const Vec& x, double t);

// Unchecked extensions of nu and G to a neighbourhood of the front (level sets of S).
Vec normal_field(const LevelSetFront& front, const Vec& x, double t);
double normal_speed_field(const LevelSetFront& front, const Vec& x, double t);

// Gradient and time derivative of a space-time field (analytic when provided).
Vec field_gradient(const SpaceTimeField& f, const Vec& x, double t, double h);
double field_time_derivative(const SpaceTimeField& f, const Vec& x, double t, double h);

double delta_derivative_time(const SpaceTimeField& f, const LevelSetFront& front, const Vec& x, double t);
Vec tangential_gradient(const SpaceTimeField& f, const LevelSetFront& front, const Vec& x, double t);
double tangential_divergence(const VectorFieldFn& A, const LevelSetFront& front, const Vec& x, double t);

// ---------------------------------------------------------------- quadrature

struct SurfacePatchQuadrature {
  std::string chart;
  std::vector<Vec> nodes;
  std::vector<double> weights;

  double measure() const;
};

// Sphere |x - c| = R. dim 1: the two points c +- R; dim 2: trapezoid with
// `resolution` nodes; dim 3: Gauss-Legendre in cos(theta) x trapezoid in azimuth.
SurfacePatchQuadrature sphere_quadrature(int dim, double radius, const Vec& center, int resolution);

// Orthonormal basis of the hyperplane orthogonal to `normal` (columns).
Mat tangent_basis(const Vec& normal);

// Patch of the plane nu . x = offset parametrised by tangential coordinates y
// in the box [window_lo, window_hi] (size dim - 1) of tangent_basis(nu).
SurfacePatchQuadrature plane_quadrature(const Vec& normal, double offset, const Vec& window_lo,
                                        const Vec& window_hi, int panels, int q = 8);

// Graph x_axis = h(y) over the window (y are the remaining coordinates).
SurfacePatchQuadrature graph_quadrature(int dim, int axis, const std::function<double(const Vec&)>& height,
                                        const Vec& window_lo, const Vec& window_hi, int panels, int q = 8);

double surface_integral(const std::function<double(const Vec&)>& f, const SurfacePatchQuadrature& quad);

// ------------------------------------------------------------ transport checks

// A front together with a chart covering the patch of interest at each time.
struct MovingFront {
  LevelSetFront level_set;
  std::function<SurfacePatchQuadrature(double)> chart;
};

MovingFront moving_sphere(int dim, const Vec& center, std::function<double(double)> radius,
                          std::function<double(double)> radius_rate, int resolution,
                          GeometryOptions options = {});
MovingFront moving_plane(const Vec& normal, std::function<double(double)> offset,
                         std::function<double(double)> speed, const Vec& window_lo, const Vec& window_hi,
                         int panels, GeometryOptions options = {});

struct TransportResidual {
  double lhs;
  double rhs;
  double residual;  // |lhs - rhs|
};

// d/dt int_{Gamma_t} e dmu  vs  int_{Gamma_t} (de/dt - 2 K G e) dmu, with a
// central difference of width dt for the left side.
TransportResidual check_surface_transport(const SpaceTimeField& e, const MovingFront& front, double t, double dt);

struct MovingRegion {
  enum class Kind { ball, box } kind = Kind::ball;
  int dim = 3;
  Vec center;                                    // ball
  std::function<double(double)> radius, radius_rate;
  std::function<Vec(double)> lo, hi, lo_rate, hi_rate;  // box corners
  int resolution = 32;

  static MovingRegion ball(int dim, const Vec& center, std::function<double(double)> radius,
                           std::function<double(double)> radius_rate, int resolution = 32);
  static MovingRegion box(std::function<Vec(double)> lo, std::function<Vec(double)> hi,
                          std::function<Vec(double)> lo_rate, std::function<Vec(double)> hi_rate,
                          int resolution = 16);
};

double volume_integral(const std::function<double(const Vec&)>& f, const MovingRegion& region, double t);

// d/dt int_{Omega_t} f dx  vs  int f_t dx + int_{dOmega_t} f W.nu dmu.
TransportResidual check_volume_transport(const SpaceTimeField& f, const MovingRegion& region, double t, double dt,
                                         double h = 1e-4);

struct SpaceTimeBox {
  Vec lo, hi;
  double t_end;
};

// Residual of the integration-by-parts identity on Gamma cap {0 <= t <= T}:
//   int_Gamma e dphi/dt  =  -int_Gamma (de/dt - 2 K G e) phi  -  int_{Gamma_0} e phi.
// phi must carry a support box strictly inside `box`.
TransportResidual check_integration_by_parts(const SpaceTimeField& e, const SpaceTimeField& phi,
                                             const MovingFront& front, const SpaceTimeBox& box,
                                             int time_panels = 16, int q = 8);

}  // namespace dshock

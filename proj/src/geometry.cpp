#include "dshock/geometry.hpp"

#include "dshock/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace dshock {

namespace {

constexpr double kMinGradient = 1e-12;

// Fourth-order central difference of a vector-valued map along a direction.
template <class F>
auto richardson_dir(const F& f, double h) {
  auto central = [&](double s) { return ((f(s) - f(-s)) / (2.0 * s)).eval(); };
  return ((4.0 * central(0.5 * h) - central(h)) / 3.0).eval();
}

double guarded(const ScalarField& f, const Vec& x, double t) {
  double v;
  try {
    v = f(x, t);
  } catch (const Error& err) {
    throw Error(Errc::stencil, std::string("field not evaluable in stencil: ") + err.what());
  }
  if (!std::isfinite(v)) throw Error(Errc::stencil, "field not finite in stencil");
  return v;
}

// Tensor-product Gauss-Legendre rule on a box of dimension lo.size().
void tensor_rule(const Vec& lo, const Vec& hi, int panels, int q,
                 const std::function<void(const Vec&, double)>& emit) {
  const int d = static_cast<int>(lo.size());
  if (d == 0) {
    emit(Vec(0), 1.0);
    return;
  }
  std::vector<std::vector<QuadNode>> rules;
  for (int k = 0; k < d; ++k) rules.push_back(panel_rule(lo[k], hi[k], panels, q));
  for (const auto& r : rules) {
    if (r.empty()) return;
  }
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  Vec y(d);
  for (;;) {
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      const auto& n = rules[static_cast<std::size_t>(k)][idx[static_cast<std::size_t>(k)]];
      y[k] = n.x;
      w *= n.w;
    }
    emit(y, w);
    int k = 0;
    while (k < d) {
      auto& i = idx[static_cast<std::size_t>(k)];
      if (++i < rules[static_cast<std::size_t>(k)].size()) break;
      i = 0;
      ++k;
    }
    if (k == d) return;
  }
}

}  // namespace

SpaceTimeField SpaceTimeField::constant(double c) {
  SpaceTimeField f;
  f.value = [c](const Vec&, double) { return c; };
  f.gradient = [](const Vec& x, double) { return Vec::Zero(x.size()).eval(); };
  f.time_derivative = [](const Vec&, double) { return 0.0; };
  return f;
}

// ------------------------------------------------------------------ fronts

LevelSetFront::LevelSetFront(int dim, ScalarField S, VectorFieldFn grad, ScalarField S_t, GeometryOptions options)
    : dim_(dim), S_(std::move(S)), grad_(std::move(grad)), S_t_(std::move(S_t)), options_(options) {
  if (dim < 1) throw Error(Errc::invalid_dimension, "front dimension must be >= 1");
  if (!S_) throw Error(Errc::invalid_input, "level-set function missing");
  if (!(options_.length_scale > 0.0) || !(options_.h_rel > 0.0))
    throw Error(Errc::invalid_parameter, "length scale and step must be positive");
}

double LevelSetFront::value(const Vec& x, double t) const {
  if (x.size() != dim_) throw Error(Errc::dimension_mismatch, "point dimension differs from front dimension");
  return S_(x, t);
}

Vec LevelSetFront::gradient(const Vec& x, double t) const {
  if (x.size() != dim_) throw Error(Errc::dimension_mismatch, "point dimension differs from front dimension");
  if (grad_) return grad_(x, t);
  Vec g(dim_);
  const double h = step();
  for (int j = 0; j < dim_; ++j) {
    g[j] = richardson_derivative(
        [&](double s) {
          Vec y = x;
          y[j] = s;
          return S_(y, t);
        },
        x[j], h);
  }
  return g;
}

double LevelSetFront::time_derivative(const Vec& x, double t) const {
  if (S_t_) return S_t_(x, t);
  return richardson_derivative([&](double s) { return S_(x, s); }, t, step());
}

LevelSetFront plane_front(const Vec& normal, std::function<double(double)> offset,
                          std::function<double(double)> speed, GeometryOptions options) {
  const double len = normal.norm();
  if (!(len > kMinGradient)) throw Error(Errc::degenerate_gradient, "plane normal has zero length");
  const Vec nu = normal / len;
  return LevelSetFront(
      static_cast<int>(nu.size()), [nu, offset](const Vec& x, double t) { return nu.dot(x) - offset(t); },
      [nu](const Vec&, double) { return nu; }, [speed](const Vec&, double t) { return -speed(t); }, options);
}

LevelSetFront sphere_front(const Vec& center, std::function<double(double)> radius,
                           std::function<double(double)> radius_rate, GeometryOptions options) {
  return LevelSetFront(
      static_cast<int>(center.size()), [center, radius](const Vec& x, double t) { return (x - center).norm() - radius(t); },
      [center](const Vec& x, double) {
        const Vec d = x - center;
        return (d / d.norm()).eval();
      },
      [radius_rate](const Vec&, double t) { return -radius_rate(t); }, options);
}

LevelSetFront inward_sphere_front(const Vec& center, std::function<double(double)> radius,
                                  std::function<double(double)> radius_rate, GeometryOptions options) {
  return LevelSetFront(
      static_cast<int>(center.size()), [center, radius](const Vec& x, double t) { return radius(t) - (x - center).norm(); },
      [center](const Vec& x, double) {
        const Vec d = x - center;
        return (-d / d.norm()).eval();
      },
      [radius_rate](const Vec&, double t) { return radius_rate(t); }, options);
}

LevelSetFront expression_front(int dim, const Expression& expr, GeometryOptions options) {
  return LevelSetFront(dim, [expr](const Vec& x, double t) { return expr(x, t); }, {}, {}, options);
}

// ------------------------------------------------------------ point queries

Vec project_to_surface(const LevelSetFront& front, const Vec& x, double t) {
  const auto& o = front.options();
  const double tol = o.tol_on_surface_rel * o.length_scale;
  const double s = front.value(x, t);
  const Vec g = front.gradient(x, t);
  const double gn = g.norm();
  if (!std::isfinite(s) || !g.allFinite()) throw Error(Errc::stencil, "level set not finite at query point");
  if (gn < kMinGradient) throw Error(Errc::degenerate_gradient, "|grad S| below 1e-12");
  const double dist = std::fabs(s) / gn;
  if (dist <= tol) return x;
  if (dist > o.newton_band_rel * o.length_scale)
    throw Error(Errc::off_surface, "point is " + std::to_string(dist) + " away from the front");
  Vec y = x - (s / (gn * gn)) * g;
  const double s1 = front.value(y, t);
  const double g1 = front.gradient(y, t).norm();
  if (g1 < kMinGradient) throw Error(Errc::degenerate_gradient, "|grad S| below 1e-12");
  if (std::fabs(s1) / g1 > tol) throw Error(Errc::off_surface, "Newton projection did not reach the front");
  return y;
}

Vec normal_field(const LevelSetFront& front, const Vec& x, double t) {
  const Vec g = front.gradient(x, t);
  const double gn = g.norm();
  if (!g.allFinite()) throw Error(Errc::stencil, "gradient not finite");
  if (gn < kMinGradient) throw Error(Errc::degenerate_gradient, "|grad S| below 1e-12");
  return g / gn;
}

double normal_speed_field(const LevelSetFront& front, const Vec& x, double t) {
  const Vec g = front.gradient(x, t);
  const double gn = g.norm();
  if (gn < kMinGradient) throw Error(Errc::degenerate_gradient, "|grad S| below 1e-12");
  return -front.time_derivative(x, t) / gn;
}

Vec normal(const LevelSetFront& front, const Vec& x, double t) {
  return normal_field(front, project_to_surface(front, x, t), t);
}

double normal_speed(const LevelSetFront& front, const Vec& x, double t) {
  return normal_speed_field(front, project_to_surface(front, x, t), t);
}

Vec delta_shock_velocity(const LevelSetFront& front, const Vec& x, double t) {
  const Vec y = project_to_surface(front, x, t);
  return normal_speed_field(front, y, t) * normal_field(front, y, t);
}

double mean_curvature(const LevelSetFront& front, const Vec& x, double t) {
  const Vec y = project_to_surface(front, x, t);
  const int n = front.dim();
  if (front.analytic_gradient()) {
    // div nu from differences of the analytic normal.
    const double h = front.step();
    double div = 0.0;
    for (int j = 0; j < n; ++j) {
      const Vec d = richardson_dir(
          [&](double s) {
            Vec z = y;
            z[j] += s;
            return normal_field(front, z, t);
          },
          h);
      div += d[j];
    }
    return -0.5 * div;
  }
  // Only S is available: div(grad S/|grad S|) = (tr H - nu^T H nu)/|grad S|,
  // Hessian by Richardson-extrapolated second differences on a wider stencil.
  const double h = 10.0 * front.step();
  auto S = [&](const Vec& z) { return front.value(z, t); };
  auto hessian = [&](double s) {
    Mat H(n, n);
    const double s0 = S(y);
    for (int i = 0; i < n; ++i) {
      Vec p = y, m = y;
      p[i] += s;
      m[i] -= s;
      H(i, i) = (S(p) - 2.0 * s0 + S(m)) / (s * s);
      for (int j = i + 1; j < n; ++j) {
        Vec pp = y, pm = y, mp = y, mm = y;
        pp[i] += s; pp[j] += s;
        pm[i] += s; pm[j] -= s;
        mp[i] -= s; mp[j] += s;
        mm[i] -= s; mm[j] -= s;
        H(i, j) = H(j, i) = (S(pp) - S(pm) - S(mp) + S(mm)) / (4.0 * s * s);
      }
    }
    return H;
  };
  const Mat H = (4.0 * hessian(0.5 * h) - hessian(h)) / 3.0;
  const Vec g = front.gradient(y, t);
  const double gn = g.norm();
  const Vec nu = g / gn;
  if (!H.allFinite()) throw Error(Errc::stencil, "level set not finite in curvature stencil");
  return -0.5 * (H.trace() - nu.dot(H * nu)) / gn;
}

Vec field_gradient(const SpaceTimeField& f, const Vec& x, double t, double h) {
  if (f.gradient) {
    Vec g = f.gradient(x, t);
    if (!g.allFinite()) throw Error(Errc::stencil, "field gradient not finite");
    return g;
  }
  Vec g(x.size());
  for (int j = 0; j < x.size(); ++j) {
    g[j] = richardson_derivative(
        [&](double s) {
          Vec y = x;
          y[j] = s;
          return guarded(f.value, y, t);
        },
        x[j], h);
  }
  return g;
}

double field_time_derivative(const SpaceTimeField& f, const Vec& x, double t, double h) {
  if (f.time_derivative) {
    const double v = f.time_derivative(x, t);
    if (!std::isfinite(v)) throw Error(Errc::stencil, "field time derivative not finite");
    return v;
  }
  return richardson_derivative([&](double s) { return guarded(f.value, x, s); }, t, h);
}

double delta_derivative_time(const SpaceTimeField& f, const LevelSetFront& front, const Vec& x, double t) {
  const Vec y = project_to_surface(front, x, t);
  const Vec nu = normal_field(front, y, t);
  const double G = normal_speed_field(front, y, t);
  const double h = front.step();
  return field_time_derivative(f, y, t, h) + G * nu.dot(field_gradient(f, y, t, h));
}

Vec tangential_gradient(const SpaceTimeField& f, const LevelSetFront& front, const Vec& x, double t) {
  const Vec y = project_to_surface(front, x, t);
  const Vec nu = normal_field(front, y, t);
  const Vec g = field_gradient(f, y, t, front.step());
  return g - nu * nu.dot(g);
}

double tangential_divergence(const VectorFieldFn& A, const LevelSetFront& front, const Vec& x, double t) {
  const Vec y = project_to_surface(front, x, t);
  const int n = front.dim();
  const Vec nu = normal_field(front, y, t);
  Mat J(n, n);  // J(i, j) = d A_i / d x_j
  for (int j = 0; j < n; ++j) {
    J.col(j) = richardson_dir(
        [&](double s) {
          Vec z = y;
          z[j] += s;
          Vec a = A(z, t);
          if (a.size() != n) throw Error(Errc::dimension_mismatch, "surface vector field has wrong size");
          if (!a.allFinite()) throw Error(Errc::stencil, "surface vector field not finite in stencil");
          return a;
        },
        front.step());
  }
  return J.trace() - nu.dot(J * nu);
}

// -------------------------------------------------------------- quadrature

double SurfacePatchQuadrature::measure() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

SurfacePatchQuadrature sphere_quadrature(int dim, double radius, const Vec& center, int resolution) {
  if (center.size() != dim) throw Error(Errc::dimension_mismatch, "sphere center has wrong dimension");
  if (!(radius > 0.0)) throw Error(Errc::invalid_parameter, "sphere radius must be positive");
  if (resolution < 1) throw Error(Errc::invalid_parameter, "sphere resolution must be >= 1");
  SurfacePatchQuadrature q;
  q.chart = "sphere";
  const double two_pi = 2.0 * std::numbers::pi;
  switch (dim) {
    case 1:
      q.nodes = {center - Vec::Constant(1, radius), center + Vec::Constant(1, radius)};
      q.weights = {1.0, 1.0};
      break;
    case 2: {
      const int m = std::max(resolution, 3);
      for (int k = 0; k < m; ++k) {
        const double a = two_pi * k / m;
        Vec p(2);
        p << std::cos(a), std::sin(a);
        q.nodes.push_back(center + radius * p);
        q.weights.push_back(two_pi * radius / m);
      }
      break;
    }
    case 3: {
      const auto& gl = gauss_legendre(resolution);
      const int m = 2 * resolution;
      for (const auto& z : gl) {
        const double rho = std::sqrt(std::max(0.0, 1.0 - z.x * z.x));
        for (int k = 0; k < m; ++k) {
          const double a = two_pi * (k + 0.5) / m;
          Vec p(3);
          p << rho * std::cos(a), rho * std::sin(a), z.x;
          q.nodes.push_back(center + radius * p);
          q.weights.push_back(radius * radius * z.w * two_pi / m);
        }
      }
      break;
    }
    default:
      throw Error(Errc::unsupported_front, "sphere charts exist for dimensions 1 to 3");
  }
  return q;
}

Mat tangent_basis(const Vec& normal) {
  const int n = static_cast<int>(normal.size());
  const double len = normal.norm();
  if (!(len > kMinGradient)) throw Error(Errc::degenerate_gradient, "plane normal has zero length");
  Eigen::HouseholderQR<Mat> qr(Mat(normal / len));
  const Mat Q = qr.householderQ() * Mat::Identity(n, n);
  return Q.rightCols(n - 1);
}

SurfacePatchQuadrature plane_quadrature(const Vec& normal, double offset, const Vec& window_lo,
                                        const Vec& window_hi, int panels, int q) {
  const int n = static_cast<int>(normal.size());
  if (window_lo.size() != n - 1 || window_hi.size() != n - 1)
    throw Error(Errc::dimension_mismatch, "plane window must have dimension n - 1");
  const Vec nu = normal / normal.norm();
  const Mat T = tangent_basis(nu);
  SurfacePatchQuadrature out;
  out.chart = "plane";
  tensor_rule(window_lo, window_hi, panels, q, [&](const Vec& y, double w) {
    out.nodes.push_back(offset * nu + T * y);
    out.weights.push_back(w);
  });
  return out;
}

SurfacePatchQuadrature graph_quadrature(int dim, int axis, const std::function<double(const Vec&)>& height,
                                        const Vec& window_lo, const Vec& window_hi, int panels, int q) {
  if (axis < 0 || axis >= dim) throw Error(Errc::invalid_parameter, "graph axis out of range");
  if (window_lo.size() != dim - 1 || window_hi.size() != dim - 1)
    throw Error(Errc::dimension_mismatch, "graph window must have dimension n - 1");
  SurfacePatchQuadrature out;
  out.chart = "graph";
  const double scale = std::max(1.0, (window_hi - window_lo).cwiseAbs().maxCoeff());
  const double h = 1e-4 * scale;
  tensor_rule(window_lo, window_hi, panels, q, [&](const Vec& y, double w) {
    Vec grad(dim - 1);
    for (int k = 0; k < dim - 1; ++k) {
      grad[k] = richardson_derivative(
          [&](double s) {
            Vec z = y;
            z[k] = s;
            return height(z);
          },
          y[k], h);
    }
    Vec x(dim);
    for (int k = 0, j = 0; k < dim; ++k) x[k] = (k == axis) ? height(y) : y[j++];
    out.nodes.push_back(x);
    out.weights.push_back(w * std::sqrt(1.0 + grad.squaredNorm()));
  });
  return out;
}

double surface_integral(const std::function<double(const Vec&)>& f, const SurfacePatchQuadrature& quad) {
  if (quad.nodes.empty()) throw Error(Errc::empty_quadrature, "surface quadrature has no nodes");
  double s = 0.0;
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) s += quad.weights[i] * f(quad.nodes[i]);
  return s;
}

// -------------------------------------------------------- transport checks

MovingFront moving_sphere(int dim, const Vec& center, std::function<double(double)> radius,
                          std::function<double(double)> radius_rate, int resolution, GeometryOptions options) {
  auto chart = [dim, center, radius, resolution](double t) {
    return sphere_quadrature(dim, radius(t), center, resolution);
  };
  return {sphere_front(center, radius, radius_rate, options), chart};
}

MovingFront moving_plane(const Vec& normal, std::function<double(double)> offset,
                         std::function<double(double)> speed, const Vec& window_lo, const Vec& window_hi,
                         int panels, GeometryOptions options) {
  const Vec nu = normal / normal.norm();
  auto chart = [nu, offset, window_lo, window_hi, panels](double t) {
    return plane_quadrature(nu, offset(t), window_lo, window_hi, panels);
  };
  return {plane_front(nu, offset, speed, options), chart};
}

namespace {

double chart_integral(const SpaceTimeField& e, const MovingFront& front, double t) {
  const auto quad = front.chart(t);
  return surface_integral([&](const Vec& x) { return e.value(x, t); }, quad);
}

}  // namespace

TransportResidual check_surface_transport(const SpaceTimeField& e, const MovingFront& front, double t, double dt) {
  if (!(dt > 0.0)) throw Error(Errc::invalid_parameter, "dt must be positive");
  const double lhs = (chart_integral(e, front, t + dt) - chart_integral(e, front, t - dt)) / (2.0 * dt);
  const auto quad = front.chart(t);
  const auto& S = front.level_set;
  const double rhs = surface_integral(
      [&](const Vec& x) {
        const double ev = e.value(x, t);
        const double K = mean_curvature(S, x, t);
        const double G = normal_speed(S, x, t);
        return delta_derivative_time(e, S, x, t) - 2.0 * K * G * ev;
      },
      quad);
  return {lhs, rhs, std::fabs(lhs - rhs)};
}

MovingRegion MovingRegion::ball(int dim, const Vec& center, std::function<double(double)> radius,
                                std::function<double(double)> radius_rate, int resolution) {
  MovingRegion r;
  r.kind = Kind::ball;
  r.dim = dim;
  r.center = center;
  r.radius = std::move(radius);
  r.radius_rate = std::move(radius_rate);
  r.resolution = resolution;
  return r;
}

MovingRegion MovingRegion::box(std::function<Vec(double)> lo, std::function<Vec(double)> hi,
                               std::function<Vec(double)> lo_rate, std::function<Vec(double)> hi_rate,
                               int resolution) {
  MovingRegion r;
  r.kind = Kind::box;
  r.dim = static_cast<int>(lo(0.0).size());
  r.lo = std::move(lo);
  r.hi = std::move(hi);
  r.lo_rate = std::move(lo_rate);
  r.hi_rate = std::move(hi_rate);
  r.resolution = resolution;
  return r;
}

double volume_integral(const std::function<double(const Vec&)>& f, const MovingRegion& region, double t) {
  double sum = 0.0;
  if (region.kind == MovingRegion::Kind::box) {
    tensor_rule(region.lo(t), region.hi(t), 1, region.resolution,
                [&](const Vec& x, double w) { sum += w * f(x); });
    return sum;
  }
  const double R = region.radius(t);
  const int n = region.dim;
  if (n == 1) {
    for (const auto& node : panel_rule(region.center[0] - R, region.center[0] + R, 1, region.resolution)) {
      sum += node.w * f(Vec::Constant(1, node.x));
    }
    return sum;
  }
  if (n != 2 && n != 3) throw Error(Errc::unsupported_front, "ball quadrature exists for dimensions 1 to 3");
  for (const auto& node : panel_rule(0.0, R, 1, region.resolution)) {
    const auto shell = sphere_quadrature(n, node.x, region.center, region.resolution);
    sum += node.w * surface_integral(f, shell);
  }
  return sum;
}

TransportResidual check_volume_transport(const SpaceTimeField& f, const MovingRegion& region, double t, double dt,
                                         double h) {
  if (!(dt > 0.0)) throw Error(Errc::invalid_parameter, "dt must be positive");
  auto at = [&](double s) { return volume_integral([&](const Vec& x) { return f.value(x, s); }, region, s); };
  const double lhs = (at(t + dt) - at(t - dt)) / (2.0 * dt);
  double rhs = volume_integral([&](const Vec& x) { return field_time_derivative(f, x, t, h); }, region, t);

  if (region.kind == MovingRegion::Kind::ball) {
    const auto boundary = sphere_quadrature(region.dim, region.radius(t), region.center, 2 * region.resolution);
    rhs += region.radius_rate(t) * surface_integral([&](const Vec& x) { return f.value(x, t); }, boundary);
  } else {
    const Vec lo = region.lo(t), hi = region.hi(t);
    const Vec lo_rate = region.lo_rate(t), hi_rate = region.hi_rate(t);
    const int n = region.dim;
    for (int k = 0; k < n; ++k) {
      Vec flo(n - 1), fhi(n - 1);
      for (int j = 0, i = 0; j < n; ++j) {
        if (j == k) continue;
        flo[i] = lo[j];
        fhi[i] = hi[j];
        ++i;
      }
      auto face = [&](double coord) {
        double s = 0.0;
        tensor_rule(flo, fhi, 1, region.resolution, [&](const Vec& y, double w) {
          Vec x(n);
          for (int j = 0, i = 0; j < n; ++j) x[j] = (j == k) ? coord : y[i++];
          s += w * f.value(x, t);
        });
        return s;
      };
      rhs += hi_rate[k] * face(hi[k]) - lo_rate[k] * face(lo[k]);
    }
  }
  return {lhs, rhs, std::fabs(lhs - rhs)};
}

TransportResidual check_integration_by_parts(const SpaceTimeField& e, const SpaceTimeField& phi,
                                             const MovingFront& front, const SpaceTimeBox& box, int time_panels,
                                             int q) {
  if (!phi.support_lo || !phi.support_hi || !phi.support_t_hi)
    throw Error(Errc::support_violation, "test function carries no support box");
  const Vec& lo = *phi.support_lo;
  const Vec& hi = *phi.support_hi;
  if (lo.size() != box.lo.size() || hi.size() != box.hi.size())
    throw Error(Errc::dimension_mismatch, "support box dimension differs from space-time box");
  for (int k = 0; k < lo.size(); ++k) {
    if (!(lo[k] > box.lo[k]) || !(hi[k] < box.hi[k]))
      throw Error(Errc::support_violation, "test function support touches the space-time box boundary");
  }
  if (!(*phi.support_t_hi < box.t_end))
    throw Error(Errc::support_violation, "test function support reaches the final time");

  const auto& S = front.level_set;
  const double h = S.step();
  double lhs = 0.0, bulk = 0.0;
  for (const auto& tn : panel_rule(0.0, box.t_end, time_panels, q)) {
    const auto quad = front.chart(tn.x);
    for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
      const Vec& x = quad.nodes[i];
      const double pv = phi.value(x, tn.x);
      const double ev = e.value(x, tn.x);
      const Vec nu = normal_field(S, x, tn.x);
      const double G = normal_speed_field(S, x, tn.x);
      const double dphi = field_time_derivative(phi, x, tn.x, h) + G * nu.dot(field_gradient(phi, x, tn.x, h));
      lhs += tn.w * quad.weights[i] * ev * dphi;
      if (pv != 0.0) {
        const double de = delta_derivative_time(e, S, x, tn.x);
        const double K = mean_curvature(S, x, tn.x);
        bulk += tn.w * quad.weights[i] * (de - 2.0 * K * G * ev) * pv;
      }
    }
  }
  const auto q0 = front.chart(0.0);
  double initial = 0.0;
  for (std::size_t i = 0; i < q0.nodes.size(); ++i) {
    initial += q0.weights[i] * e.value(q0.nodes[i], 0.0) * phi.value(q0.nodes[i], 0.0);
  }
  const double rhs = -bulk - initial;
  return {lhs, rhs, std::fabs(lhs - rhs)};
}

}  // namespace dshock

#pragma once

// Fixed validation suite for the moving-surface calculus: sphere curvature,
// surface and volume transport convergence, and integration by parts on a
// translating plane.

#include <string>
#include <vector>

namespace dshock {

struct CurvatureCase {
  int n;
  double R;
  bool analytic_gradient;  // false: level set given as an expression (finite differences)
  double value, expected, error;
};

struct ConvergenceStudy {
  std::string name;
  std::vector<double> steps;      // dt ladder, halving
  std::vector<double> residuals;
  double observed_order = 0.0;    // from the two finest steps
  double default_residual = 0.0;  // at dt = 1e-4
};

struct GeometrySuiteReport {
  std::vector<CurvatureCase> curvature;
  double curvature_max_error = 0.0;
  ConvergenceStudy surface, volume;
  double ibp_residual = 0.0;

  static constexpr double kCurvatureTol = 1e-8;
  static constexpr double kMinOrder = 1.8;  // central differences in t are second order
  static constexpr double kIbpTol = 1e-6;

  bool curvature_ok() const { return curvature_max_error <= kCurvatureTol; }
  bool surface_ok() const { return surface.observed_order >= kMinOrder; }
  bool volume_ok() const { return volume.observed_order >= kMinOrder; }
  bool ibp_ok() const { return ibp_residual < kIbpTol; }
  bool passed() const { return curvature_ok() && surface_ok() && volume_ok() && ibp_ok(); }
};

GeometrySuiteReport run_geometry_suite();

}  // namespace dshock

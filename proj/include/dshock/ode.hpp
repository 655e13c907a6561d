#pragma once

#include "dshock/common.hpp"

#include <functional>
#include <vector>

namespace dshock {

using OdeRhs = std::function<Vec(double, const Vec&)>;
// Event function: integration stops at the first root where g crosses from
// positive to non-positive.
using OdeEvent = std::function<double(double, const Vec&)>;

struct OdeOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 selects a step from the data
  double max_step = 0.0;      // 0 means unbounded
  long max_steps = 2'000'000;
};

// Continuous extension of one Dormand-Prince step (fourth-order dense output).
struct DenseStep {
  double t0 = 0.0, h = 0.0;
  Vec r1, r2, r3, r4, r5;

  Vec operator()(double t) const;
};

struct OdeSolution {
  std::vector<double> t;  // accepted step end points, starting with t0
  std::vector<Vec> y;
  std::vector<DenseStep> dense;
  int event = -1;  // index of the event that stopped integration, -1 when t_end was reached
  long rejected = 0;

  double t_final() const { return t.back(); }
  const Vec& y_final() const { return y.back(); }
  // Dense interpolation anywhere in [t.front(), t.back()].
  Vec at(double s) const;
};

// Adaptive Dormand-Prince 5(4) integration from t0 to t_end.
// Throws stiffness when the step size underflows.
OdeSolution integrate_dopri5(const OdeRhs& f, double t0, const Vec& y0, double t_end, const OdeOptions& opts = {},
                             const std::vector<OdeEvent>& events = {});

}  // namespace dshock

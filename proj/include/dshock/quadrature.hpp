#pragma once

#include "dshock/common.hpp"

#include <functional>
#include <vector>

namespace dshock {

struct QuadNode {
  double x;
  double w;
};

// Gauss-Legendre rule with q points on [-1, 1] (cached, thread-safe).
const std::vector<QuadNode>& gauss_legendre(int q);

// Composite Gauss-Legendre: `panels` equal panels of q points on [a, b].
// An empty rule is returned when b <= a.
std::vector<QuadNode> panel_rule(double a, double b, int panels, int q);

// Composite rule over [a, b] with every breakpoint inside (a, b) used as a
// panel edge, so piecewise-smooth integrands keep full order.
std::vector<QuadNode> split_panel_rule(double a, double b, std::vector<double> breaks, int panels, int q);

double integrate(const std::function<double(double)>& f, double a, double b, int panels = 8, int q = 8);

// Central difference of a scalar function with one Richardson step
// (fourth order): (4 D(h/2) - D(h)) / 3.
double richardson_derivative(const std::function<double(double)>& f, double x, double h);

}  // namespace dshock

#include "dshock/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace dshock {

namespace {

std::vector<QuadNode> compute_gauss_legendre(int q) {
  std::vector<QuadNode> nodes(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) {
    // Newton on P_q from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= q; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (q == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = q * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= q; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (q == 1) p0 = 1.0;
    dp = q * (x * p1 - p0) / (x * x - 1.0);
    nodes[static_cast<std::size_t>(i)] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
  }
  std::sort(nodes.begin(), nodes.end(), [](const QuadNode& a, const QuadNode& b) { return a.x < b.x; });
  return nodes;
}

}  // namespace

const std::vector<QuadNode>& gauss_legendre(int q) {
  if (q < 1) throw Error(Errc::invalid_parameter, "Gauss-Legendre rule needs q >= 1");
  static std::mutex mutex;
  static std::map<int, std::vector<QuadNode>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(q);
  if (it == cache.end()) it = cache.emplace(q, compute_gauss_legendre(q)).first;
  return it->second;
}

std::vector<QuadNode> panel_rule(double a, double b, int panels, int q) {
  std::vector<QuadNode> out;
  if (!(b > a)) return out;
  if (panels < 1) throw Error(Errc::invalid_parameter, "panel count must be >= 1");
  const auto& base = gauss_legendre(q);
  out.reserve(static_cast<std::size_t>(panels * q));
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (const auto& n : base) out.push_back({mid + 0.5 * h * n.x, 0.5 * h * n.w});
  }
  return out;
}

std::vector<QuadNode> split_panel_rule(double a, double b, std::vector<double> breaks, int panels, int q) {
  std::vector<QuadNode> out;
  if (!(b > a)) return out;
  std::vector<double> edges{a};
  std::sort(breaks.begin(), breaks.end());
  for (double c : breaks) {
    if (c > edges.back() && c < b) edges.push_back(c);
  }
  edges.push_back(b);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    // panel count proportional to sub-interval length, at least one
    const double frac = (edges[i + 1] - edges[i]) / (b - a);
    const int p = std::max(1, static_cast<int>(std::ceil(frac * panels)));
    auto part = panel_rule(edges[i], edges[i + 1], p, q);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

double integrate(const std::function<double(double)>& f, double a, double b, int panels, int q) {
  double sum = 0.0;
  for (const auto& n : panel_rule(a, b, panels, q)) sum += n.w * f(n.x);
  return sum;
}

double richardson_derivative(const std::function<double(double)>& f, double x, double h) {
  auto central = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
  const double coarse = central(h);
  const double fine = central(0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace dshock

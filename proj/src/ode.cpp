#include "dshock/ode.hpp"

#include <algorithm>
#include <cmath>

namespace dshock {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

double scaled_norm(const Vec& v, const Vec& ref, const OdeOptions& o) {
  double s = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    const double sc = o.atol + o.rtol * std::fabs(ref[i]);
    s += (v[i] / sc) * (v[i] / sc);
  }
  return std::sqrt(s / std::max<Eigen::Index>(1, v.size()));
}

}  // namespace

Vec DenseStep::operator()(double t) const {
  const double th = (t - t0) / h;
  const double th1 = 1.0 - th;
  return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
}

Vec OdeSolution::at(double s) const {
  if (dense.empty()) return y.front();
  if (s <= t.front()) return y.front();
  if (s >= t.back()) return y.back();
  auto it = std::upper_bound(t.begin(), t.end(), s);
  const std::size_t k = static_cast<std::size_t>(std::distance(t.begin(), it)) - 1;
  return dense[std::min(k, dense.size() - 1)](s);
}

OdeSolution integrate_dopri5(const OdeRhs& f, double t0, const Vec& y0, double t_end, const OdeOptions& o,
                             const std::vector<OdeEvent>& events) {
  if (!(t_end >= t0)) throw Error(Errc::invalid_parameter, "t_end must not precede t0");
  require_finite(y0, "ODE initial state");
  OdeSolution sol;
  sol.t.push_back(t0);
  sol.y.push_back(y0);
  if (t_end == t0) return sol;

  std::vector<double> g_prev;
  for (const auto& ev : events) g_prev.push_back(ev(t0, y0));

  const double span = t_end - t0;
  const double hmax = o.max_step > 0.0 ? o.max_step : span;
  Vec k1 = f(t0, y0);
  double h = o.initial_step;
  if (!(h > 0.0)) {
    const double n0 = scaled_norm(y0, y0, o), n1 = scaled_norm(k1, y0, o);
    h = (n0 < 1e-5 || n1 < 1e-5) ? 1e-6 * span : 0.01 * n0 / n1;
  }
  h = std::min({h, hmax, span});

  double t = t0;
  Vec y = y0;
  long steps = 0;
  while (t < t_end) {
    if (++steps > o.max_steps) throw Error(Errc::stiffness, "maximum number of ODE steps exceeded");
    const double hmin = 1e-14 * std::max(1.0, std::fabs(t));
    if (h < hmin) throw Error(Errc::stiffness, "ODE step size underflow at t = " + std::to_string(t));
    bool last = false;
    if (t + h >= t_end) {
      h = t_end - t;
      last = true;
    }
    const Vec k2 = f(t + c2 * h, y + h * a21 * k1);
    const Vec k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const Vec k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vec y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const Vec k7 = f(t + h, y1);
    const Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const Vec ref = y.cwiseAbs().cwiseMax(y1.cwiseAbs());
    double en = scaled_norm(err, ref, o);
    if (!std::isfinite(en) || !y1.allFinite() || !k7.allFinite()) {
      ++sol.rejected;
      h *= 0.25;
      continue;
    }
    if (en > 1.0) {
      ++sol.rejected;
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
      continue;
    }

    DenseStep ds;
    ds.t0 = t;
    ds.h = h;
    ds.r1 = y;
    ds.r2 = y1 - y;
    ds.r3 = h * k1 - ds.r2;
    ds.r4 = ds.r2 - h * k7 - ds.r3;
    ds.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
    const double t1 = last ? t_end : t + h;

    // Event detection on the accepted step, refined by bisection on the dense output.
    int hit = -1;
    double t_hit = t1;
    for (std::size_t i = 0; i < events.size(); ++i) {
      const double g1 = events[i](t1, y1);
      if (g_prev[i] > 0.0 && g1 <= 0.0) {
        double lo = t, hi = t1;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::fabs(hi)); ++it) {
          const double mid = 0.5 * (lo + hi);
          if (events[i](mid, ds(mid)) > 0.0) lo = mid;
          else hi = mid;
        }
        if (hi < t_hit || hit < 0) {
          t_hit = hi;
          hit = static_cast<int>(i);
        }
      }
    }
    sol.dense.push_back(ds);
    if (hit >= 0) {
      sol.t.push_back(t_hit);
      sol.y.push_back(ds(t_hit));
      sol.event = hit;
      return sol;
    }
    for (std::size_t i = 0; i < events.size(); ++i) g_prev[i] = events[i](t1, y1);

    t = t1;
    y = y1;
    k1 = k7;
    sol.t.push_back(t);
    sol.y.push_back(y);
    const double fac = en == 0.0 ? 10.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 10.0);
    h = std::min(h * fac, hmax);
  }
  return sol;
}

}  // namespace dshock

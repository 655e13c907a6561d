#include "dshock/sticky.hpp"

#include <boost/accumulators/accumulators.hpp>
#include <boost/accumulators/statistics/stats.hpp>
#include <boost/accumulators/statistics/sum_kahan.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <tuple>
#include <unordered_map>

namespace dshock {

ParticleSystem::ParticleSystem(std::vector<double> positions, std::vector<double> velocities,
                               std::vector<double> masses, double time)
    : time_(time) {
  const std::size_t n = positions.size();
  if (velocities.size() != n || masses.size() != n)
    throw Error(Errc::dimension_mismatch, "positions, velocities and masses differ in length");
  p_.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    require_finite(positions[k], "particle position");
    require_finite(velocities[k], "particle velocity");
    if (!(masses[k] > 0.0) || !std::isfinite(masses[k])) throw Error(Errc::invalid_input, "particle masses must be positive");
    if (k > 0 && !(positions[k] > positions[k - 1]))
      throw Error(Errc::invalid_input, "particle positions must be strictly increasing");
    const int i = static_cast<int>(k);
    p_.push_back({positions[k], time, velocities[k], masses[k], i - 1, k + 1 < n ? i + 1 : -1, 0, true});
  }
  head_ = n > 0 ? 0 : -1;
}

void ParticleSystem::set_wall(double position) {
  if (head_ >= 0 && !(p_[static_cast<std::size_t>(head_)].x(time_) > position))
    throw Error(Errc::invalid_input, "wall must lie left of every particle");
  wall_ = position;
  queued_ = false;
}

std::size_t ParticleSystem::size() const {
  std::size_t n = 0;
  for (int i = head_; i >= 0; i = p_[static_cast<std::size_t>(i)].next) ++n;
  return n;
}

std::vector<double> ParticleSystem::positions() const {
  std::vector<double> out;
  for (int i = head_; i >= 0; i = p_[static_cast<std::size_t>(i)].next) out.push_back(p_[static_cast<std::size_t>(i)].x(time_));
  return out;
}

std::vector<double> ParticleSystem::velocities() const {
  std::vector<double> out;
  for (int i = head_; i >= 0; i = p_[static_cast<std::size_t>(i)].next) out.push_back(p_[static_cast<std::size_t>(i)].v);
  return out;
}

std::vector<double> ParticleSystem::masses() const {
  std::vector<double> out;
  for (int i = head_; i >= 0; i = p_[static_cast<std::size_t>(i)].next) out.push_back(p_[static_cast<std::size_t>(i)].m);
  return out;
}

// Compensated sums keep the conservation audit at the level of the merge arithmetic.
template <class Term>
double ParticleSystem::sum_live(double start, Term term) const {
  namespace acc = boost::accumulators;
  acc::accumulator_set<double, acc::stats<acc::tag::sum_kahan>> sum;
  sum(start);
  for (int i = head_; i >= 0; i = p_[static_cast<std::size_t>(i)].next) sum(term(p_[static_cast<std::size_t>(i)]));
  return acc::sum_kahan(sum);
}

double ParticleSystem::total_mass() const {
  return sum_live(wall_mass_, [](const Particle& q) { return q.m; });
}

double ParticleSystem::total_momentum() const {
  return sum_live(wall_momentum_, [](const Particle& q) { return q.m * q.v; });
}

double ParticleSystem::kinetic_energy() const {
  return sum_live(0.0, [](const Particle& q) { return 0.5 * q.m * q.v * q.v; });
}

void ParticleSystem::schedule(int i) {
  const auto& a = p_[static_cast<std::size_t>(i)];
  if (a.next >= 0) {
    const auto& b = p_[static_cast<std::size_t>(a.next)];
    if (a.v > b.v) {
      const double gap = b.x(time_) - a.x(time_);
      double dt = gap / (a.v - b.v);
      if (dt < -1e-12) throw Error(Errc::internal, "particles interpenetrated before their collision");
      dt = std::max(dt, 0.0);
      heap_.push_back({time_ + dt, i, a.next, a.version, b.version});
      std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
    }
  }
  if (wall_ && i == head_ && a.v < 0.0) {
    const double dt = std::max(0.0, (a.x(time_) - *wall_) / -a.v);
    heap_.push_back({time_ + dt, i, -1, a.version, 0});
    std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
  }
}

void ParticleSystem::initialise_queue() {
  heap_.clear();
  for (int i = head_; i >= 0; i = p_[static_cast<std::size_t>(i)].next) schedule(i);
  queued_ = true;
}

void ParticleSystem::run_until(double T) {
  if (!(T >= time_)) throw Error(Errc::invalid_parameter, "cannot run a particle system backwards in time");
  if (!queued_) initialise_queue();

  auto valid = [&](const Event& e) {
    const auto& a = p_[static_cast<std::size_t>(e.i)];
    if (!a.alive || a.version != e.vi) return false;
    if (e.j < 0) return e.i == head_;
    const auto& b = p_[static_cast<std::size_t>(e.j)];
    return b.alive && b.version == e.vj && a.next == e.j;
  };
  auto pop = [&] {
    std::pop_heap(heap_.begin(), heap_.end(), std::greater<>{});
    Event e = heap_.back();
    heap_.pop_back();
    return e;
  };

  std::vector<Event> group;
  std::unordered_map<int, int> absorbed;
  std::vector<int> survivors;
  while (!heap_.empty() && heap_.front().t <= T) {
    Event first = pop();
    if (!valid(first)) continue;
    if (first.t < time_ - 1e-12) throw Error(Errc::internal, "event queue produced a collision in the past");
    const double tc = std::max(first.t, time_);
    group.assign(1, first);
    // Collisions within 1e-13 of each other are one multi-particle event.
    while (!heap_.empty() && heap_.front().t <= tc + 1e-13) {
      Event e = pop();
      if (valid(e)) group.push_back(e);
    }
    time_ = tc;
    std::sort(group.begin(), group.end(), [&](const Event& a, const Event& b) {
      return p_[static_cast<std::size_t>(a.i)].x(tc) < p_[static_cast<std::size_t>(b.i)].x(tc);
    });
    absorbed.clear();
    survivors.clear();
    auto root = [&](int k) {
      for (auto it = absorbed.find(k); it != absorbed.end(); it = absorbed.find(k)) k = it->second;
      return k;
    };
    for (const Event& e : group) {
      if (e.j < 0) {
        auto& a = p_[static_cast<std::size_t>(e.i)];
        if (!a.alive || e.i != head_) continue;
        wall_mass_ += a.m;
        wall_momentum_ += a.m * a.v;
        a.alive = false;
        head_ = a.next;
        if (head_ >= 0) {
          p_[static_cast<std::size_t>(head_)].prev = -1;
          survivors.push_back(head_);
        }
        continue;
      }
      const int r = root(e.i);
      auto& a = p_[static_cast<std::size_t>(r)];
      auto& b = p_[static_cast<std::size_t>(e.j)];
      if (!a.alive || !b.alive || a.next != e.j) continue;
      const double m = a.m + b.m;
      const double x = (a.m * a.x(tc) + b.m * b.x(tc)) / m;
      a.v = (a.m * a.v + b.m * b.v) / m;
      a.m = m;
      a.x0 = x;
      a.t0 = tc;
      ++a.version;
      a.next = b.next;
      if (b.next >= 0) p_[static_cast<std::size_t>(b.next)].prev = r;
      b.alive = false;
      absorbed[e.j] = r;
      survivors.push_back(r);
      ++merges_;
    }
    std::sort(survivors.begin(), survivors.end());
    survivors.erase(std::unique(survivors.begin(), survivors.end()), survivors.end());
    for (int r : survivors) {
      const auto& a = p_[static_cast<std::size_t>(r)];
      if (!a.alive) continue;
      if (a.prev >= 0) schedule(a.prev);
      schedule(r);
    }
  }
  time_ = T;
}

namespace {

struct Seed {
  double x, v, m;
};

ParticleSystem from_seeds(std::vector<Seed> s) {
  std::sort(s.begin(), s.end(), [](const Seed& a, const Seed& b) { return a.x < b.x; });
  std::vector<double> x, v, m;
  for (const Seed& q : s) {
    if (!x.empty() && q.x <= x.back()) {
      // Coincident samples start as one particle.
      const double mm = m.back() + q.m;
      v.back() = (m.back() * v.back() + q.m * q.v) / mm;
      m.back() = mm;
      continue;
    }
    x.push_back(q.x);
    v.push_back(q.v);
    m.push_back(q.m);
  }
  return ParticleSystem(std::move(x), std::move(v), std::move(m));
}

double unit_double(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

std::vector<Seed> riemann_seeds(const RiemannData1D& d, double L, int N, std::mt19937_64* gen) {
  d.validate();
  if (N < 100) throw Error(Errc::undersampled, "at least 100 particles are required");
  if (!(L > 0.0)) throw Error(Errc::invalid_parameter, "half-width L must be positive");
  const int half = N / 2;
  const double dx = L / half;
  std::vector<Seed> s;
  s.reserve(static_cast<std::size_t>(2 * half + 1));
  for (int k = 0; k < half; ++k) {
    const double off = gen ? unit_double(*gen) : 0.5;
    if (d.rho_l > 0.0) s.push_back({-L + (k + off) * dx, d.u_l, d.rho_l * dx});
  }
  for (int k = 0; k < half; ++k) {
    const double off = gen ? unit_double(*gen) : 0.5;
    if (d.rho_r > 0.0) s.push_back({(k + off) * dx, d.u_r, d.rho_r * dx});
  }
  if (d.e0 > 0.0) s.push_back({0.0, *d.u_delta0, d.e0});
  if (s.empty()) throw Error(Errc::undersampled, "Riemann data carry no mass");
  return s;
}

}  // namespace

ParticleSystem sample_riemann(const RiemannData1D& d, double L, int N) {
  return from_seeds(riemann_seeds(d, L, N, nullptr));
}

ParticleSystem sample_riemann_random(const RiemannData1D& d, double L, int N, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  return from_seeds(riemann_seeds(d, L, N, &gen));
}

ClusterEstimate delta_cluster_estimate(ParticleSystem& ps, const std::vector<double>& times) {
  if (times.empty()) throw Error(Errc::invalid_parameter, "no sample times given");
  ClusterEstimate out;
  for (double t : times) {
    ps.run_until(t);
    const auto m = ps.masses();
    if (m.empty()) throw Error(Errc::not_converged, "no particles left");
    const auto v = ps.velocities();
    const auto x = ps.positions();
    const auto k = static_cast<std::size_t>(std::max_element(m.begin(), m.end()) - m.begin());
    std::vector<double> sorted = m;
    auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
    std::nth_element(sorted.begin(), mid, sorted.end());
    if (m.size() > 1 && !(m[k] >= 10.0 * *mid))
      throw Error(Errc::not_converged, "no dominant cluster (heaviest < 10x median particle mass)");
    out.times.push_back(t);
    out.mass.push_back(m[k]);
    out.position.push_back(x[k]);
    out.u_delta = v[k];
  }
  return out;
}

ParticleSystem radial_shells(const RadialField& inner, const RadialField& outer, const ShellConfig& c) {
  if (c.n < 1) throw Error(Errc::invalid_dimension, "dimension must be >= 1");
  if (c.N < 1) throw Error(Errc::undersampled, "at least one shell is required");
  if (!(c.r_hi > c.r_lo)) throw Error(Errc::invalid_parameter, "annulus must be a nonempty interval");
  if (c.n >= 2 && c.r_lo < c.r_min) throw Error(Errc::invalid_parameter, "annulus must exclude r < r_min");
  const double omega = unit_sphere_measure(c.n);
  const double dr = (c.r_hi - c.r_lo) / c.N;
  std::vector<Seed> s;
  s.reserve(static_cast<std::size_t>(c.N) + 1);
  auto add = [&](const RadialField& f, double a, double b) {
    const double r = 0.5 * (a + b);
    const double m = f.rho(r, 0.0) * omega * std::pow(r, c.n - 1) * (b - a);
    if (m > 0.0) s.push_back({r, f.u(r, 0.0), m});
  };
  for (int k = 0; k < c.N; ++k) {
    const double a = c.r_lo + k * dr, b = c.r_lo + (k + 1) * dr;
    // A cell containing the front is split so each side keeps its own state.
    if (a < c.phi0 && c.phi0 < b) {
      add(inner, a, c.phi0);
      add(outer, c.phi0, b);
    } else {
      add(b <= c.phi0 ? inner : outer, a, b);
    }
  }
  if (c.e0 > 0.0) s.push_back({c.phi0, c.u_delta0, c.e0 * omega * std::pow(c.phi0, c.n - 1)});
  if (s.empty()) throw Error(Errc::undersampled, "radial data carry no mass");
  ParticleSystem ps = from_seeds(std::move(s));
  if (c.n >= 2) ps.set_wall(c.r_min);
  return ps;
}

}  // namespace dshock

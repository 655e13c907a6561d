#pragma once

// Event-driven sticky-particle dynamics on a line (or along the radius for
// spherically symmetric shells). Particles move freely and merge on contact,
// conserving mass and momentum exactly.

#include "dshock/common.hpp"
#include "dshock/riemann1d.hpp"
#include "dshock/spherical.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace dshock {

class ParticleSystem {
 public:
  ParticleSystem() = default;
  // Positions must be strictly increasing and masses positive.
  ParticleSystem(std::vector<double> positions, std::vector<double> velocities, std::vector<double> masses,
                 double time = 0.0);

  // Particles reaching `position` while moving left are absorbed by a wall.
  void set_wall(double position);

  double time() const { return time_; }
  std::size_t size() const;  // live particles
  std::vector<double> positions() const;
  std::vector<double> velocities() const;
  std::vector<double> masses() const;

  double total_mass() const;      // including wall-absorbed mass
  double total_momentum() const;  // including wall-absorbed momentum
  double kinetic_energy() const;  // live particles only
  double wall_mass() const { return wall_mass_; }
  bool truncated() const { return wall_mass_ > 0.0; }
  std::uint64_t merges() const { return merges_; }

  // Advances to time T processing every collision on the way.
  void run_until(double T);

 private:
  struct Particle {
    double x0, t0, v, m;
    int prev, next;
    std::uint32_t version;
    bool alive;
    double x(double t) const { return x0 + v * (t - t0); }
  };
  template <class Term>
  double sum_live(double start, Term term) const;

  struct Event {
    double t;
    int i, j;  // j < 0 marks a wall event of particle i
    std::uint32_t vi, vj;
    bool operator>(const Event& o) const { return t > o.t; }
  };

  void schedule(int i);
  void initialise_queue();

  std::vector<Particle> p_;
  std::vector<Event> heap_;
  int head_ = -1;
  double time_ = 0.0;
  std::optional<double> wall_;
  double wall_mass_ = 0.0, wall_momentum_ = 0.0;
  std::uint64_t merges_ = 0;
  bool queued_ = false;
};

// Midpoint sampling of the Riemann data on [-L, L] with N particles (N/2 per
// side, spacing 2L/N, mass rho * 2L/N). Empty (vacuum) sides carry no particles.
// An initial point mass e0 at the origin is added when present.
ParticleSystem sample_riemann(const RiemannData1D& d, double L, int N);

// Same masses at uniformly random positions inside each cell (seeded).
ParticleSystem sample_riemann_random(const RiemannData1D& d, double L, int N, std::uint64_t seed);

struct ClusterEstimate {
  double u_delta = 0.0;            // velocity of the dominant cluster at the last time
  std::vector<double> times;
  std::vector<double> mass;        // dominant-cluster mass at each time
  std::vector<double> position;    // dominant-cluster position at each time
};

// Runs ps through the given increasing times and tracks the heaviest particle.
// Throws not_converged when it is lighter than 10x the median particle mass.
ClusterEstimate delta_cluster_estimate(ParticleSystem& ps, const std::vector<double>& times);

struct ShellConfig {
  int n = 3;
  int N = 100000;   // shells over the annulus
  double r_lo = 0.0, r_hi = 1.0;
  double phi0 = 0.5;  // initial front radius: inner field below, outer above
  double e0 = 0.0;
  double u_delta0 = 0.0;
  double r_min = 1e-3;
};

// Radial sticky shells with masses rho(r_i) |S^{n-1}| r_i^{n-1} dr at cell
// midpoints plus a point shell of mass e0 |S^{n-1}| phi0^{n-1} at the front.
// The cell containing phi0 is split in two. A wall absorbs shells at r_min.
ParticleSystem radial_shells(const RadialField& inner, const RadialField& outer, const ShellConfig& cfg);

}  // namespace dshock

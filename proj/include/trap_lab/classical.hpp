#pragma once

// Classical point particle with a precessing magnetic moment in the paraxial
// vortex field plus axial field, written in the frame co-rotating with the
// wave (the frame in which the quantum Hamiltonian is time independent).
//
// State: position xi, velocity u = d xi/d tau, unit moment direction n~.
//   xi' = u
//   u'  = (gamma/2) (n~_y, n~_x, xi_x n~_x - xi_y n~_y)
//   n~' = n~ x (alpha xi_y, alpha xi_x, beta - u_z)
// Conserved: |n~|, K, J and P_z below. The lab-frame moment is n~ rotated
// about z by zeta = (alpha/gamma) tau - xi_z.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "trap_lab/error.hpp"
#include "trap_lab/fields.hpp"

namespace trap_lab {

struct ClassicalState {
  Vec3 position{};
  Vec3 velocity{};
  Vec3 spin_dir{0, 0, 1};
  double time = 0;
};

namespace detail {

struct Deriv {
  Vec3 dx, du, dn;
};

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline Deriv classical_rhs(const ClassicalState& s, const DimensionlessParams& p) {
  const auto& x = s.position;
  const auto& n = s.spin_dir;
  const Vec3 h{p.alpha * x[1], p.alpha * x[0], p.beta - s.velocity[2]};
  return {s.velocity,
          {p.gamma / 2 * n[1], p.gamma / 2 * n[0], p.gamma / 2 * (x[0] * n[0] - x[1] * n[1])},
          cross(n, h)};
}

inline ClassicalState advance(const ClassicalState& s, const Deriv& d, double dt) {
  ClassicalState o = s;
  for (int j = 0; j < 3; ++j) {
    o.position[j] += dt * d.dx[j];
    o.velocity[j] += dt * d.du[j];
    o.spin_dir[j] += dt * d.dn[j];
  }
  o.time += dt;
  return o;
}

inline bool finite_state(const ClassicalState& s) {
  for (int j = 0; j < 3; ++j)
    if (!std::isfinite(s.position[j]) || !std::isfinite(s.velocity[j]) || !std::isfinite(s.spin_dir[j]))
      return false;
  return std::isfinite(s.time);
}

}  // namespace detail

inline ClassicalState rk4_step(const ClassicalState& s, const DimensionlessParams& p, double dt) {
  using detail::advance;
  const auto k1 = detail::classical_rhs(s, p);
  const auto k2 = detail::classical_rhs(advance(s, k1, dt / 2), p);
  const auto k3 = detail::classical_rhs(advance(s, k2, dt / 2), p);
  const auto k4 = detail::classical_rhs(advance(s, k3, dt), p);
  ClassicalState o = s;
  for (int j = 0; j < 3; ++j) {
    o.position[j] += dt / 6 * (k1.dx[j] + 2 * k2.dx[j] + 2 * k3.dx[j] + k4.dx[j]);
    o.velocity[j] += dt / 6 * (k1.du[j] + 2 * k2.du[j] + 2 * k3.du[j] + k4.du[j]);
    o.spin_dir[j] += dt / 6 * (k1.dn[j] + 2 * k2.dn[j] + 2 * k3.dn[j] + k4.dn[j]);
  }
  const double norm = std::sqrt(o.spin_dir[0] * o.spin_dir[0] + o.spin_dir[1] * o.spin_dir[1] +
                                o.spin_dir[2] * o.spin_dir[2]);
  for (double& v : o.spin_dir) v /= norm;
  o.time = s.time + dt;
  return o;
}

struct Trajectory {
  std::vector<ClassicalState> samples;
  bool aborted = false;        // a non-finite state was produced
  std::size_t last_valid = 0;  // step index of the last finite state
};

// Integrates `steps` RK4 steps, keeping every `stride`-th state (and the last).
inline Trajectory integrate_trajectory(const ClassicalState& initial, const DimensionlessParams& p, double dt,
                                       std::size_t steps, std::size_t stride = 1) {
  if (!(dt > 0)) throw config_error("classical.dt must be positive");
  if (stride == 0) stride = 1;
  Trajectory t;
  t.samples.reserve(steps / stride + 2);
  ClassicalState s = initial;
  t.samples.push_back(s);
  for (std::size_t i = 1; i <= steps; ++i) {
    const auto next = rk4_step(s, p, dt);
    if (!detail::finite_state(next)) {
      t.aborted = true;
      if (t.samples.back().time != s.time) t.samples.push_back(s);
      return t;
    }
    s = next;
    t.last_valid = i;
    if (i % stride == 0 || i == steps) t.samples.push_back(s);
  }
  return t;
}

// K = (alpha/2gamma)|u|^2 - (1/2)(alpha xi_y n_x + alpha xi_x n_y + beta n_z)
inline double invariant_k(const ClassicalState& s, const DimensionlessParams& p) {
  const auto& u = s.velocity;
  const auto& x = s.position;
  const auto& n = s.spin_dir;
  return p.alpha / (2 * p.gamma) * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]) -
         0.5 * (p.alpha * x[1] * n[0] + p.alpha * x[0] * n[1] + p.beta * n[2]);
}

// Angular invariant (alpha/gamma)(xi_x u_y - xi_y u_x) - n_z/2.
inline double invariant_j(const ClassicalState& s, const DimensionlessParams& p) {
  return p.alpha / p.gamma * (s.position[0] * s.velocity[1] - s.position[1] * s.velocity[0]) -
         s.spin_dir[2] / 2;
}

// Axial invariant u_z - (gamma/2alpha) n_z.
inline double invariant_pz(const ClassicalState& s, const DimensionlessParams& p) {
  return s.velocity[2] - p.gamma / (2 * p.alpha) * s.spin_dir[2];
}

inline Vec3 lab_spin(const ClassicalState& s, const DimensionlessParams& p) {
  const double zeta = p.alpha / p.gamma * s.time - s.position[2];
  const double c = std::cos(zeta), sn = std::sin(zeta);
  const auto& n = s.spin_dir;
  return {c * n[0] - sn * n[1], sn * n[0] + c * n[1], n[2]};
}

// Moment direction anti-aligned with the local effective field, the
// low-field-seeking (trapped) orientation.
inline Vec3 trapped_spin(const Vec3& position, const Vec3& velocity, const DimensionlessParams& p) {
  const Vec3 h{p.alpha * position[1], p.alpha * position[0], p.beta - velocity[2]};
  const double norm = std::sqrt(h[0] * h[0] + h[1] * h[1] + h[2] * h[2]);
  if (!(norm > 0)) return {0, 0, 1};
  return {-h[0] / norm, -h[1] / norm, -h[2] / norm};
}

struct StabilityMetrics {
  double radial_spread = 0;  // max - min of rho over the run
  double circularity = 0;    // 1 - sigma_rho/mean_rho over the trailing half, in [0, 1]
  bool escaped = false;
};

inline StabilityMetrics stability_metrics(const Trajectory& t, double escape_radius) {
  StabilityMetrics m;
  if (t.samples.empty()) return m;
  double lo = INFINITY, hi = 0;
  for (const auto& s : t.samples) {
    const double rho = std::hypot(s.position[0], s.position[1]);
    lo = std::min(lo, rho);
    hi = std::max(hi, rho);
    if (rho > escape_radius) m.escaped = true;
  }
  m.radial_spread = hi - lo;
  if (m.escaped || t.aborted) {
    // An orbit that leaves the beam is not circular, whatever its curvature.
    m.escaped = true;
    m.circularity = 0;
    return m;
  }
  const std::size_t start = t.samples.size() / 2;
  double sum = 0, sum2 = 0;
  const auto count = static_cast<double>(t.samples.size() - start);
  for (std::size_t i = start; i < t.samples.size(); ++i) {
    const double rho = std::hypot(t.samples[i].position[0], t.samples[i].position[1]);
    sum += rho;
    sum2 += rho * rho;
  }
  const double mean = sum / count;
  const double var = std::max(0.0, sum2 / count - mean * mean);
  m.circularity = mean > 0 ? std::clamp(1.0 - std::sqrt(var) / mean, 0.0, 1.0) : 0.0;
  return m;
}

struct SweepSettings {
  double dt = 0.01;
  std::size_t steps = 20000;
  double escape_radius = 4 * std::numbers::pi;
  bool align_spin = true;  // re-orient the initial moment against h(beta)
  unsigned threads = 1;
};

struct SweepEntry {
  double beta;
  StabilityMetrics metrics;
};

// One trajectory per beta, run in parallel; each result depends only on its
// own inputs, so the output does not depend on the thread count.
inline std::vector<SweepEntry> beta_sweep(const std::vector<double>& betas, const ClassicalState& initial,
                                          const DimensionlessParams& params, const SweepSettings& cfg) {
  if (betas.empty()) throw config_error("classical.betas must be nonempty");
  std::vector<SweepEntry> out(betas.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < betas.size(); i = next++) {
      DimensionlessParams p = params;
      p.beta = betas[i];
      ClassicalState s = initial;
      if (cfg.align_spin) s.spin_dir = trapped_spin(s.position, s.velocity, p);
      const auto traj = integrate_trajectory(s, p, cfg.dt, cfg.steps, 1);
      out[i] = {betas[i], stability_metrics(traj, cfg.escape_radius)};
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(betas.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& t, const DimensionlessParams& p) {
  os << "tau,x,y,z,vx,vy,vz,sx,sy,sz\n";
  char buf[512];
  for (const auto& s : t.samples) {
    const auto n = lab_spin(s, p);
    std::snprintf(buf, sizeof buf, "%.15g,%.15g,%.15g,%.15g,%.15g,%.15g,%.15g,%.15g,%.15g,%.15g\n", s.time,
                  s.position[0], s.position[1], s.position[2], s.velocity[0], s.velocity[1], s.velocity[2], n[0],
                  n[1], n[2]);
    os << buf;
  }
}

}  // namespace trap_lab

#pragma once

// Scenario-level pipelines shared by the command-line tool and the tests.

#include <string>
#include <thread>
#include <vector>

#include "trap_lab/channels.hpp"
#include "trap_lab/classical.hpp"
#include "trap_lab/scenario.hpp"
#include "trap_lab/spectra.hpp"
#include "trap_lab/tunneling.hpp"

namespace trap_lab {

inline ChannelDecomposition build_decomposition(const Scenario& s) {
  const auto grid = uniform_grid(s.grid.xi_min, s.grid.xi_max, s.grid.step);
  return corrected_potentials(decompose(grid, s.params, s.variant), s.params);
}

struct BoundStateRun {
  ChannelDecomposition channels;
  BoundStateResult result;
  AiryBoundState airy;
  bool has_airy = false;
};

inline BoundStateRun run_boundstate(const Scenario& s) {
  BoundStateRun r;
  r.channels = build_decomposition(s);
  r.result = solve_trap(r.channels, s.params, s.states);
  if (s.params.alpha * s.params.gamma > 0) {
    r.airy = airy_bound_state(s.params);
    r.has_airy = true;
  }
  return r;
}

struct TunnelingRun {
  BoundStateRun bound;
  ContinuumState continuum;
  TunnelingReport report;
};

inline TunnelingRun run_tunneling(const Scenario& s) {
  TunnelingRun r;
  r.bound = run_boundstate(s);
  if (r.bound.result.states.empty()) throw numerical_error("tunneling: " + r.bound.result.diagnostic);
  if (!r.bound.has_airy) throw domain_error("tunneling: requires alpha*gamma > 0");
  auto& rep = r.report;
  rep.scenario = s.id;
  rep.energy = r.bound.result.states.front().energy;
  rep.geometry = barrier_geometry(r.bound.channels.grid, r.bound.channels.v_tilde_plus, rep.energy);
  rep.barrier = barrier_rate(rep.geometry, s.params);
  rep.z_w = s.z_w ? *s.z_w : default_z_w(s.params);
  // The spin-flip estimate uses the Airy-channel pair at the resonance label
  // a = z0, where the continuum and bound states share one energy.
  r.continuum = continuum_state(r.bound.airy.z0, rep.z_w, s.params);
  rep.channel = channel_rate(r.bound.airy, r.continuum, s.params);
  return r;
}

struct ClassicalRun {
  Trajectory trajectory;
  std::vector<SweepEntry> sweep;
};

inline ClassicalRun run_classical(const Scenario& s, unsigned threads) {
  if (!s.classical) throw config_error("missing required field 'classical' for the classical command");
  const auto& c = *s.classical;
  ClassicalRun r;
  ClassicalState init = c.initial;
  if (c.trapped_spin) init.spin_dir = trapped_spin(init.position, init.velocity, s.params);
  r.trajectory = integrate_trajectory(init, s.params, c.dt, c.steps, c.stride);
  if (!c.betas.empty()) {
    SweepSettings cfg;
    cfg.dt = c.dt;
    cfg.steps = c.steps;
    cfg.escape_radius = c.escape_radius;
    cfg.align_spin = c.trapped_spin;
    cfg.threads = threads;
    r.sweep = beta_sweep(c.betas, c.trapped_spin ? c.initial : init, s.params, cfg);
  }
  return r;
}

inline unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace trap_lab

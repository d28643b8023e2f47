// trap_lab: command-line front end.
//
//   trap_lab potentials|boundstate|tunneling|classical --scenario FILE --out DIR
//            [--grid-step H] [--variant paraxial|full]
//   trap_lab reproduce --out DIR [--grid-step H] [--variant paraxial|full]
//
// Exit codes: 0 success, 1 numerical failure, 2 configuration error.

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "trap_lab/trap_lab.hpp"

namespace fs = std::filesystem;
using namespace trap_lab;
using output::ordered_json;
using output::round15;

namespace {

struct Options {
  std::string scenario_path;
  std::string out_dir = ".";
  std::optional<double> grid_step;
  std::optional<std::string> variant;
};

unsigned thread_cap() {
  const char* env = std::getenv("TRAP_LAB_THREADS");
  if (env == nullptr || *env == '\0') return default_threads();
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw config_error("TRAP_LAB_THREADS must be a positive integer");
  return static_cast<unsigned>(v);
}

void apply_overrides(Scenario& s, const Options& o) {
  if (o.grid_step) {
    if (!(*o.grid_step > 0)) throw config_error("--grid-step must be positive");
    s.grid.step = *o.grid_step;
  }
  if (o.variant) s.variant = parse_variant(*o.variant);
}

// Overrides change the results, so they are part of the hashed input.
std::string hashed_input(const Scenario& s, const Options& o) {
  std::string text = s.source;
  if (o.grid_step) text += "\n--grid-step=" + output::fmt(*o.grid_step);
  if (o.variant) text += "\n--variant=" + *o.variant;
  return text;
}

Scenario load(const Options& o) {
  if (o.scenario_path.empty()) throw config_error("--scenario is required for this command");
  auto s = load_scenario(o.scenario_path);
  apply_overrides(s, o);
  return s;
}

ordered_json header(const Scenario& s, const std::string& hash) {
  ordered_json j;
  j["scenario"] = s.id;
  j["config_hash"] = hash;
  return j;
}

void cmd_potentials(const Options& o) {
  const auto s = load(o);
  const auto hash = output::content_hash(hashed_input(s, o));
  const auto d = build_decomposition(s);
  std::ostringstream os;
  os << output::csv_preamble(s.id, hash);
  write_curves_csv(os, d);
  output::atomic_write(fs::path(o.out_dir) / (s.id + ".potentials.csv"), os.str());
}

ordered_json state_json(const BoundState& st, const Scenario& s) {
  ordered_json j;
  j["energy"] = round15(st.energy);
  j["nodes"] = st.nodes;
  j["grid_step"] = round15(s.grid.step);
  j["variant"] = to_string(s.variant);
  return j;
}

void cmd_boundstate(const Options& o) {
  const auto s = load(o);
  const auto hash = output::content_hash(hashed_input(s, o));
  const auto run = run_boundstate(s);
  if (run.result.states.empty()) throw numerical_error("boundstate: " + run.result.diagnostic);
  const auto& ground = run.result.states.front();
  auto j = header(s, hash);
  const auto ground_json = state_json(ground, s);
  for (const auto& item : ground_json.items()) j[item.key()] = item.value();
  j["states"] = ordered_json::array();
  for (const auto& st : run.result.states) j["states"].push_back(state_json(st, s));
  if (!run.result.diagnostic.empty()) j["diagnostic"] = run.result.diagnostic;
  if (run.has_airy) j["airy_energy"] = round15(run.airy.energy);
  output::atomic_write(fs::path(o.out_dir) / (s.id + ".boundstate.json"), output::dump(j));

  std::ostringstream os;
  os << output::csv_preamble(s.id, hash);
  write_wavefunction_csv(os, ground);
  output::atomic_write(fs::path(o.out_dir) / (s.id + ".wavefunction.csv"), os.str());
}

ordered_json tunneling_json(const TunnelingReport& r, const std::string& hash) {
  ordered_json j;
  j["scenario"] = r.scenario;
  j["config_hash"] = hash;
  j["energy"] = round15(r.energy);
  j["v_max"] = round15(r.geometry.v_max);
  j["v_min"] = round15(r.geometry.v_min);
  j["xi_d"] = round15(r.geometry.xi_d);
  j["theta_bound"] = round15(r.barrier.theta_bound);
  j["hits_per_omega"] = round15(r.barrier.hits_per_omega);
  j["barrier_rate"] = round15(r.barrier.rate);
  j["channel_rate"] = round15(r.channel.rate);
  j["z_w"] = round15(r.z_w);
  j["log10_theta_bound"] = round15(r.barrier.log10_theta);
  j["xi_left"] = round15(r.geometry.xi_left);
  j["xi_right"] = round15(r.geometry.xi_right);
  j["xi_exit"] = round15(r.geometry.xi_exit);
  j["channel_prefactor"] = round15(r.channel.prefactor);
  j["channel_integral"] = round15(r.channel.integral);
  return j;
}

void cmd_tunneling(const Options& o) {
  const auto s = load(o);
  const auto hash = output::content_hash(hashed_input(s, o));
  const auto run = run_tunneling(s);
  output::atomic_write(fs::path(o.out_dir) / (s.id + ".tunneling.json"),
                       output::dump(tunneling_json(run.report, hash)));
  std::ostringstream os;
  os << output::csv_preamble(s.id, hash) << "z,v\n";
  const auto& v = run.continuum;
  const double z_end = v.z_w + 8 * std::numbers::pi / v.q;
  const int n = static_cast<int>(std::ceil(z_end / 0.01));
  for (int i = 0; i <= n; ++i) {
    const double z = 0.01 * i;
    os << output::fmt(z) << ',' << output::fmt(v.value(z)) << '\n';
  }
  output::atomic_write(fs::path(o.out_dir) / (s.id + ".continuum.csv"), os.str());
}

void cmd_classical(const Options& o) {
  const auto s = load(o);
  const auto hash = output::content_hash(hashed_input(s, o));
  const auto run = run_classical(s, thread_cap());
  std::ostringstream os;
  os << output::csv_preamble(s.id, hash);
  write_trajectory_csv(os, run.trajectory, s.params);
  output::atomic_write(fs::path(o.out_dir) / (s.id + ".trajectory.csv"), os.str());
  if (run.trajectory.aborted) {
    std::ostringstream msg;
    msg << "classical: non-finite state after step " << run.trajectory.last_valid;
    throw numerical_error(msg.str());
  }
  if (!run.sweep.empty()) {
    auto j = header(s, hash);
    j["sweep"] = ordered_json::array();
    for (const auto& e : run.sweep) {
      ordered_json row;
      row["beta"] = round15(e.beta);
      row["radial_spread"] = round15(e.metrics.radial_spread);
      row["circularity"] = round15(e.metrics.circularity);
      row["escaped"] = e.metrics.escaped;
      j["sweep"].push_back(row);
    }
    output::atomic_write(fs::path(o.out_dir) / (s.id + ".sweep.json"), output::dump(j));
  }
}

// Embedded reproduction scenarios.
const std::vector<std::string>& reproduction_sources() {
  static const std::vector<std::string> sources = {
      R"({"id": "set1", "preset": "set1", "variant": "full"})",
      R"({"id": "set2", "preset": "set2", "variant": "full"})",
      R"({"id": "set1_beta_tuned", "preset": "set1", "beta": 0.01, "variant": "full"})",
  };
  return sources;
}

enum class Check { interval, factor, decade, upper };

struct Expectation {
  std::string scenario;
  std::string quantity;
  double reference;
  Check kind;
  double lo, hi;  // interval bounds, or the factor for factor checks
};

const std::vector<Expectation>& expectations() {
  static const std::vector<Expectation> e = {
      {"set1", "ground_energy", 0.67, Check::interval, 0.5, 0.9},
      {"set1", "airy_energy", 0.3632, Check::interval, 0.3631, 0.3633},
      {"set1", "v_max", 1.79, Check::interval, 1.74, 1.84},
      {"set1", "xi_d", 3.12, Check::interval, 2.97, 3.27},
      {"set1", "log10_theta_bound", -35.2, Check::interval, -36.2, -34.2},
      {"set1", "barrier_rate", 1e-38, Check::upper, 0, 0},
      {"set1", "channel_rate", 5.1e-7, Check::factor, 3, 0},
      {"set2", "ground_energy", 1.28, Check::interval, 1.0, 1.5},
      {"set2", "v_max", 1.55, Check::interval, 1.50, 1.60},
      {"set2", "xi_d", 2.21, Check::interval, 2.06, 2.36},
      {"set2", "log10_theta_bound", -7.08, Check::interval, -7.58, -6.58},
      {"set2", "barrier_rate", 6.6e-11, Check::decade, 0, 0},
      {"set2", "channel_rate", 7.2e-6, Check::factor, 3, 0},
      {"set1_beta_tuned", "channel_rate", 1.5e-9, Check::factor, 3, 0},
  };
  return e;
}

bool passes(const Expectation& e, double v) {
  switch (e.kind) {
    case Check::interval:
      return v >= e.lo && v <= e.hi;
    case Check::factor:
      return v >= e.reference / e.lo && v <= e.reference * e.lo;
    case Check::decade:
      return std::fabs(std::log10(v / e.reference)) <= 1.0;
    case Check::upper:
      return v <= e.reference;
  }
  return false;
}

std::string tolerance_text(const Expectation& e) {
  switch (e.kind) {
    case Check::interval:
      return "[" + output::fmt(e.lo) + ", " + output::fmt(e.hi) + "]";
    case Check::factor:
      return "factor " + output::fmt(e.lo);
    case Check::decade:
      return "one decade";
    case Check::upper:
      return "<= " + output::fmt(e.reference);
  }
  return "";
}

double lookup(const TunnelingRun& r, const std::string& q) {
  const auto& rep = r.report;
  if (q == "ground_energy") return rep.energy;
  if (q == "airy_energy") return r.bound.airy.energy;
  if (q == "v_max") return rep.geometry.v_max;
  if (q == "xi_d") return rep.geometry.xi_d;
  if (q == "log10_theta_bound") return rep.barrier.log10_theta;
  if (q == "barrier_rate") return rep.barrier.rate;
  if (q == "channel_rate") return rep.channel.rate;
  throw error("unknown quantity " + q);
}

void cmd_reproduce(const Options& o) {
  std::vector<Scenario> scenarios;
  std::string combined;
  for (const auto& src : reproduction_sources()) {
    auto s = parse_scenario(src);
    apply_overrides(s, o);
    combined += hashed_input(s, o) + "\n";
    scenarios.push_back(std::move(s));
  }
  const auto hash = output::content_hash(combined);

  std::vector<std::optional<TunnelingRun>> runs(scenarios.size());
  std::vector<std::string> failures(scenarios.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      try {
        runs[i] = run_tunneling(scenarios[i]);
      } catch (const config_error&) {
        throw;
      } catch (const error& e) {
        failures[i] = e.what();
      }
    }
  };
  const unsigned n = std::min<unsigned>(thread_cap(), static_cast<unsigned>(scenarios.size()));
  std::vector<std::thread> pool;
  std::exception_ptr pending;
  std::mutex m;
  auto guarded = [&]() {
    try {
      worker();
    } catch (...) {
      std::lock_guard<std::mutex> lk(m);
      if (!pending) pending = std::current_exception();
    }
  };
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(guarded);
  guarded();
  for (auto& t : pool) t.join();
  if (pending) std::rethrow_exception(pending);
  for (std::size_t i = 0; i < scenarios.size(); ++i)
    if (!runs[i]) throw numerical_error("reproduce: scenario " + scenarios[i].id + ": " + failures[i]);

  ordered_json j;
  j["scenario"] = "reproduce";
  j["config_hash"] = hash;
  j["rows"] = ordered_json::array();
  std::ostringstream csv;
  csv << output::csv_preamble("reproduce", hash) << "scenario,quantity,value,reference,tolerance,pass\n";
  int failed = 0;
  for (const auto& e : expectations()) {
    std::size_t idx = 0;
    while (scenarios[idx].id != e.scenario) ++idx;
    const double v = lookup(*runs[idx], e.quantity);
    const bool ok = passes(e, v);
    failed += ok ? 0 : 1;
    ordered_json row;
    row["scenario"] = e.scenario;
    row["quantity"] = e.quantity;
    row["value"] = round15(v);
    row["reference"] = e.reference;
    row["tolerance"] = tolerance_text(e);
    row["pass"] = ok;
    j["rows"].push_back(row);
    csv << e.scenario << ',' << e.quantity << ',' << output::fmt(v) << ',' << output::fmt(e.reference) << ",\""
        << tolerance_text(e) << "\"," << (ok ? "pass" : "FAIL") << '\n';
    std::cout << (ok ? "pass " : "FAIL ") << e.scenario << ' ' << e.quantity << " = " << output::fmt(v)
              << " (reference " << output::fmt(e.reference) << ", " << tolerance_text(e) << ")\n";
  }
  j["failed"] = failed;
  output::atomic_write(fs::path(o.out_dir) / "reproduce.json", output::dump(j));
  output::atomic_write(fs::path(o.out_dir) / "reproduce.csv", csv.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trap_lab: spin-1/2 particle in an optical vortex plus axial field"};
  app.require_subcommand(1);
  Options opt;
  double grid_step = 0;
  std::string variant;

  auto add_common = [&](CLI::App* sub, bool needs_scenario) {
    auto* sc = sub->add_option("--scenario", opt.scenario_path, "scenario JSON file");
    if (needs_scenario) sc->required();
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--grid-step", grid_step, "radial grid step (overrides the scenario)");
    sub->add_option("--variant", variant, "paraxial or full (overrides the scenario)");
  };
  std::vector<std::pair<CLI::App*, void (*)(const Options&)>> commands = {
      {app.add_subcommand("potentials", "channel potentials on the radial grid"), cmd_potentials},
      {app.add_subcommand("boundstate", "bound states of the binding channel"), cmd_boundstate},
      {app.add_subcommand("tunneling", "barrier and spin-flip tunnelling rates"), cmd_tunneling},
      {app.add_subcommand("classical", "classical trajectory and beta sweep"), cmd_classical},
      {app.add_subcommand("reproduce", "reference table for the built-in parameter sets"), cmd_reproduce},
  };
  for (auto& [sub, fn] : commands) add_common(sub, fn != cmd_reproduce);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "trap_lab: configuration error: " << e.what() << "\n";
    return 2;
  }

  try {
    for (auto& [sub, fn] : commands) {
      if (!sub->parsed()) continue;
      if (sub->count("--grid-step") > 0) opt.grid_step = grid_step;
      if (sub->count("--variant") > 0) opt.variant = variant;
      thread_cap();  // validate the environment before doing any work
      fn(opt);
    }
  } catch (const config_error& e) {
    std::cerr << "trap_lab: configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "trap_lab: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

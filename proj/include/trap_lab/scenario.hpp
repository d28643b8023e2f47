#pragma once

// Scenario files (JSON). Parameters come from an embedded preset (optionally
// overridden key by key), from explicit alpha/beta/gamma/kappa_z/m, or from a
// `physical` block of SI quantities.

#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "trap_lab/channels.hpp"
#include "trap_lab/classical.hpp"
#include "trap_lab/error.hpp"
#include "trap_lab/fields.hpp"

namespace trap_lab {

struct GridSpec {
  double xi_min = 1e-3;
  double xi_max = 60.0;
  double step = 1e-3;
};

struct ClassicalSpec {
  ClassicalState initial;
  bool trapped_spin = true;  // initial moment anti-aligned with the local field
  double dt = 0.01;
  std::size_t steps = 20000;
  std::size_t stride = 10;  // trajectory CSV sampling
  double escape_radius = 4 * std::numbers::pi;
  std::vector<double> betas;
};

struct Scenario {
  std::string id;
  DimensionlessParams params;
  Variant variant = Variant::full;
  GridSpec grid;
  std::optional<double> z_w;
  int states = 3;
  std::optional<ClassicalSpec> classical;
  std::string source;  // raw config text, hashed into every output
};

inline std::optional<DimensionlessParams> find_preset(const std::string& name) {
  if (name == "set1") return presets::set1();
  if (name == "set2") return presets::set2();
  if (name == "set1_beta_tuned") {
    auto p = presets::set1();
    p.beta = 0.01;
    return p;
  }
  return std::nullopt;
}

namespace detail {

using json = nlohmann::json;

// Unknown keys are rejected so that a misspelt field cannot fall back to a
// default silently.
inline void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& path) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || item.key() == a;
    if (!ok) throw config_error("unknown field '" + path + item.key() + "'");
  }
}

inline double get_number(const json& j, const std::string& key, const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end()) throw config_error("missing required field '" + path + key + "'");
  if (!it->is_number()) throw config_error("field '" + path + key + "' must be a number");
  return it->get<double>();
}

inline double opt_number(const json& j, const std::string& key, double fallback, const std::string& path) {
  return j.contains(key) ? get_number(j, key, path) : fallback;
}

inline int get_integer(const json& j, const std::string& key, const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end()) throw config_error("missing required field '" + path + key + "'");
  if (!it->is_number_integer()) throw config_error("field '" + path + key + "' must be an integer");
  return it->get<int>();
}

inline Vec3 get_vec3(const json& j, const std::string& key, const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end()) throw config_error("missing required field '" + path + key + "'");
  if (!it->is_array() || it->size() != 3) throw config_error("field '" + path + key + "' must be a 3-element array");
  Vec3 v{};
  for (int i = 0; i < 3; ++i) {
    if (!(*it)[i].is_number()) throw config_error("field '" + path + key + "' must contain numbers");
    v[i] = (*it)[i].get<double>();
  }
  return v;
}

inline ClassicalSpec parse_classical(const json& c) {
  if (!c.is_object()) throw config_error("field 'classical' must be an object");
  ClassicalSpec s;
  const std::string path = "classical.";
  check_keys(c, {"description", "dt", "steps", "stride", "escape_radius", "initial", "betas"}, path);
  s.dt = opt_number(c, "dt", s.dt, path);
  if (!(s.dt > 0)) throw config_error("field 'classical.dt' must be positive");
  if (c.contains("steps")) {
    const int steps = get_integer(c, "steps", path);
    if (steps <= 0) throw config_error("field 'classical.steps' must be positive");
    s.steps = static_cast<std::size_t>(steps);
  }
  if (c.contains("stride")) {
    const int stride = get_integer(c, "stride", path);
    if (stride <= 0) throw config_error("field 'classical.stride' must be positive");
    s.stride = static_cast<std::size_t>(stride);
  }
  s.escape_radius = opt_number(c, "escape_radius", s.escape_radius, path);
  if (!(s.escape_radius > 0)) throw config_error("field 'classical.escape_radius' must be positive");
  const auto it = c.find("initial");
  if (it == c.end()) throw config_error("missing required field 'classical.initial'");
  if (!it->is_object()) throw config_error("field 'classical.initial' must be an object");
  check_keys(*it, {"position", "velocity", "spin"}, "classical.initial.");
  s.initial.position = get_vec3(*it, "position", "classical.initial.");
  s.initial.velocity = get_vec3(*it, "velocity", "classical.initial.");
  const auto sp = it->find("spin");
  if (sp == it->end() || (sp->is_string() && sp->get<std::string>() == "trapped")) {
    s.trapped_spin = true;
  } else {
    s.trapped_spin = false;
    s.initial.spin_dir = get_vec3(*it, "spin", "classical.initial.");
    const auto& n = s.initial.spin_dir;
    const double norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    if (!(norm > 0)) throw config_error("field 'classical.initial.spin' must be a nonzero vector");
    for (double& v : s.initial.spin_dir) v /= norm;
  }
  if (c.contains("betas")) {
    const auto& b = c["betas"];
    if (!b.is_array() || b.empty()) throw config_error("field 'classical.betas' must be a nonempty array");
    for (const auto& v : b) {
      if (!v.is_number()) throw config_error("field 'classical.betas' must contain numbers");
      s.betas.push_back(v.get<double>());
    }
  }
  return s;
}

inline FieldConfig parse_physical(const json& ph) {
  if (!ph.is_object()) throw config_error("field 'physical' must be an object");
  const std::string path = "physical.";
  check_keys(ph, {"b_perp", "b_z", "omega", "k_z", "k_perp", "g", "mass"}, path);
  FieldConfig f;
  f.b_perp = get_number(ph, "b_perp", path);
  f.b_z = get_number(ph, "b_z", path);
  f.omega = get_number(ph, "omega", path);
  f.k_z = get_number(ph, "k_z", path);
  f.k_perp = get_number(ph, "k_perp", path);
  f.g = get_number(ph, "g", path);
  f.mass = get_number(ph, "mass", path);
  return f;
}

}  // namespace detail

inline Scenario parse_scenario(const std::string& text) {
  using detail::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw config_error("scenario must be a JSON object");

  Scenario s;
  s.source = text;
  if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty())
    throw config_error("missing required field 'id' (nonempty string)");
  s.id = j["id"].get<std::string>();
  detail::check_keys(j, {"id", "description", "preset", "alpha", "beta", "gamma", "kappa_z", "m", "physical", "variant",
                         "grid", "z_w", "states", "classical"},
                     "");

  if (j.contains("preset")) {
    if (!j["preset"].is_string()) throw config_error("field 'preset' must be a string");
    const auto name = j["preset"].get<std::string>();
    const auto p = find_preset(name);
    if (!p) throw config_error("field 'preset': unknown preset '" + name + "'");
    s.params = *p;
    s.params.alpha = detail::opt_number(j, "alpha", s.params.alpha, "");
    s.params.beta = detail::opt_number(j, "beta", s.params.beta, "");
    s.params.gamma = detail::opt_number(j, "gamma", s.params.gamma, "");
    s.params.kappa_z = detail::opt_number(j, "kappa_z", s.params.kappa_z, "");
    if (j.contains("m")) s.params.m = detail::get_integer(j, "m", "");
  } else if (j.contains("physical")) {
    for (const char* k : {"alpha", "beta", "gamma", "kappa_z"})
      if (j.contains(k)) throw config_error(std::string("field '") + k + "' conflicts with 'physical'");
    const auto cfg = detail::parse_physical(j["physical"]);
    s.params = derive_params(cfg, detail::get_integer(j, "m", ""));
  } else {
    s.params.alpha = detail::get_number(j, "alpha", "");
    s.params.beta = detail::get_number(j, "beta", "");
    s.params.gamma = detail::get_number(j, "gamma", "");
    s.params.kappa_z = detail::get_number(j, "kappa_z", "");
    s.params.m = detail::get_integer(j, "m", "");
  }
  s.params.validate();
  if (s.params.m < 0 || s.params.m > 8) throw config_error("field 'm' must lie in [0, 8]");

  if (j.contains("variant")) {
    if (!j["variant"].is_string()) throw config_error("field 'variant' must be a string");
    s.variant = parse_variant(j["variant"].get<std::string>());
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    if (!g.is_object()) throw config_error("field 'grid' must be an object");
    detail::check_keys(g, {"xi_min", "xi_max", "step"}, "grid.");
    s.grid.xi_min = detail::opt_number(g, "xi_min", s.grid.xi_min, "grid.");
    s.grid.xi_max = detail::opt_number(g, "xi_max", s.grid.xi_max, "grid.");
    s.grid.step = detail::opt_number(g, "step", s.grid.step, "grid.");
  }
  if (!(s.grid.step > 0)) throw config_error("field 'grid.step' must be positive");
  if (!(s.grid.xi_min > 0) || !(s.grid.xi_max > s.grid.xi_min))
    throw config_error("fields 'grid.xi_min'/'grid.xi_max' must satisfy 0 < xi_min < xi_max");
  if (j.contains("z_w")) {
    s.z_w = detail::get_number(j, "z_w", "");
    if (!(*s.z_w > 0)) throw config_error("field 'z_w' must be positive");
  }
  if (j.contains("states")) {
    s.states = detail::get_integer(j, "states", "");
    if (s.states < 1) throw config_error("field 'states' must be at least 1");
  }
  if (j.contains("classical")) s.classical = detail::parse_classical(j["classical"]);
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace trap_lab

#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "json.hpp"
#include "trap_lab/scenario.hpp"

using namespace trap_lab;
using nlohmann::json;

namespace {

json explicit_set1() {
  return {{"id", "s"}, {"alpha", 3.0}, {"beta", 0.8}, {"gamma", 0.01}, {"kappa_z", 0.9}, {"m", 2}};
}

// Throws config_error whose message mentions `field`.
void expect_config_error(const std::string& text, const std::string& field) {
  try {
    parse_scenario(text);
    FAIL() << "no error for " << text;
  } catch (const config_error& e) {
    EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
  }
}

json physical_block(double omega, double b_perp, double b_z, double g, double mass) {
  const double k = omega / constants::speed_of_light;
  return {{"b_perp", b_perp}, {"b_z", b_z},    {"omega", omega},  {"k_z", 0.9 * k},
          {"k_perp", std::sqrt(1 - 0.81) * k}, {"g", g},          {"mass", mass}};
}

}  // namespace

TEST(Scenario, ExplicitParameters) {
  const auto s = parse_scenario(explicit_set1().dump());
  EXPECT_EQ(s.id, "s");
  EXPECT_EQ(s.params.alpha, 3.0);
  EXPECT_EQ(s.params.beta, 0.8);
  EXPECT_EQ(s.params.gamma, 0.01);
  EXPECT_EQ(s.params.kappa_z, 0.9);
  EXPECT_EQ(s.params.m, 2);
  EXPECT_EQ(s.variant, Variant::full);
  EXPECT_EQ(s.states, 3);
  EXPECT_FALSE(s.classical.has_value());
  EXPECT_FALSE(s.z_w.has_value());
  EXPECT_EQ(s.source, explicit_set1().dump());
}

TEST(Scenario, PresetWithOverride) {
  const auto s = parse_scenario(R"({"id": "t", "preset": "set1", "beta": 0.01})");
  EXPECT_EQ(s.params.alpha, 3.0);
  EXPECT_EQ(s.params.beta, 0.01);
  EXPECT_EQ(s.params.gamma, 0.01);
  const auto n = parse_scenario(R"({"id": "t", "preset": "set1_beta_tuned"})");
  EXPECT_EQ(n.params.beta, 0.01);
  const auto s2 = parse_scenario(R"({"id": "t", "preset": "set2"})");
  EXPECT_EQ(s2.params.alpha, -2.0);
  EXPECT_EQ(s2.params.beta, -2.0);
  EXPECT_EQ(s2.params.gamma, -0.02);
  expect_config_error(R"({"id": "t", "preset": "set9"})", "preset");
}

TEST(Scenario, PhysicalBlockMatchesDerivation) {
  const double omega = 1e9, b_perp = 1e-6, b_z = -2e-4, g = 1.76e11, mass = 9.109e-31;
  json j = {{"id", "ph"}, {"m", 1}, {"physical", physical_block(omega, b_perp, b_z, g, mass)}};
  const auto s = parse_scenario(j.dump());
  const double root = std::sqrt(mass * constants::speed_of_light * constants::speed_of_light /
                                (constants::hbar * omega));
  EXPECT_NEAR(s.params.gamma, g * b_perp / omega, 1e-15);
  EXPECT_NEAR(s.params.alpha / s.params.gamma, root, 1e-9 * root);
  EXPECT_NEAR(s.params.beta, (1 + g * b_z / omega) * root, 1e-9 * root);
  EXPECT_NEAR(s.params.kappa_z, 0.9, 1e-12);
  EXPECT_EQ(s.params.m, 1);

  j["alpha"] = 1.0;
  expect_config_error(j.dump(), "alpha");
  j.erase("alpha");
  j["physical"].erase("mass");
  expect_config_error(j.dump(), "physical.mass");
  j["physical"] = physical_block(omega, b_perp, b_z, g, mass);
  j["physical"]["k_z"] = 1.0;
  expect_config_error(j.dump(), "k_z");
  j["physical"] = physical_block(omega, b_perp, b_z, g, mass);
  j["physical"]["colour"] = 1;
  expect_config_error(j.dump(), "physical.colour");
}

TEST(Scenario, MissingFieldsAreNamed) {
  for (const char* key : {"alpha", "beta", "gamma", "kappa_z", "m"}) {
    auto j = explicit_set1();
    j.erase(key);
    expect_config_error(j.dump(), key);
  }
  auto j = explicit_set1();
  j.erase("id");
  expect_config_error(j.dump(), "id");
  j = explicit_set1();
  j["alpha"] = "three";
  expect_config_error(j.dump(), "alpha");
  j = explicit_set1();
  j["m"] = 2.5;
  expect_config_error(j.dump(), "m");
}

TEST(Scenario, UnknownKeysRejected) {
  auto j = explicit_set1();
  j["alpah"] = 3.0;
  expect_config_error(j.dump(), "alpah");
  j = explicit_set1();
  j["grid"] = {{"stepp", 1e-3}};
  expect_config_error(j.dump(), "grid.stepp");
}

TEST(Scenario, ParameterValidation) {
  auto j = explicit_set1();
  j["m"] = 9;
  expect_config_error(j.dump(), "m");
  j["m"] = -1;
  expect_config_error(j.dump(), "m");
  j = explicit_set1();
  j["kappa_z"] = 1.5;
  expect_config_error(j.dump(), "kappa_z");
  j = explicit_set1();
  j["gamma"] = -0.01;
  expect_config_error(j.dump(), "gamma");
  j = explicit_set1();
  j["alpha"] = 0.0;
  expect_config_error(j.dump(), "alpha");
  expect_config_error("[1, 2]", "object");
  expect_config_error("{not json", "JSON");
}

TEST(Scenario, GridAndOptions) {
  auto j = explicit_set1();
  j["grid"] = {{"xi_min", 0.01}, {"xi_max", 30.0}, {"step", 2e-3}};
  j["variant"] = "paraxial";
  j["z_w"] = 5.0;
  j["states"] = 2;
  const auto s = parse_scenario(j.dump());
  EXPECT_EQ(s.grid.xi_min, 0.01);
  EXPECT_EQ(s.grid.xi_max, 30.0);
  EXPECT_EQ(s.grid.step, 2e-3);
  EXPECT_EQ(s.variant, Variant::paraxial);
  EXPECT_EQ(*s.z_w, 5.0);
  EXPECT_EQ(s.states, 2);

  j["grid"]["step"] = 0.0;
  expect_config_error(j.dump(), "grid.step");
  j["grid"]["step"] = 1e-3;
  j["grid"]["xi_max"] = 0.005;
  expect_config_error(j.dump(), "grid.xi_max");
  j["grid"]["xi_max"] = 30.0;
  j["variant"] = "exact";
  expect_config_error(j.dump(), "exact");
  j["variant"] = "full";
  j["z_w"] = -1.0;
  expect_config_error(j.dump(), "z_w");
  j["z_w"] = 5.0;
  j["states"] = 0;
  expect_config_error(j.dump(), "states");
}

TEST(Scenario, ClassicalBlock) {
  auto j = explicit_set1();
  j["classical"] = {{"dt", 0.02},
                    {"steps", 100},
                    {"stride", 5},
                    {"initial", {{"position", {1, 0, 0}}, {"velocity", {0, 0.1, 0}}, {"spin", {0, 0, 2}}}},
                    {"betas", {-0.1, -0.01}}};
  const auto s = parse_scenario(j.dump());
  ASSERT_TRUE(s.classical.has_value());
  const auto& c = *s.classical;
  EXPECT_EQ(c.dt, 0.02);
  EXPECT_EQ(c.steps, 100u);
  EXPECT_EQ(c.stride, 5u);
  EXPECT_FALSE(c.trapped_spin);
  EXPECT_EQ(c.initial.spin_dir[2], 1.0);  // normalised
  EXPECT_EQ(c.initial.velocity[1], 0.1);
  ASSERT_EQ(c.betas.size(), 2u);
  EXPECT_EQ(c.betas[1], -0.01);

  j["classical"]["initial"]["spin"] = "trapped";
  EXPECT_TRUE(parse_scenario(j.dump()).classical->trapped_spin);

  auto bad = j;
  bad["classical"]["dt"] = 0;
  expect_config_error(bad.dump(), "classical.dt");
  bad = j;
  bad["classical"]["initial"]["position"] = {1, 0};
  expect_config_error(bad.dump(), "classical.initial.position");
  bad = j;
  bad["classical"]["initial"].erase("velocity");
  expect_config_error(bad.dump(), "classical.initial.velocity");
  bad = j;
  bad["classical"]["initial"]["spin"] = {0, 0, 0};
  expect_config_error(bad.dump(), "classical.initial.spin");
  bad = j;
  bad["classical"]["betas"] = json::array();
  expect_config_error(bad.dump(), "classical.betas");
  bad = j;
  bad["classical"]["steps"] = -3;
  expect_config_error(bad.dump(), "classical.steps");
  bad = j;
  bad["classical"]["tau"] = 1;
  expect_config_error(bad.dump(), "classical.tau");
}

TEST(Scenario, RepositoryFilesLoad) {
  const std::string dir = TRAP_LAB_SCENARIOS;
  const auto s1 = load_scenario(dir + "/set1.json");
  EXPECT_EQ(s1.id, "set1");
  EXPECT_EQ(s1.params.alpha, presets::set1().alpha);
  const auto s2 = load_scenario(dir + "/set2.json");
  EXPECT_EQ(s2.params.beta, presets::set2().beta);
  EXPECT_EQ(load_scenario(dir + "/set1_beta_tuned.json").params.beta, 0.01);
  const auto c = load_scenario(dir + "/classical_sweep.json");
  ASSERT_TRUE(c.classical.has_value());
  EXPECT_EQ(c.classical->betas.size(), 5u);
  EXPECT_THROW(load_scenario(dir + "/does_not_exist.json"), config_error);
}

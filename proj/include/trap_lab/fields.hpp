#pragma once

// Field configuration, dimensionless parameters and the three magnetic-field
// forms (full Bessel beam, paraxial, guiding regime).

#include <array>
#include <cmath>
#include <string>

#include "trap_lab/error.hpp"
#include "trap_lab/specfun.hpp"

namespace trap_lab {

using Vec3 = std::array<double, 3>;

namespace constants {
inline constexpr double hbar = 1.054571817e-34;         // J s
inline constexpr double speed_of_light = 299792458.0;   // m/s
}  // namespace constants

struct FieldConfig {
  double b_perp = 0;   // T
  double b_z = 0;      // T
  double omega = 0;    // rad/s
  double k_z = 0;      // 1/m
  double k_perp = 0;   // 1/m
  double g = 0;        // rad/(s T), signed
  double mass = 0;     // kg

  double k() const { return std::sqrt(k_z * k_z + k_perp * k_perp); }

  void validate() const {
    auto finite = [](double v, const char* name) {
      if (!std::isfinite(v)) throw config_error(std::string("physical.") + name + " must be finite");
    };
    finite(b_perp, "b_perp");
    finite(b_z, "b_z");
    finite(omega, "omega");
    finite(k_z, "k_z");
    finite(k_perp, "k_perp");
    finite(g, "g");
    finite(mass, "mass");
    if (mass <= 0) throw config_error("physical.mass must be positive");
    if (omega <= 0) throw config_error("physical.omega must be positive");
    if (k_perp <= 0) throw config_error("physical.k_perp must be positive");
    const double k_light = omega / constants::speed_of_light;
    const double lhs = k_z * k_z + k_perp * k_perp;
    if (std::fabs(lhs - k_light * k_light) > 1e-12 * k_light * k_light)
      throw config_error("physical.k_z/k_perp: k_z^2 + k_perp^2 must equal (omega/c)^2");
  }
};

struct DimensionlessParams {
  double alpha = 0;
  double beta = 0;
  double gamma = 0;
  double kappa_z = 1;
  int m = 0;

  // Coefficient of the radial kinetic term, gamma/(2 alpha).
  double kinetic() const { return gamma / (2.0 * alpha); }

  void validate() const {
    if (!std::isfinite(alpha)) throw config_error("alpha must be finite");
    if (!std::isfinite(beta)) throw config_error("beta must be finite");
    if (!std::isfinite(gamma)) throw config_error("gamma must be finite");
    if (!std::isfinite(kappa_z) || kappa_z <= 0 || kappa_z > 1)
      throw config_error("kappa_z must lie in (0, 1]");
    if (alpha == 0) throw config_error("alpha must be nonzero");
    if (gamma == 0) throw config_error("gamma must be nonzero");
    // alpha/gamma = sqrt(Mc^2/hbar omega) is positive for any physical scenario.
    if (alpha / gamma <= 0) throw config_error("alpha and gamma must have the same sign");
  }
};

namespace presets {
inline DimensionlessParams set1() { return {3.0, 0.8, 0.01, 0.9, 2}; }
inline DimensionlessParams set2() { return {-2.0, -2.0, -0.02, 0.9, 2}; }
}  // namespace presets

inline DimensionlessParams derive_params(const FieldConfig& cfg, int m) {
  cfg.validate();
  const double root = std::sqrt(cfg.mass * constants::speed_of_light * constants::speed_of_light /
                                (constants::hbar * cfg.omega));
  DimensionlessParams p;
  p.gamma = cfg.g * cfg.b_perp / cfg.omega;
  p.alpha = p.gamma * root;
  p.beta = (1.0 + cfg.g * cfg.b_z / cfg.omega) * root;
  p.kappa_z = cfg.k_z / cfg.k();
  p.m = m;
  if (!std::isfinite(p.alpha) || !std::isfinite(p.beta) || !std::isfinite(p.gamma) ||
      !std::isfinite(p.kappa_z))
    throw config_error("physical: derived dimensionless parameters are not finite");
  return p;
}

// Full Bessel-beam field. rho in units of 1/k (rho = k * physical radius),
// returned as Cartesian components in tesla.
inline Vec3 field_full(double rho, double phi, double zeta_z, const FieldConfig& cfg) {
  if (rho < 0) throw domain_error("field_full: rho must be non-negative");
  const double k = cfg.omega / constants::speed_of_light;
  const double x = cfg.k_perp / k * rho;
  const double a_plus = (k + cfg.k_z) / (2.0 * cfg.k_perp);
  const double a_minus = (k - cfg.k_z) / (2.0 * cfg.k_perp);
  const double j1 = specfun::bessel_j(1, x);
  const double j2 = specfun::bessel_j(2, x);
  const double j3 = specfun::bessel_j(3, x);
  const double bp = cfg.b_perp;
  return {-2.0 * bp * (a_plus * std::sin(zeta_z - phi) * j1 + a_minus * std::sin(zeta_z - 3 * phi) * j3),
          2.0 * bp * (a_plus * std::cos(zeta_z - phi) * j1 - a_minus * std::cos(zeta_z - 3 * phi) * j3),
          -4.0 * bp * std::cos(zeta_z - 2 * phi) * j2 + cfg.b_z};
}

// Paraxial field; x, y in units of 1/k.
inline Vec3 field_paraxial(double x, double y, double zeta, const FieldConfig& cfg) {
  const double c = std::cos(zeta), s = std::sin(zeta);
  return {cfg.b_perp * (y * c - x * s), cfg.b_perp * (x * c + y * s), cfg.b_z};
}

// J1-only field valid once the a_- and J2 terms are negligible.
inline Vec3 field_guiding(double rho, double phi, double zeta_z, const FieldConfig& cfg) {
  if (rho < 0) throw domain_error("field_guiding: rho must be non-negative");
  const double k = cfg.omega / constants::speed_of_light;
  const double j1 = specfun::bessel_j(1, cfg.k_perp / k * rho);
  return {-2.0 * cfg.b_perp * std::sin(zeta_z - phi) * j1, 2.0 * cfg.b_perp * std::cos(zeta_z - phi) * j1,
          cfg.b_z};
}

struct RegimeReport {
  double vortex_measure = 0;    // |2 alpha / (beta - alpha/gamma)|, about 2|gamma|
  double paraxial_measure = 0;  // 1 - kappa_z
  bool vortex_flagged = false;
  bool paraxial_flagged = false;
  bool ok() const { return !vortex_flagged && !paraxial_flagged; }
};

inline RegimeReport regime_check(const DimensionlessParams& p, double threshold = 0.1) {
  RegimeReport r;
  if (p.gamma != 0) r.vortex_measure = std::fabs(2.0 * p.alpha / (p.beta - p.alpha / p.gamma));
  r.paraxial_measure = 1.0 - p.kappa_z;
  r.vortex_flagged = r.vortex_measure > threshold;
  r.paraxial_flagged = r.paraxial_measure > threshold;
  return r;
}

}  // namespace trap_lab

#pragma once

// Independent reference implementations used only by the tests.

#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>

#include <cmath>
#include <vector>

#include "trap_lab/fields.hpp"

namespace oracle {

inline double ai(double x) { return boost::math::airy_ai(x); }
inline double bi(double x) { return boost::math::airy_bi(x); }
inline double ai_prime(double x) { return boost::math::airy_ai_prime(x); }
inline double bi_prime(double x) { return boost::math::airy_bi_prime(x); }
inline double ai_zero(int n) { return boost::math::airy_ai_zero<double>(n); }
inline double jn(int n, double x) { return boost::math::cyl_bessel_j(n, x); }
inline double jn_prime(int n, double x) { return boost::math::cyl_bessel_j_prime(n, x); }

inline double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

// Mixing angle phi of the 2x2 potential, tan(phi) = v12/Theta, and its
// derivative from the closed forms of Theta and v12.
struct MixingAngle {
  double theta, v12, dtheta, dv12;
  double phi_prime() const { return (theta * dv12 - v12 * dtheta) / (theta * theta + v12 * v12); }
};

inline MixingAngle mixing(double xi, const trap_lab::DimensionlessParams& p, bool full) {
  const double c = p.gamma / (2 * p.alpha);
  const double mh = p.m + 0.5;
  MixingAngle m{};
  m.theta = c * (mh / (xi * xi) + p.kappa_z) - p.beta / 2;
  m.dtheta = -2 * c * mh / (xi * xi * xi);
  if (full) {
    const double k = p.kappa_z;
    m.v12 = -p.alpha * jn(1, k * xi);
    m.dv12 = -p.alpha * k * jn_prime(1, k * xi);
  } else {
    m.v12 = -p.alpha * xi / 2;
    m.dv12 = -p.alpha / 2;
  }
  return m;
}

}  // namespace oracle

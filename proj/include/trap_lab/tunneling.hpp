#pragma once

// Escape estimates for a trapped state: the rectangle-bound WKB factor for
// tunnelling through the J1 barrier, and the golden-rule spin-flip rate into
// the ejecting channel.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "trap_lab/error.hpp"
#include "trap_lab/fields.hpp"
#include "trap_lab/quadrature.hpp"
#include "trap_lab/spectra.hpp"

namespace trap_lab {

struct BarrierGeometry {
  double energy = 0;
  double v_max = 0;
  double xi_max = 0;   // location of v_max
  double v_min = 0;
  double xi_left = 0;  // inner turning point of the well
  double xi_right = 0; // entry into the barrier
  double xi_exit = 0;  // exit from the barrier
  double xi_d = 0;     // xi_exit - xi_right
};

namespace detail {

inline double crossing(const std::vector<double>& x, const std::vector<double>& f, std::size_t i) {
  // f[i] and f[i+1] straddle zero
  return x[i] + (x[i + 1] - x[i]) * f[i] / (f[i] - f[i + 1]);
}

}  // namespace detail

// Turning points are the sign changes of V - E walking outward: the first
// downward one is the inner wall, then the barrier entry, then its exit.
// Working from sign changes rather than extrema keeps the small-xi
// structure of V~+ (a spike and a shallow pocket for set1) out of the way.
inline BarrierGeometry barrier_geometry(const std::vector<double>& grid, const std::vector<double>& curve,
                                        double energy) {
  const std::size_t n = grid.size();
  if (n < 3 || curve.size() != n) throw domain_error("barrier_geometry: grid/curve size mismatch");
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = curve[i] - energy;

  auto next_crossing = [&](std::size_t from, bool downward) -> std::size_t {
    for (std::size_t i = from; i + 1 < n; ++i) {
      if (downward && f[i] > 0 && f[i + 1] <= 0) return i;
      if (!downward && f[i] <= 0 && f[i + 1] > 0) return i;
    }
    return n;
  };
  const std::size_t i_left = next_crossing(0, true);
  if (i_left == n) throw numerical_error("barrier_geometry: no classically allowed region at this energy");
  const std::size_t i_right = next_crossing(i_left + 1, false);
  if (i_right == n) throw numerical_error("barrier_geometry: no barrier to the right of the well");
  const std::size_t i_exit = next_crossing(i_right + 1, true);
  if (i_exit == n) throw numerical_error("barrier_geometry: energy lies above the barrier top (no exit point)");

  BarrierGeometry g;
  g.energy = energy;
  g.xi_left = detail::crossing(grid, f, i_left);
  g.xi_right = detail::crossing(grid, f, i_right);
  g.xi_exit = detail::crossing(grid, f, i_exit);
  g.xi_d = g.xi_exit - g.xi_right;
  g.v_min = *std::min_element(curve.begin() + i_left, curve.begin() + i_right + 2);

  const auto top = std::max_element(curve.begin() + i_right, curve.begin() + i_exit + 2);
  auto k = static_cast<std::size_t>(top - curve.begin());
  g.v_max = *top;
  g.xi_max = grid[k];
  if (k > 0 && k + 1 < n) {
    // Parabola through the three samples around the grid maximum.
    const double y0 = curve[k - 1], y1 = curve[k], y2 = curve[k + 1];
    const double den = y0 - 2 * y1 + y2;
    if (den < 0) {
      const double t = 0.5 * (y0 - y2) / den;
      const double h = 0.5 * (grid[k + 1] - grid[k - 1]);
      g.v_max = y1 - 0.25 * (y0 - y2) * t;
      g.xi_max = grid[k] + t * h;
    }
  }
  return g;
}

struct BarrierRate {
  double theta_bound;
  double log10_theta;
  double hits_per_omega;
  double rate;
};

inline BarrierRate barrier_rate(const BarrierGeometry& g, const DimensionlessParams& p) {
  const double ratio = p.alpha / p.gamma;
  if (!(ratio > 0)) throw domain_error("barrier_rate: alpha/gamma must be positive");
  const double exponent = -std::sqrt(2.0) * g.xi_d * std::sqrt(ratio * std::max(0.0, g.v_max - g.energy));
  BarrierRate r;
  r.log10_theta = exponent / std::numbers::ln10;
  r.theta_bound = std::exp(exponent);
  const double inv = p.gamma / p.alpha;
  r.hits_per_omega = std::sqrt(2.0 * inv * inv * inv * std::max(0.0, g.energy - g.v_min)) /
                     std::fabs(g.xi_left - g.xi_right);
  r.rate = r.theta_bound * r.hits_per_omega;
  return r;
}

struct ChannelRate {
  double rate = 0;        // Gamma / omega
  double prefactor = 0;   // (pi/2)(gamma/alpha)(gamma/beta)^2
  double integral = 0;
  double error_estimate = 0;
  double z_max = 0;       // truncation of the overlap integral
};

namespace detail {

// Overlap integrand d/dz(u/S) * v/S, S = sqrt(1 + |gamma alpha|^(2/3) z^2 / beta^2).
struct OverlapIntegrand {
  const AiryBoundState* u;
  const ContinuumState* v;
  double k;
  double operator()(double z) const {
    const double s2 = 1.0 + k * z * z;
    const double s = std::sqrt(s2);
    const double uu = u->u(z);
    const double du = u->u_prime(z) / s - uu * k * z / (s2 * s);
    return du * v->value(z) / s;
  }
};

// Where |u| and |u'| have both dropped below 1e-12 of their peaks. The
// continuum factor is bounded (|v| <= its envelope), so the neglected tail is
// below the same relative level.
inline double overlap_cutoff(const AiryBoundState& u) {
  double peak_u = 0, peak_du = 0;
  for (double z = 0; z <= 6; z += 0.01) {
    peak_u = std::max(peak_u, std::fabs(u.u(z)));
    peak_du = std::max(peak_du, std::fabs(u.u_prime(z)));
  }
  double z = 2;
  while (z < 150 && (std::fabs(u.u(z)) >= 1e-12 * peak_u || std::fabs(u.u_prime(z)) >= 1e-12 * peak_du)) z += 0.25;
  return z;
}

inline std::vector<double> overlap_breakpoints(double k, double z_w, double z_max) {
  std::vector<double> pts{0.0};
  // S changes on the scale 1/sqrt(k); give the quadrature that scale explicitly.
  for (double m : {1.0, 10.0}) {
    const double b = m / std::sqrt(k);
    if (b < z_max) pts.push_back(b);
  }
  if (z_w < z_max) pts.push_back(z_w);
  pts.push_back(z_max);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace detail

inline double channel_prefactor(const DimensionlessParams& p) {
  const double r = p.gamma / p.beta;
  return std::numbers::pi / 2.0 * (p.gamma / p.alpha) * r * r;
}

// panels = 0: adaptive Gauss-Kronrod; otherwise composite Gauss-Legendre with
// `panels` panels per sub-interval.
inline ChannelRate channel_rate(const AiryBoundState& u, const ContinuumState& v, const DimensionlessParams& p,
                                int panels = 0) {
  if (p.beta == 0) throw domain_error("channel_rate: beta must be nonzero");
  require_positive_products(p, "channel_rate");
  ChannelRate r;
  r.prefactor = channel_prefactor(p);
  const double k = std::pow(std::fabs(p.gamma * p.alpha), 2.0 / 3.0) / (p.beta * p.beta);
  const detail::OverlapIntegrand f{&u, &v, k};
  r.z_max = detail::overlap_cutoff(u);
  const auto pts = detail::overlap_breakpoints(k, v.z_w, r.z_max);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (panels > 0) {
      r.integral += quad::composite(f, pts[i], pts[i + 1], panels);
    } else {
      const auto res = quad::adaptive(f, pts[i], pts[i + 1], 1e-10, 15, "channel_rate");
      r.integral += res.value;
      r.error_estimate += res.error;
    }
  }
  r.rate = r.prefactor * r.integral * r.integral;
  return r;
}

struct TunnelingReport {
  std::string scenario;
  double energy = 0;
  BarrierGeometry geometry;
  BarrierRate barrier{};
  ChannelRate channel;
  double z_w = 0;
};

}  // namespace trap_lab

#pragma once

#include <algorithm>
#include <array>
#include <complex>

#include "trap_lab/spectra.hpp"

namespace oracle {

using trap_lab::DimensionlessParams;
using trap_lab::RadialSolution;
using trap_lab::assemble_spinor;

// Residual of i dPsi/dtau = H Psi with
// H = -c Lap_perp - c (d_z + i sigma_z/2)^2 - (beta/2) sigma_z - (alpha/2)(x sigma_y + y sigma_x),
// every derivative taken by five-point fourth-order differences.
inline double schrodinger_residual(const DimensionlessParams& p, double energy, const RadialSolution& sol) {
  using namespace std::complex_literals;
  using cd = std::complex<double>;
  auto fp = [&](double x) { return sol.f_plus(x); };
  auto fm = [&](double x) { return sol.f_minus(x); };
  auto psi = [&](double x, double y, double z, double t) {
    return assemble_spinor(fp, fm, p, energy, {x, y, z}, t);
  };
  const double c = p.kinetic(), H = 0.005, tau = 0.5;
  const std::array<double, 5> w1{1, -8, 0, 8, -1}, w2{-1, 16, -30, 16, -1};
  double worst = 0, peak = 0;
  for (double x0 = 0.15; x0 <= 0.45; x0 += 0.05)
    for (double y0 = -0.3; y0 <= 0.3; y0 += 0.1) {
      const double z0 = 0.1;
      const auto s = psi(x0, y0, z0, tau);
      std::array<cd, 2> lap{}, dz{}, dzz{}, dt{};
      for (int k = 0; k < 5; ++k) {
        const double o = (k - 2) * H;
        const auto sx = psi(x0 + o, y0, z0, tau), sy = psi(x0, y0 + o, z0, tau), sz = psi(x0, y0, z0 + o, tau),
                   st = psi(x0, y0, z0, tau + o);
        lap[0] += w2[k] * (sx.upper + sy.upper);
        lap[1] += w2[k] * (sx.lower + sy.lower);
        dzz[0] += w2[k] * sz.upper;
        dzz[1] += w2[k] * sz.lower;
        dz[0] += w1[k] * sz.upper;
        dz[1] += w1[k] * sz.lower;
        dt[0] += w1[k] * st.upper;
        dt[1] += w1[k] * st.lower;
      }
      for (int j = 0; j < 2; ++j) {
        lap[j] /= 12 * H * H;
        dzz[j] /= 12 * H * H;
        dz[j] /= 12 * H;
        dt[j] /= 12 * H;
      }
      const cd up = s.upper, lo = s.lower;
      // (d_z + i sz/2)^2 = d_zz + i sz d_z - 1/4
      const cd kin_u = -c * lap[0] - c * (dzz[0] + 1i * dz[0] - 0.25 * up);
      const cd kin_l = -c * lap[1] - c * (dzz[1] - 1i * dz[1] - 0.25 * lo);
      // x sigma_y + y sigma_x = [[0, y - i x], [y + i x, 0]]
      const cd hu = kin_u - p.beta / 2 * up - p.alpha / 2 * (y0 - 1i * x0) * lo;
      const cd hl = kin_l + p.beta / 2 * lo - p.alpha / 2 * (y0 + 1i * x0) * up;
      worst = std::max({worst, std::abs(1i * dt[0] - hu), std::abs(1i * dt[1] - hl)});
      peak = std::max({peak, std::abs(up), std::abs(lo)});
    }
  return worst / peak;
}

}  // namespace oracle

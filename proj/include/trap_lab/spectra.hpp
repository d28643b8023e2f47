#pragma once

// Bound states of the binding channel, small-xi Bessel modes, the Airy-channel
// analytic states (bound u and continuum v), and reassembly of the full
// two-component wavefunction from the radial functions f+-.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "trap_lab/channels.hpp"
#include "trap_lab/error.hpp"
#include "trap_lab/fields.hpp"
#include "trap_lab/specfun.hpp"
#include "trap_lab/tridiagonal.hpp"

namespace trap_lab {

struct BoundState {
  double energy = 0;
  std::vector<double> grid;
  std::vector<double> u;
  int nodes = 0;
};

struct BoundStateResult {
  std::vector<BoundState> states;
  std::string diagnostic;  // non-empty when fewer states than requested were found
};

inline int count_nodes(const std::vector<double>& u) {
  double peak = 0;
  for (double v : u) peak = std::max(peak, std::fabs(v));
  const double floor = 1e-10 * peak;
  int nodes = 0;
  int last = 0;
  for (double v : u) {
    if (std::fabs(v) <= floor) continue;
    const int s = v > 0 ? 1 : -1;
    if (last != 0 && s != last) ++nodes;
    last = s;
  }
  return nodes;
}

// Lowest `count` eigenpairs of -c u'' + V u = E u on a uniform grid with
// u = 0 at both end points, c = |gamma/2alpha|. States at or above the
// potential at the right end are not bound by the supplied curve and are
// dropped.
inline BoundStateResult solve_bound_states(const std::vector<double>& grid, const std::vector<double>& potential,
                                           const DimensionlessParams& p, int count) {
  const std::size_t n = grid.size();
  if (n < 5 || potential.size() != n) throw domain_error("solve_bound_states: grid/potential size mismatch");
  const double h = (grid.back() - grid.front()) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i)
    if (std::fabs(grid[i] - grid[i - 1] - h) > 1e-6 * h)
      throw domain_error("solve_bound_states: grid must be uniform");
  const double c = std::fabs(p.kinetic());
  const double t = c / (h * h);
  const std::size_t m = n - 2;
  std::vector<double> diag(m), off(m - 1, -t);
  for (std::size_t i = 0; i < m; ++i) diag[i] = 2 * t + potential[i + 1];
  const auto eig = tridiag::lowest(diag, off, count);

  BoundStateResult out;
  const double ceiling = potential.back();
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    if (!(eig.values[k] < ceiling)) break;
    BoundState s;
    s.energy = eig.values[k];
    s.grid = grid;
    s.u.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) s.u[i + 1] = eig.vectors[k][i];
    double norm = 0;
    for (std::size_t i = 1; i < n; ++i) norm += 0.5 * h * (s.u[i] * s.u[i] + s.u[i - 1] * s.u[i - 1]);
    norm = std::sqrt(norm);
    // Fix the overall sign so the largest lobe is positive.
    const auto peak = std::max_element(s.u.begin(), s.u.end(), [](double a, double b) {
      return std::fabs(a) < std::fabs(b);
    });
    if (*peak < 0) norm = -norm;
    for (double& v : s.u) v /= norm;
    s.nodes = count_nodes(s.u);
    out.states.push_back(std::move(s));
  }
  if (out.states.empty()) {
    std::ostringstream os;
    os << "no bound state below the barrier top (V = " << ceiling << ")";
    out.diagnostic = os.str();
  } else if (static_cast<int>(out.states.size()) < count) {
    std::ostringstream os;
    os << "only " << out.states.size() << " of " << count << " requested states lie below the barrier top";
    out.diagnostic = os.str();
  }
  return out;
}

// First maximum of J1 sits at kappa_z * xi = 1.8412; the trapping barrier of
// the full variant is the local maximum of V~+ closest to it.
inline constexpr double j1_first_maximum = 1.8411837813406593;

// Index range [0, end] of the trapping region of a corrected decomposition.
// Paraxial: the whole grid. Full: up to the barrier top, so that states in
// the outer Bessel pockets (which can lie below the trapped level) are not
// picked up.
inline std::size_t trap_domain_end(const ChannelDecomposition& d, const DimensionlessParams& p) {
  if (!d.corrected()) throw domain_error("trap_domain_end: decomposition has no corrected potentials");
  const std::size_t n = d.size();
  if (d.variant == Variant::paraxial) return n - 1;
  const double target = j1_first_maximum / p.kappa_z;
  std::size_t best = n;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const auto& v = d.v_tilde_plus;
    if (v[i] >= v[i - 1] && v[i] > v[i + 1]) {
      if (best == n || std::fabs(d.grid[i] - target) < std::fabs(d.grid[best] - target)) best = i;
    }
  }
  if (best == n) throw numerical_error("trap_domain_end: no barrier maximum found in V~+");
  return best;
}

inline BoundStateResult solve_trap(const ChannelDecomposition& d, const DimensionlessParams& p, int count) {
  const std::size_t end = trap_domain_end(d, p);
  std::vector<double> g(d.grid.begin(), d.grid.begin() + end + 1);
  std::vector<double> v(d.v_tilde_plus.begin(), d.v_tilde_plus.begin() + end + 1);
  return solve_bound_states(g, v, p, count);
}

inline double bessel_j_any(int order, double x) {
  if (order >= 0) return specfun::bessel_j(order, x);
  const double v = specfun::bessel_j(-order, x);
  return (order % 2 == 0) ? v : -v;
}

inline double delta_plus(const DimensionlessParams& p, double energy) {
  return p.alpha / p.gamma * (2 * energy + p.beta) - 0.25 - p.kappa_z;
}

inline double delta_minus(const DimensionlessParams& p, double energy) {
  return p.alpha / p.gamma * (2 * energy - p.beta) - 0.25 + p.kappa_z;
}

// Regular small-xi solutions f+ = J_{m+1}(sqrt(delta+) xi), f- = J_m(sqrt(delta-) xi).
struct SmallXiModes {
  int m = 0;
  double delta_plus = 0;
  double delta_minus = 0;

  double f_plus(double xi) const { return bessel_j_any(m + 1, std::sqrt(delta_plus) * xi); }
  double f_minus(double xi) const { return bessel_j_any(m, std::sqrt(delta_minus) * xi); }
  double f_plus_prime(double xi) const {
    const double k = std::sqrt(delta_plus);
    return k * 0.5 * (bessel_j_any(m, k * xi) - bessel_j_any(m + 2, k * xi));
  }
  double f_minus_prime(double xi) const {
    const double k = std::sqrt(delta_minus);
    return k * 0.5 * (bessel_j_any(m - 1, k * xi) - bessel_j_any(m + 1, k * xi));
  }
};

inline SmallXiModes small_xi_modes(const DimensionlessParams& p, double energy) {
  SmallXiModes s;
  s.m = p.m;
  s.delta_plus = delta_plus(p, energy);
  s.delta_minus = delta_minus(p, energy);
  if (!(s.delta_plus > 0) || !(s.delta_minus > 0)) {
    std::ostringstream os;
    os << "small_xi_modes: delta+ = " << s.delta_plus << ", delta- = " << s.delta_minus
       << "; the scenario is outside the regime with delta+- > 0";
    throw domain_error(os.str());
  }
  return s;
}

// Rescaled coordinate z = |alpha^2/gamma|^(1/3) xi.
inline double airy_scale(const DimensionlessParams& p) { return std::cbrt(std::fabs(p.alpha * p.alpha / p.gamma)); }

inline void require_positive_products(const DimensionlessParams& p, const char* who) {
  if (!(p.gamma * p.alpha > 0))
    throw domain_error(std::string(who) + ": requires gamma*alpha > 0 (and alpha/gamma > 0)");
}

// Ground state of -u'' + z u = (2E/(gamma alpha)^(1/3)) u on z > 0, u(0) = 0.
struct AiryBoundState {
  double z0 = 0;      // first zero of Ai
  double energy = 0;  // -z0 (gamma alpha)^(1/3) / 2
  double c_norm = 0;  // 1 / Ai'(z0)
  double scale = 0;   // z per unit xi

  double u(double z) const { return c_norm * specfun::airy_ai(z + z0).value; }
  double u_prime(double z) const { return c_norm * specfun::airy_ai(z + z0).derivative; }
};

inline AiryBoundState airy_bound_state(const DimensionlessParams& p) {
  require_positive_products(p, "airy_bound_state");
  AiryBoundState s;
  s.z0 = specfun::airy_ai_zero(1);
  s.energy = -s.z0 * std::cbrt(p.gamma * p.alpha) / 2.0;
  s.c_norm = 1.0 / specfun::airy_ai(s.z0).derivative;
  s.scale = airy_scale(p);
  return s;
}

// Continuum state of the ejecting channel, v = G_a on [0, z_w] and a
// matched sinusoid beyond.
struct ContinuumState {
  double energy_label = 0;  // a
  double z_w = 0;
  double d_const = 0;  // D
  double d1 = 0, d2 = 0;
  double q = 0;
  double energy = 0;          // -a (gamma alpha)^(1/3) / 2
  double energy_per_a = 0;    // dE/d(-a) = (gamma alpha)^(1/3) / 2
  double scale = 0;           // z per unit xi
  double g_w = 0, gp_w = 0;   // G and G' at z_w

  double g(double z) const {
    const auto q4 = specfun::airy_eval(energy_label - z);
    return d1 * q4.ai + d2 * q4.bi;
  }
  double g_prime(double z) const {
    const auto q4 = specfun::airy_eval(energy_label - z);
    return -(d1 * q4.ai_prime + d2 * q4.bi_prime);
  }
  double value(double z) const {
    if (z <= z_w) return g(z);
    const double t = q * (z - z_w);
    return gp_w / q * std::sin(t) + g_w * std::cos(t);
  }
  double derivative(double z) const {
    if (z <= z_w) return g_prime(z);
    const double t = q * (z - z_w);
    return gp_w * std::cos(t) - g_w * q * std::sin(t);
  }
  // Coefficient N of  int_0^inf v_a v_b dz = N delta(a - b).
  double delta_coefficient_z() const { return std::numbers::pi * q * (g_w * g_w + gp_w * gp_w / (q * q)); }
  // The same overlap expressed as  int v v' dxi = K delta(E - E').
  double delta_coefficient_xi_energy() const { return delta_coefficient_z() * energy_per_a / scale; }
};

inline double default_z_w(const DimensionlessParams& p) { return 4.0 * std::numbers::pi * airy_scale(p); }

inline ContinuumState continuum_state(double a, double z_w, const DimensionlessParams& p) {
  require_positive_products(p, "continuum_state");
  if (!(a < 0)) throw domain_error("continuum_state: energy label a must be negative");
  if (!(z_w > 0)) throw domain_error("continuum_state: z_w must be positive");
  ContinuumState s;
  s.energy_label = a;
  s.z_w = z_w;
  s.q = std::sqrt(-a);
  s.energy_per_a = std::cbrt(p.gamma * p.alpha) / 2.0;
  s.energy = -a * s.energy_per_a;
  s.scale = airy_scale(p);
  const auto at_a = specfun::airy_eval(a);
  const auto at_w = specfun::airy_eval(a - z_w);
  // Closed-form D, with (alpha gamma)^(1/3)/(2E) written as 1/q^2.
  s.d_const = std::sqrt(2.0 / std::numbers::pi) * std::pow(p.alpha / p.gamma, 0.25) /
              (std::fabs(at_a.bi) * std::sqrt(at_w.ai * at_w.ai + at_w.ai_prime * at_w.ai_prime / (s.q * s.q)));
  s.d1 = s.d_const * at_a.bi;
  s.d2 = -s.d_const * at_a.ai;
  s.g_w = s.d1 * at_w.ai + s.d2 * at_w.bi;
  s.gp_w = -(s.d1 * at_w.ai_prime + s.d2 * at_w.bi_prime);
  return s;
}

// Regular solution of the coupled radial equations for f+- at a given energy,
// integrated outward with RK4 from the small-xi Bessel modes.
class RadialSolution {
 public:
  RadialSolution(const DimensionlessParams& p, double energy, double xi_start, double xi_end, double step)
      : p_(p), energy_(energy), xi0_(xi_start), h_(step) {
    if (!(xi_start > 0) || !(xi_end > xi_start) || !(step > 0))
      throw domain_error("RadialSolution: need 0 < xi_start < xi_end and step > 0");
    const auto modes = small_xi_modes(p, energy);
    State y{modes.f_plus(xi_start), modes.f_plus_prime(xi_start), modes.f_minus(xi_start),
            modes.f_minus_prime(xi_start)};
    const auto steps = static_cast<std::size_t>(std::ceil((xi_end - xi_start) / step));
    y_.reserve(steps + 1);
    y_.push_back(y);
    for (std::size_t i = 0; i < steps; ++i) {
      const double x = xi_start + static_cast<double>(i) * step;
      const State k1 = rhs(x, y);
      const State k2 = rhs(x + step / 2, axpy(y, k1, step / 2));
      const State k3 = rhs(x + step / 2, axpy(y, k2, step / 2));
      const State k4 = rhs(x + step, axpy(y, k3, step));
      for (int j = 0; j < 4; ++j) y[j] += step / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
      y_.push_back(y);
    }
  }

  double xi_min() const { return xi0_; }
  double xi_max() const { return xi0_ + h_ * static_cast<double>(y_.size() - 1); }
  double energy() const { return energy_; }

  // Cubic Hermite interpolation of f+ (component 0) or f- (component 2).
  double f_plus(double xi) const { return interp(xi, 0); }
  double f_minus(double xi) const { return interp(xi, 2); }

 private:
  using State = std::array<double, 4>;  // f+, f+', f-, f-'

  static State axpy(const State& y, const State& k, double a) {
    return {y[0] + a * k[0], y[1] + a * k[1], y[2] + a * k[2], y[3] + a * k[3]};
  }

  State rhs(double x, const State& y) const {
    const double c = p_.kinetic();
    const double mp = p_.m + 1.0, mm = p_.m;
    const double fpp = -y[1] / x + (mp * mp / (x * x) + p_.kappa_z + 0.25) * y[0] -
                       ((energy_ + p_.beta / 2) * y[0] + p_.alpha / 2 * x * y[2]) / c;
    const double fmm = -y[3] / x + (mm * mm / (x * x) - p_.kappa_z + 0.25) * y[2] -
                       ((energy_ - p_.beta / 2) * y[2] + p_.alpha / 2 * x * y[0]) / c;
    return {y[1], fpp, y[3], fmm};
  }

  double interp(double xi, int comp) const {
    if (xi < xi_min() || xi > xi_max()) throw domain_error("RadialSolution: xi outside the integrated range");
    auto i = static_cast<std::size_t>((xi - xi0_) / h_);
    if (i >= y_.size() - 1) i = y_.size() - 2;
    const double t = (xi - (xi0_ + h_ * static_cast<double>(i))) / h_;
    const double f0 = y_[i][comp], d0 = y_[i][comp + 1] * h_;
    const double f1 = y_[i + 1][comp], d1 = y_[i + 1][comp + 1] * h_;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * d1;
  }

  DimensionlessParams p_;
  double energy_;
  double xi0_;
  double h_;
  std::vector<State> y_;
};

struct SpinorSample {
  Vec3 position{};  // xi_x, xi_y, xi_z
  double time = 0;  // tau
  std::complex<double> upper;
  std::complex<double> lower;
};

// Psi~ = e^{-iE tau} e^{-i gamma kappa^2 tau/(2 alpha)} e^{i kappa xi_z}
//        [e^{i(m+1)phi} f+(xi), i e^{i m phi} f-(xi)].
inline SpinorSample assemble_spinor(const std::function<double(double)>& f_plus,
                                    const std::function<double(double)>& f_minus, const DimensionlessParams& p,
                                    double energy, const Vec3& point, double tau) {
  using namespace std::complex_literals;
  const double xi = std::hypot(point[0], point[1]);
  const double phi = std::atan2(point[1], point[0]);
  const std::complex<double> common =
      std::exp(-1i * (energy * tau + p.kinetic() * p.kappa_z * p.kappa_z * tau) + 1i * (p.kappa_z * point[2]));
  SpinorSample s;
  s.position = point;
  s.time = tau;
  s.upper = common * std::exp(1i * (double(p.m + 1) * phi)) * f_plus(xi);
  s.lower = common * 1i * std::exp(1i * (double(p.m) * phi)) * f_minus(xi);
  return s;
}

// Lab-frame spinor Psi = e^{-i zeta sigma_z/2} Psi~ with zeta = (alpha/gamma) tau - xi_z.
inline SpinorSample to_lab_frame(const SpinorSample& s, const DimensionlessParams& p) {
  using namespace std::complex_literals;
  const double zeta = p.alpha / p.gamma * s.time - s.position[2];
  SpinorSample out = s;
  out.upper = std::exp(-0.5i * zeta) * s.upper;
  out.lower = std::exp(0.5i * zeta) * s.lower;
  return out;
}

inline void write_wavefunction_csv(std::ostream& os, const BoundState& s) {
  os << "xi,u\n";
  char buf[96];
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.15g,%.15g\n", s.grid[i], s.u[i]);
    os << buf;
  }
}

}  // namespace trap_lab

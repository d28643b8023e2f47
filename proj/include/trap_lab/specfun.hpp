#pragma once

// Special-function kernel: Airy Ai/Bi with derivatives, zeros of Ai, and
// integer-order Bessel J_n. All routines are pure and thread-safe.
//
// Airy evaluation regions (x = argument):
//   -8 <= x <= 5   Maclaurin series in extended precision
//    5 <  x <  8   Ai, Ai': Taylor continuation of the ODE down from x = 8
//                  Bi, Bi': Maclaurin series (no cancellation for x > 0)
//   |x| >= 8       asymptotic expansions
// The asymptotic expansions are truncated at their smallest term; at
// |x| = 8 that term is ~exp(-4|x|^{3/2}/3) ~ 1e-13 relative.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "trap_lab/error.hpp"

namespace trap_lab::specfun {

struct AiryQuad {
  double ai;
  double bi;
  double ai_prime;
  double bi_prime;
};

struct AiryPair {
  double value;
  double derivative;
};

namespace detail {

using ld = long double;

inline constexpr ld airy_c1 = 0.355028053887817239260063186004183176L;  // Ai(0)
inline constexpr ld airy_c2 = 0.258819403792806798405183560189203963L;  // -Ai'(0)
inline constexpr double maclaurin_upper = 5.0;
inline constexpr double maclaurin_lower = -8.0;
inline constexpr double asymptotic_threshold = 8.0;

struct SeriesFG {
  ld f, fp, g, gp;
};

// f = sum 3^k (1/3)_k x^{3k}/(3k)!,  g = sum 3^k (2/3)_k x^{3k+1}/(3k+1)!
inline SeriesFG maclaurin_fg(ld x) {
  const ld x3 = x * x * x;
  ld f = 1, g = x, fp = 0, gp = 1;
  ld tf = 1, tg = x, tfp = x * x / 2, tgp = 1;
  fp = tfp;
  constexpr ld eps = std::numeric_limits<ld>::epsilon();
  for (int k = 1; k < 400; ++k) {
    const ld k3 = 3.0L * k;
    tf *= x3 / ((k3 - 1) * k3);
    tg *= x3 / (k3 * (k3 + 1));
    if (k >= 2) tfp *= x3 / ((k3 - 3) * (k3 - 1));
    tgp *= x3 / (k3 * (k3 - 2));
    f += tf;
    g += tg;
    if (k >= 2) fp += tfp;
    gp += tgp;
    const ld scale = std::fabs(f) + std::fabs(g) + std::fabs(fp) + std::fabs(gp);
    const ld last = std::fabs(tf) + std::fabs(tg) + std::fabs(tfp) + std::fabs(tgp);
    if (k > 2 && last < eps * scale) break;
  }
  return {f, fp, g, gp};
}

inline AiryQuad maclaurin(double x) {
  const auto s = maclaurin_fg(static_cast<ld>(x));
  const ld sqrt3 = std::sqrt(3.0L);
  return {static_cast<double>(airy_c1 * s.f - airy_c2 * s.g),
          static_cast<double>(sqrt3 * (airy_c1 * s.f + airy_c2 * s.g)),
          static_cast<double>(airy_c1 * s.fp - airy_c2 * s.gp),
          static_cast<double>(sqrt3 * (airy_c1 * s.fp + airy_c2 * s.gp))};
}

// Partial sums of sum_k (sign)^k c_k / zeta^k for the u_k and v_k
// coefficient families, stopped at the smallest term.
struct AsymptoticSums {
  double u_even, u_odd, v_even, v_odd;  // alternating even/odd split
  double u_alt, v_alt;                  // sum (-1)^k c_k / zeta^k
  double u_pos, v_pos;                  // sum c_k / zeta^k
};

inline AsymptoticSums asymptotic_sums(double zeta) {
  AsymptoticSums s{1.0, 0.0, 1.0, 0.0, 1.0, 1.0, 1.0, 1.0};
  double u = 1.0;
  double prev_mag = std::numeric_limits<double>::infinity();
  double zpow = 1.0;
  for (int k = 1; k < 200; ++k) {
    u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
    const double v = -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u;
    zpow *= zeta;
    const double tu = u / zpow;
    const double tv = v / zpow;
    const double mag = std::fabs(tu) + std::fabs(tv);
    if (mag > prev_mag) break;
    prev_mag = mag;
    const double alt = (k % 2 == 0) ? 1.0 : -1.0;
    s.u_alt += alt * tu;
    s.v_alt += alt * tv;
    s.u_pos += tu;
    s.v_pos += tv;
    // For the oscillatory side: even k -> cos/sin(-) series with (-1)^{k/2}
    if (k % 2 == 0) {
      const double sgn = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
      s.u_even += sgn * tu;
      s.v_even += sgn * tv;
    } else {
      const double sgn = (((k - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
      s.u_odd += sgn * tu;
      s.v_odd += sgn * tv;
    }
    if (mag < 1e-18) break;
  }
  return s;
}

inline double zeta_of(double t) { return 2.0 / 3.0 * t * std::sqrt(t); }

inline AiryPair ai_asymptotic_positive(double x) {
  const double zeta = zeta_of(x);
  const auto s = asymptotic_sums(zeta);
  const double x14 = std::sqrt(std::sqrt(x));
  const double e = std::exp(-zeta) / (2.0 * std::sqrt(std::numbers::pi));
  return {e / x14 * s.u_alt, -e * x14 * s.v_alt};
}

inline AiryPair bi_asymptotic_positive(double x) {
  const double zeta = zeta_of(x);
  if (zeta > 700.0) {
    throw numerical_error("airy: Bi(" + std::to_string(x) + ") overflows double precision");
  }
  const auto s = asymptotic_sums(zeta);
  const double x14 = std::sqrt(std::sqrt(x));
  const double e = std::exp(zeta) / std::sqrt(std::numbers::pi);
  return {e / x14 * s.u_pos, e * x14 * s.v_pos};
}

inline AiryQuad asymptotic_negative(double x) {
  const double t = -x;
  const double zeta = zeta_of(t);
  const auto s = asymptotic_sums(zeta);
  const double t14 = std::sqrt(std::sqrt(t));
  const double theta = zeta - std::numbers::pi / 4.0;
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  const double rp = 1.0 / std::sqrt(std::numbers::pi);
  return {rp / t14 * (s.u_even * c + s.u_odd * sn), rp / t14 * (-s.u_even * sn + s.u_odd * c),
          rp * t14 * (s.v_even * sn - s.v_odd * c), rp * t14 * (s.v_even * c + s.v_odd * sn)};
}

// One Taylor step of y'' = x y from (x0, y, y') to x0 + h, using
// a_{n} = (x0 a_{n-2} + a_{n-3}) / (n (n-1)).
inline std::array<ld, 2> airy_taylor_step(ld x0, ld y, ld yp, ld h) {
  ld a3 = 0, a2 = y, a1 = yp;  // a_{n-3}, a_{n-2}, a_{n-1}
  ld value = y + yp * h;
  ld deriv = yp;
  ld hn = h;  // h^{n-1}
  for (int n = 2; n < 200; ++n) {
    const ld an = (x0 * a2 + a3) / (static_cast<ld>(n) * (n - 1));
    const ld dterm = n * an * hn;
    hn *= h;
    const ld term = an * hn;
    value += term;
    deriv += dterm;
    a3 = a2;
    a2 = a1;
    a1 = an;
    if (n > 6 && std::fabs(term) < 1e-24L * std::fabs(value) &&
        std::fabs(dterm) < 1e-24L * std::fabs(deriv)) {
      break;
    }
  }
  return {value, deriv};
}

inline AiryPair ai_bridge(double x) {
  const auto start = ai_asymptotic_positive(asymptotic_threshold);
  ld xc = asymptotic_threshold;
  ld y = start.value, yp = start.derivative;
  const ld target = x;
  while (xc > target) {
    const ld h = std::max<ld>(-0.25L, target - xc);
    const auto next = airy_taylor_step(xc, y, yp, h);
    y = next[0];
    yp = next[1];
    xc += h;
  }
  return {static_cast<double>(y), static_cast<double>(yp)};
}

inline void check_argument(double x) {
  if (!std::isfinite(x)) throw domain_error("airy: non-finite argument");
  if (std::fabs(x) > 200.0) {
    throw domain_error("airy: |x| = " + std::to_string(std::fabs(x)) + " exceeds supported range 200");
  }
}

}  // namespace detail

/// Ai(x) and Ai'(x). Unlike airy_eval this never overflows for large positive x.
inline AiryPair airy_ai(double x) {
  detail::check_argument(x);
  if (x >= detail::asymptotic_threshold) return detail::ai_asymptotic_positive(x);
  if (x > detail::maclaurin_upper) return detail::ai_bridge(x);
  if (x >= detail::maclaurin_lower) {
    const auto q = detail::maclaurin(x);
    return {q.ai, q.ai_prime};
  }
  const auto q = detail::asymptotic_negative(x);
  return {q.ai, q.ai_prime};
}

/// All four Airy values at x. Throws numerical_error where Bi overflows
/// (x > ~104) and domain_error for |x| > 200.
inline AiryQuad airy_eval(double x) {
  detail::check_argument(x);
  if (x >= detail::asymptotic_threshold) {
    const auto a = detail::ai_asymptotic_positive(x);
    const auto b = detail::bi_asymptotic_positive(x);
    return {a.value, b.value, a.derivative, b.derivative};
  }
  if (x < detail::maclaurin_lower) return detail::asymptotic_negative(x);
  auto q = detail::maclaurin(x);
  if (x > detail::maclaurin_upper) {
    const auto a = detail::ai_bridge(x);
    q.ai = a.value;
    q.ai_prime = a.derivative;
  }
  return q;
}

/// n-th zero of Ai on the negative axis (n >= 1), so airy_ai_zero(1) ~ -2.338.
inline double airy_ai_zero(int n) {
  if (n < 1) throw domain_error("airy_ai_zero: n must be >= 1");
  // Seed: a_n ~ -T(3 pi (4n - 1) / 8)
  const double t = 3.0 * std::numbers::pi * (4.0 * n - 1.0) / 8.0;
  const double t2 = 1.0 / (t * t);
  const double seed =
      -std::pow(t, 2.0 / 3.0) * (1.0 + t2 * (5.0 / 48.0 + t2 * (-5.0 / 36.0 + t2 * 77125.0 / 82944.0)));
  double half = 0.05;
  double lo = seed - half, hi = seed + half;
  double flo = airy_ai(lo).value, fhi = airy_ai(hi).value;
  while (flo * fhi > 0.0) {
    half *= 1.5;
    if (half > 0.5) throw numerical_error("airy_ai_zero: failed to bracket zero " + std::to_string(n));
    lo = seed - half;
    hi = seed + half;
    flo = airy_ai(lo).value;
    fhi = airy_ai(hi).value;
  }
  for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(lo);
       ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = airy_ai(mid).value;
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Bessel function of the first kind J_order(x), 0 <= order <= 10, x >= 0.
/// Power series for small x, Miller's downward recurrence otherwise.
inline double bessel_j(int order, double x) {
  if (order < 0 || order > 10) throw domain_error("bessel_j: order must be in [0, 10]");
  if (!(x >= 0.0) || !std::isfinite(x)) throw domain_error("bessel_j: x must be finite and >= 0");
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;

  if (x < 1.0) {
    const double h = 0.5 * x;
    double term = 1.0;
    for (int k = 1; k <= order; ++k) term *= h / k;
    double sum = term;
    const double h2 = h * h;
    for (int k = 1; k < 60; ++k) {
      term *= -h2 / (static_cast<double>(k) * (k + order));
      sum += term;
      if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
    }
    return sum;
  }

  const double top = std::max<double>(order, x);
  int start = static_cast<int>(top + 30.0 + 12.0 * std::cbrt(top));
  if (start % 2 != 0) ++start;
  double next = 0.0;   // J_{k+1}
  double cur = 1e-300;  // J_k (unnormalized)
  double norm = 0.0;
  double wanted = 0.0;
  for (int k = start; k > 0; --k) {
    const double prev = 2.0 * k / x * cur - next;  // J_{k-1}
    next = cur;
    cur = prev;
    if (k - 1 == order) wanted = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
    if (std::fabs(cur) > 1e250) {
      next *= 1e-250;
      cur *= 1e-250;
      norm *= 1e-250;
      wanted *= 1e-250;
    }
  }
  norm += cur;  // J_0
  if (order == 0) wanted = cur;
  return wanted / norm;
}

}  // namespace trap_lab::specfun

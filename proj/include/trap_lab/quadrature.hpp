#pragma once

// Thin wrappers over Boost.Math Gauss-Kronrod that turn non-convergence into
// a numerical_error carrying the residual estimate.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "trap_lab/error.hpp"

namespace trap_lab::quad {

struct Result {
  double value;
  double error;
};

template <class F>
Result adaptive(F f, double a, double b, double rel_tol = 1e-12, unsigned max_depth = 15,
                const std::string& what = "quadrature") {
  double err = 0, l1 = 0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, rel_tol,
                                                                                   &err, &l1);
  // Accept when the estimate is small against the value or against the L1 norm,
  // so integrals that cancel to ~0 still converge.
  const double scale = std::max(std::fabs(v), 1e-3 * l1);
  if (!std::isfinite(v) || err > 1e3 * rel_tol * scale + 1e-300) {
    std::ostringstream os;
    os << what << ": adaptive quadrature did not converge (value " << v << ", error estimate " << err << ")";
    throw numerical_error(os.str());
  }
  return {v, err};
}

// Composite 15-point Gauss-Legendre on `panels` equal sub-intervals.
template <class F>
double composite(F f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = 0;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * h;
    s += boost::math::quadrature::gauss<double, 15>::integrate(f, lo, lo + h);
  }
  return s;
}

}  // namespace trap_lab::quad

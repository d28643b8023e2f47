#pragma once

// Lowest eigenpairs of a symmetric tridiagonal matrix: LAPACK bisection
// (dstebz) for the eigenvalues, inverse iteration (dstein) for the vectors.

#include <lapacke.h>

#include <string>
#include <vector>

#include "trap_lab/error.hpp"

namespace trap_lab::tridiag {

struct Eigenpairs {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;  // one per value, length n
};

inline Eigenpairs lowest(const std::vector<double>& diag, const std::vector<double>& off, int count) {
  const lapack_int n = static_cast<lapack_int>(diag.size());
  if (n < 2 || off.size() + 1 != diag.size()) throw numerical_error("tridiagonal: inconsistent matrix sizes");
  if (count < 1) return {};
  if (count > n) count = n;
  std::vector<double> w(n);
  std::vector<lapack_int> iblock(n), isplit(n);
  lapack_int m = 0, nsplit = 0;
  lapack_int info = LAPACKE_dstebz('I', 'B', n, 0.0, 0.0, 1, count, 0.0, diag.data(), off.data(), &m, &nsplit,
                                   w.data(), iblock.data(), isplit.data());
  if (info != 0) throw numerical_error("tridiagonal: bisection failed (dstebz info " + std::to_string(info) + ")");
  std::vector<double> z(static_cast<std::size_t>(n) * m);
  std::vector<lapack_int> ifail(m);
  info = LAPACKE_dstein(LAPACK_COL_MAJOR, n, diag.data(), off.data(), m, w.data(), iblock.data(), isplit.data(),
                        z.data(), n, ifail.data());
  if (info != 0)
    throw numerical_error("tridiagonal: inverse iteration failed (dstein info " + std::to_string(info) + ")");
  Eigenpairs out;
  for (lapack_int j = 0; j < m; ++j) {
    out.values.push_back(w[j]);
    out.vectors.emplace_back(z.begin() + j * n, z.begin() + (j + 1) * n);
  }
  return out;
}

}  // namespace trap_lab::tridiag

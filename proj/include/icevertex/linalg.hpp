/*
 * Copyright (c) Contributors to the icevertex project.
 * For complete copyright and license terms please see the LICENSE at the root
 * of this distribution.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef ICEVERTEX_LINALG_HPP
#define ICEVERTEX_LINALG_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <utility>
#include <vector>

namespace icevertex {

/// Determinant of a dense complex matrix together with a cheap conditioning
/// estimate: the ratio of the largest to the smallest pivot modulus of the
/// partially pivoted LU factorization. An exactly singular matrix yields
/// det = 0 and conditionEstimate = +infinity; it is the caller's decision
/// whether that is an error. The empty matrix has det 1.
template <typename Real>
struct LuDet {
  std::complex<Real> det{Real(1), Real(0)};
  Real conditionEstimate = Real(1);
};

/// Computes LuDet by in-place Gaussian elimination with partial pivoting.
/// The matrix is consumed. Works for any floating-point Real; long double
/// is used where a formula is evaluated close to a removable singularity.
template <typename Real>
LuDet<Real> det_lu(std::vector<std::vector<std::complex<Real>>> a) {
  using C = std::complex<Real>;
  const std::size_t n = a.size();
  LuDet<Real> out;
  Real maxPivot = Real(0);
  Real minPivot = std::numeric_limits<Real>::infinity();
  C det{Real(1), Real(0)};
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    Real best = std::abs(a[k][k]);
    for (std::size_t r = k + 1; r < n; ++r) {
      const Real cand = std::abs(a[r][k]);
      if (cand > best) {
        best = cand;
        pivot = r;
      }
    }
    if (best == Real(0)) {
      out.det = C{Real(0), Real(0)};
      out.conditionEstimate = std::numeric_limits<Real>::infinity();
      return out;
    }
    if (pivot != k) {
      std::swap(a[pivot], a[k]);
      det = -det;
    }
    const C diag = a[k][k];
    det *= diag;
    maxPivot = std::max(maxPivot, best);
    minPivot = std::min(minPivot, best);
    for (std::size_t r = k + 1; r < n; ++r) {
      const C factor = a[r][k] / diag;
      if (factor == C{}) continue;
      for (std::size_t c = k + 1; c < n; ++c) a[r][c] -= factor * a[k][c];
    }
  }
  out.det = det;
  out.conditionEstimate = n == 0 ? Real(1) : maxPivot / minPivot;
  return out;
}

}  // namespace icevertex

#endif  // ICEVERTEX_LINALG_HPP

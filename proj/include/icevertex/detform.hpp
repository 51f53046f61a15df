/*
 * Copyright (c) Contributors to the icevertex project.
 * For complete copyright and license terms please see the LICENSE at the root
 * of this distribution.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef ICEVERTEX_DETFORM_HPP
#define ICEVERTEX_DETFORM_HPP

#include "icevertex/weights.hpp"

namespace icevertex {

/// Which closed form of the partition function was evaluated.
enum class DetFormula { Theorem35, AppendixA };

/// Value of a determinant formula plus the LU pivot-ratio conditioning of
/// the determinant factor. conditionEstimate >= 1; +infinity flags an
/// exactly singular matrix (reported, never silently swallowed).
struct DetReport {
  Complex value;
  double conditionEstimate;
  DetFormula formula;
};

/// Evaluates the Izergin-Korepin-type determinant representation of the
/// partition function: a scalar prefactor and product ratio times det M,
/// where M has F-type rows built from the mu parameters, then rows
/// h((n-i)(2 lambda_j + gamma)) for m < i < n, then a row of ones (the two
/// trailing groups exist only when m < n). Throws PoleError, naming the
/// factor, when a denominator vanishes exactly.
DetReport det_partition(const ModelParams& params);

/// Evaluates the equivalent representation whose trailing rows carry the
/// coefficients C_{n-m-1}(lambda_j) ... C_0(lambda_j) instead, with the
/// prefactor phi^{n-m} e^{-C(n+1,2) gamma} f(gamma)^n / prod_k (1-e^{-2k
/// gamma}). Additionally requires e^{-2k gamma} != 1 for 1 <= k <= n-m.
DetReport det_partition_appendix(const ModelParams& params);

/// Which pair of parameters check_symmetry swaps (1-based indices).
struct SwapSpec {
  enum class Kind { LambdaPair, MuPair };
  Kind kind;
  int i;
  int j;
};

/// Relative difference of det_partition before and after swapping one pair
/// of lambda or mu parameters. Exactly zero for the identity swap; tiny for
/// everything else because the partition function is symmetric in each
/// family separately.
double check_symmetry(const ModelParams& params, const SwapSpec& swap);

/// Polynomiality check in t = e^{2 mu_j} (j is 1-based): the product
/// e^{(2n-2) mu_j} prod_i f(lambda_i + mu_j + gamma) f(lambda_i - mu_j +
/// gamma) times the partition function is a polynomial of degree 2n-1 in t.
/// Samples 2n+1 points, Lagrange-interpolates the stated degree through the
/// leading samples, and returns the relative mismatch at the final sample.
/// Passing an explicit lower `degree` (e.g. 2n-2) is the negative control:
/// the mismatch must then be large.
double check_polynomiality(const ModelParams& params, int j, int degree = -1);

/// Recursion check at the specialization mu_k := sign * lambda_l (1-based
/// k, l; sign is +1 or -1). The left side is det_partition's limit at the
/// specialization (computed stably via the cofactor of the entry whose
/// denominator vanishes); the right side is the one-point recursion factor
///   e^{-n gamma} e^{zeta + mu_k} f(zeta - mu_k)
///     prod_{i=1}^n f(lambda_i + lambda_l) / f(lambda_i + lambda_l + gamma)
/// times det_partition of the (n-1, m-1) system with lambda_l and mu_k
/// removed. Returns the relative difference.
double check_recursion(const ModelParams& params, int k, int l, int sign);

/// Coefficient C_k(lambda): the sum of e^{(k1+k2-k3-k4) v + (k1-k2+k3-k4)
/// gamma} over k1+k2+k3+k4 = k with v = 2 lambda + gamma. C_0 = 1.
Complex ck_coefficient(int k, Complex lambda, Complex gamma);

/// Decoupling check for the last vertical line: with Re(mu_m) pushed to
/// `bigReal`, the (n, m) partition function approaches
///   f(gamma) / (phi e^{gamma}) * sum_{k=0}^{n-m} e^{-2k gamma}
/// times the (n, m-1) partition function, with error O(e^{-2 Re mu_m}).
/// Returns the relative difference. Requires m >= 1 and phi != 0.
double check_limit_step(const ModelParams& params, double bigReal = 20.0);

/// Partition function at the crossing value gamma = 4 pi i / 3 with all
/// lambda_i -> gamma and mu_j -> 0, obtained by Richardson extrapolation:
/// lambda_i = gamma + eps*i, mu_j = eps*(j + 1/2), value = 2 Z(eps/2) -
/// Z(eps). The determinant is evaluated in extended precision because the
/// matrix degenerates as eps -> 0.
Complex homogeneous_limit(int n, int m, Complex zeta, Complex phi,
                          double eps = 1e-3);

}  // namespace icevertex

#endif  // ICEVERTEX_DETFORM_HPP

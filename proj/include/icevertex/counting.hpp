/*
 * Copyright (c) Contributors to the icevertex project.
 * For complete copyright and license terms please see the LICENSE at the root
 * of this distribution.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "icevertex/errors.hpp"
#include "icevertex/weights.hpp"

namespace icevertex {

/// Exact arbitrary-precision carriers for the counting formulas.
using BigInt = mpz_class;
using BigRational = mpq_class;

/// Rising factorial (a)(a+1)...(a+count-1); empty product for count = 0.
BigRational pochhammer(const BigRational& a, int count);

/// The Wilson polynomial W_k(x^2; 1/3, 1/2, 2/3, 1) evaluated exactly at
/// x^2 = xsq. The conjugate Pochhammer pair (1/3+ix)_j (1/3-ix)_j enters as
/// the real product prod_{p<j} ((1/3+p)^2 + xsq), so the whole evaluation
/// stays rational.
BigRational wilson_poly(int k, const BigRational& xsq);

/// Leading coefficient of W_k as a polynomial in t^2 (where xsq = (t/6)^2):
/// (-1)^k (3/2+k)_k / 6^{2k}. Dividing by it makes the polynomial monic.
BigRational wilson_leading(int k);

/// Exact coefficients of W_k in ascending powers of xsq (length k+1).
std::vector<BigRational> wilson_coefficients(int k);

/// Closed-form norm <p_k, p_k> of the monic polynomial p_k(t^2) under the
/// weight t^2 sinh(pi t/6)/sinh(pi t/2) on [0, infinity).
double wilson_norm(int k);

/// Number of states of the (n,m) system with exactly k turns of the
/// reflecting kind, via the Wilson-determinant closed form. Exact; throws
/// NonIntegerResult if the rational evaluation fails to be a non-negative
/// integer (which would falsify the formula).
BigInt count_Nk(int n, int m, int k);

/// The same count through the (n-m)-fold hypergeometric multi-sum that
/// results from expanding the Wilson determinant. Must agree with count_Nk.
BigInt count_Nk_hypersum(int n, int m, int k);

struct CountReport {
  int n = 0;
  int m = 0;
  std::vector<BigInt> Nk;  // indexed by k = 0..m
  BigInt total{0};
};

/// All per-k counts plus their total for the (n,m) system.
CountReport count_total(int n, int m);

/// {"n":..,"m":..,"N":["<dec>",...],"total":"<dec>"} with decimal strings.
std::string count_report_json(const CountReport& report);

/// Predicted partition value of the k-restricted sum at the symmetric point
/// (gamma = 4 pi i/3, all lambdas = gamma, all mus = 0), reconstructed from
/// the exact integer count by inverting the specialization identity.
Complex predict_Z_spec(int n, int m, int k, Complex zeta, Complex phi);

/// |quadrature inner product <p_k, p_l> minus h_k delta_{kl}| / max(1, h_k),
/// integrating on [0, 80] with adaptive Simpson. 0 <= k, l <= 6.
double orthogonality_residual(int k, int l);

}  // namespace icevertex

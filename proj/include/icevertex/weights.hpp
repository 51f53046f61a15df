/*
 * Copyright (c) Contributors to the icevertex project.
 * For complete copyright and license terms please see the LICENSE at the root
 * of this distribution.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef ICEVERTEX_WEIGHTS_HPP
#define ICEVERTEX_WEIGHTS_HPP

#include <complex>
#include <optional>
#include <vector>

#include "icevertex/lattice.hpp"
#include "icevertex/rng.hpp"

namespace icevertex {

using Complex = std::complex<double>;

/// All parameters of the model: the crossing parameter gamma, the boundary
/// parameter zeta, the turn-creation constant phi, the double-row parameters
/// lambda_1..lambda_n and the line parameters mu_1..mu_m.
struct ModelParams {
  Complex gamma;
  Complex zeta;
  Complex phi;
  std::vector<Complex> lambdas;
  std::vector<Complex> mus;

  int n() const { return static_cast<int>(lambdas.size()); }
  int m() const { return static_cast<int>(mus.size()); }
  LatticeSize size() const { return {n(), m()}; }
};

/// f(x) = 2 sinh(x).
inline Complex f(Complex x) { return 2.0 * std::sinh(x); }

/// h(x) = 2 cosh(x).
inline Complex h(Complex x) { return 2.0 * std::cosh(x); }

/// Local Boltzmann weight of one vertex kind at spectral argument `arg`:
///   a_pm = 1,
///   b_pm = e^{mp gamma} f(arg) / f(arg + gamma),
///   c_pm = e^{pm arg} f(gamma) / f(arg + gamma).
/// Throws PoleError when f(arg + gamma) vanishes.
Complex local_weight(VertexKind kind, Complex arg, Complex gamma);

/// Boundary weight of one turn of double row with parameter `lambda`:
///   k_pm = e^{zeta mp lambda} f(zeta pm lambda),  k_create = phi f(2 lambda).
Complex turn_weight(TurnKind kind, Complex lambda, const ModelParams& params);

/// Spectral argument of a vertex: lambda - mu on upper rows, lambda + mu on
/// lower rows.
inline Complex vertex_argument(RowHalf half, Complex lambda, Complex mu) {
  return half == RowHalf::Upper ? lambda - mu : lambda + mu;
}

/// Product of all 2nm vertex weights and n turn weights of one state. Line c
/// carries mu_{m+1-c} and double row i carries lambda_i. Throws PoleError
/// (naming the site) and SizeError if state and params disagree on (n, m).
Complex state_weight(const LatticeState& state, const ModelParams& params);

/// Partition function by direct summation over all states, in enumeration
/// order with compensated (Kahan) summation. The oracle everything else is
/// checked against.
Complex partition_brute(const ModelParams& params);

/// Same sum restricted to states with exactly k turns of the k_plus kind
/// (0 <= k <= m; DomainError otherwise).
Complex partition_brute_fixed_k(const ModelParams& params, int k);

/// Same sum computed as `workers` independent shards (each compensated, then
/// combined). Agrees with partition_brute to ~1e-15 relative; provided so
/// callers can parallelize large sums without changing the contract.
Complex partition_brute_parallel(const ModelParams& params, int workers);

/// Max-norm residual of the Yang-Baxter equation
///   R12(l1-l2) R13(l1-l3) R23(l2-l3) = R23(l2-l3) R13(l1-l3) R12(l1-l2)
/// on the 8-dimensional tensor cube, with the 4x4 R-matrix laid out in the
/// basis (++, +-, -+, --) as
///   [[a+,0,0,0],[0,b+,c-,0],[0,c+,b-,0],[0,0,0,a-]].
double ybe_residual(Complex l1, Complex l2, Complex l3, Complex gamma);

/// Max-norm residual of the reflection (boundary Yang-Baxter) equation
///   R(l-lp) K0(l) Rt(l+lp) K0'(lp) = K0'(lp) R(l+lp) K0(l) Rt(l-lp)
/// with the triangular boundary matrix K = [[k+,kc],[0,k-]], K0 = K tensor
/// Id, K0' = Id tensor K, and Rt(u) = P R(u) P the same R-matrix with the
/// two tensor factors swapped.
double reflection_residual(Complex l, Complex lp, const ModelParams& params);

/// True when every denominator and every quantity the determinant identities
/// divide by stays at least `eps` away from zero in modulus: f(l_i - l_j)
/// for i != j, f(l_i + l_j) for i <= j, f(l_i - l_j + gamma) for all i, j,
/// f(l_i + l_j + gamma) for i <= j, f(m_i +- m_j) for i < j, f(m_j +- l_i)
/// and f(m_j +- l_i +- gamma) (all four sign choices) for all i, j, and
/// f(k gamma) for 1 <= k <= max(1, n - m).
bool is_generic(const ModelParams& params, double eps);

/// Draws every parameter's real and imaginary part uniformly from [-1, 1]
/// and resamples until is_generic(params, eps) holds. When `gamma` is given
/// it is pinned instead of drawn (for checks at a special crossing value).
ModelParams sample_generic(LatticeSize size, Rng& rng, double eps = 0.05,
                           std::optional<Complex> gamma = std::nullopt);

}  // namespace icevertex

#endif  // ICEVERTEX_WEIGHTS_HPP

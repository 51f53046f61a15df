/*
 * Copyright (c) Contributors to the icevertex project.
 * For complete copyright and license terms please see the LICENSE at the root
 * of this distribution.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "icevertex/weights.hpp"

#include <array>
#include <cmath>
#include <string>
#include <thread>

namespace icevertex {

namespace {

constexpr double kPoleFloor = 1e-300;

bool finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

Complex checked_ratio(Complex num, Complex den, const char* factor) {
  if (std::abs(den) < kPoleFloor) {
    throw PoleError(std::string("vanishing denominator ") + factor);
  }
  const Complex q = num / den;
  if (!finite(q)) {
    throw PoleError(std::string("non-finite weight from denominator ") +
                    factor);
  }
  return q;
}

/// Compensated accumulator; real and imaginary parts are compensated
/// independently.
struct KahanSum {
  double sumRe = 0.0, compRe = 0.0;
  double sumIm = 0.0, compIm = 0.0;

  void add(Complex z) {
    add_part(sumRe, compRe, z.real());
    add_part(sumIm, compIm, z.imag());
  }
  Complex value() const { return {sumRe, sumIm}; }

 private:
  static void add_part(double& sum, double& comp, double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

template <std::size_t N>
using Mat = std::array<std::array<Complex, N>, N>;

template <std::size_t N>
Mat<N> matmul(const Mat<N>& a, const Mat<N>& b) {
  Mat<N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t k = 0; k < N; ++k) {
      const Complex aik = a[i][k];
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < N; ++j) out[i][j] += aik * b[k][j];
    }
  }
  return out;
}

template <std::size_t N>
double max_abs_diff(const Mat<N>& a, const Mat<N>& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      r = std::max(r, std::abs(a[i][j] - b[i][j]));
    }
  }
  return r;
}

/// The 4x4 R-matrix in the basis (++, +-, -+, --).
Mat<4> r_matrix(Complex u, Complex gamma) {
  Mat<4> r{};
  r[0][0] = 1.0;
  r[3][3] = 1.0;
  r[1][1] = local_weight(VertexKind::BPlus, u, gamma);
  r[1][2] = local_weight(VertexKind::CMinus, u, gamma);
  r[2][1] = local_weight(VertexKind::CPlus, u, gamma);
  r[2][2] = local_weight(VertexKind::BMinus, u, gamma);
  return r;
}

/// Same R-matrix with the two tensor factors swapped: P R P.
Mat<4> swapped(const Mat<4>& r) {
  const auto s = [](int i) { return i == 1 ? 2 : i == 2 ? 1 : i; };
  Mat<4> out{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out[i][j] = r[s(i)][s(j)];
  }
  return out;
}

/// Embeds a two-factor operator into factors p < q of the tensor cube.
Mat<8> embed(const Mat<4>& r, int p, int q) {
  Mat<8> out{};
  for (int i = 0; i < 8; ++i) {
    const int ib[3] = {(i >> 2) & 1, (i >> 1) & 1, i & 1};
    for (int j = 0; j < 8; ++j) {
      const int jb[3] = {(j >> 2) & 1, (j >> 1) & 1, j & 1};
      bool diagonal_elsewhere = true;
      for (int t = 0; t < 3; ++t) {
        if (t != p && t != q && ib[t] != jb[t]) diagonal_elsewhere = false;
      }
      if (!diagonal_elsewhere) continue;
      out[i][j] = r[(ib[p] << 1) | ib[q]][(jb[p] << 1) | jb[q]];
    }
  }
  return out;
}

/// The triangular boundary matrix K(lambda) = [[k+, kc], [0, k-]] acting on
/// tensor factor `factor` (0 = left, 1 = right) of a two-factor space.
Mat<4> k_embedded(Complex lambda, const ModelParams& params, int factor) {
  const Complex kp = turn_weight(TurnKind::KPlus, lambda, params);
  const Complex km = turn_weight(TurnKind::KMinus, lambda, params);
  const Complex kc = turn_weight(TurnKind::KCreate, lambda, params);
  Mat<4> out{};
  for (int other = 0; other < 2; ++other) {
    const auto idx = [&](int own) {
      return factor == 0 ? (own << 1) | other : (other << 1) | own;
    };
    out[idx(0)][idx(0)] = kp;
    out[idx(0)][idx(1)] = kc;
    out[idx(1)][idx(1)] = km;
  }
  return out;
}

}  // namespace

Complex local_weight(VertexKind kind, Complex arg, Complex gamma) {
  switch (kind) {
    case VertexKind::APlus:
    case VertexKind::AMinus:
      return 1.0;
    case VertexKind::BPlus:
      return checked_ratio(std::exp(-gamma) * f(arg), f(arg + gamma),
                           "f(arg + gamma)");
    case VertexKind::BMinus:
      return checked_ratio(std::exp(gamma) * f(arg), f(arg + gamma),
                           "f(arg + gamma)");
    case VertexKind::CPlus:
      return checked_ratio(std::exp(arg) * f(gamma), f(arg + gamma),
                           "f(arg + gamma)");
    case VertexKind::CMinus:
      return checked_ratio(std::exp(-arg) * f(gamma), f(arg + gamma),
                           "f(arg + gamma)");
  }
  throw DomainError("unknown vertex kind");
}

Complex turn_weight(TurnKind kind, Complex lambda, const ModelParams& params) {
  switch (kind) {
    case TurnKind::KPlus:
      return std::exp(params.zeta - lambda) * f(params.zeta + lambda);
    case TurnKind::KMinus:
      return std::exp(params.zeta + lambda) * f(params.zeta - lambda);
    case TurnKind::KCreate:
      return params.phi * f(2.0 * lambda);
  }
  throw DomainError("unknown turn kind");
}

Complex state_weight(const LatticeState& state, const ModelParams& params) {
  if (state.size() != params.size()) {
    throw SizeError("state and params disagree on the lattice size");
  }
  const int n = params.n();
  const int m = params.m();
  Complex w = 1.0;
  for (int i = 1; i <= n; ++i) {
    const Complex lambda = params.lambdas[static_cast<std::size_t>(i - 1)];
    w *= turn_weight(turn_kind(state, i), lambda, params);
    for (int half = 0; half < 2; ++half) {
      const int r = 2 * i - 1 + half;
      const RowHalf rowHalf = half == 0 ? RowHalf::Lower : RowHalf::Upper;
      for (int c = 1; c <= m; ++c) {
        const Complex mu = params.mus[static_cast<std::size_t>(m - c)];
        const Complex arg = vertex_argument(rowHalf, lambda, mu);
        try {
          w *= local_weight(classify_vertex(state, r, c), arg, params.gamma);
        } catch (const PoleError& e) {
          throw PoleError(std::string(e.what()) + " at vertex (row " +
                          std::to_string(r) + ", line " + std::to_string(c) +
                          ")");
        }
      }
    }
  }
  if (!finite(w)) {
    throw PoleError("state weight overflowed to a non-finite value");
  }
  return w;
}

Complex partition_brute(const ModelParams& params) {
  KahanSum sum;
  for (const auto& state : enumerate_states(params.size())) {
    sum.add(state_weight(state, params));
  }
  return sum.value();
}

Complex partition_brute_fixed_k(const ModelParams& params, int k) {
  if (k < 0 || k > params.m()) {
    throw DomainError("turn count k must satisfy 0 <= k <= m (k = " +
                      std::to_string(k) + ", m = " + std::to_string(params.m()) +
                      ")");
  }
  KahanSum sum;
  for (const auto& state : enumerate_states(params.size())) {
    if (state_stats(state).nu(TurnKind::KPlus) == k) {
      sum.add(state_weight(state, params));
    }
  }
  return sum.value();
}

Complex partition_brute_parallel(const ModelParams& params, int workers) {
  if (workers < 1) throw DomainError("worker count must be positive");
  std::vector<Complex> partial(static_cast<std::size_t>(workers));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        KahanSum sum;
        for (const auto& state :
             enumerate_states_shard(params.size(), w, workers)) {
          sum.add(state_weight(state, params));
        }
        partial[static_cast<std::size_t>(w)] = sum.value();
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  KahanSum total;
  for (const Complex z : partial) total.add(z);
  return total.value();
}

double ybe_residual(Complex l1, Complex l2, Complex l3, Complex gamma) {
  const Mat<8> r12 = embed(r_matrix(l1 - l2, gamma), 0, 1);
  const Mat<8> r13 = embed(r_matrix(l1 - l3, gamma), 0, 2);
  const Mat<8> r23 = embed(r_matrix(l2 - l3, gamma), 1, 2);
  return max_abs_diff(matmul(matmul(r12, r13), r23),
                      matmul(matmul(r23, r13), r12));
}

double reflection_residual(Complex l, Complex lp, const ModelParams& params) {
  const Mat<4> rMinus = r_matrix(l - lp, params.gamma);
  const Mat<4> rPlus = r_matrix(l + lp, params.gamma);
  const Mat<4> k0 = k_embedded(l, params, 0);
  const Mat<4> k0p = k_embedded(lp, params, 1);
  const Mat<4> lhs =
      matmul(matmul(matmul(rMinus, k0), swapped(rPlus)), k0p);
  const Mat<4> rhs =
      matmul(matmul(matmul(k0p, rPlus), k0), swapped(rMinus));
  return max_abs_diff(lhs, rhs);
}

bool is_generic(const ModelParams& params, double eps) {
  const auto ok = [&](Complex x) { return std::abs(f(x)) >= eps; };
  const int n = params.n();
  const int m = params.m();
  const auto& l = params.lambdas;
  const auto& mu = params.mus;
  const Complex g = params.gamma;

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && !ok(l[i] - l[j])) return false;
      if (!ok(l[i] - l[j] + g)) return false;
      if (i <= j && !ok(l[i] + l[j])) return false;
      if (i <= j && !ok(l[i] + l[j] + g)) return false;
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (!ok(mu[i] - mu[j]) || !ok(mu[i] + mu[j])) return false;
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      for (const Complex base : {mu[j] - l[i], mu[j] + l[i]}) {
        if (!ok(base)) return false;
        if (!ok(base + g) || !ok(base - g)) return false;
      }
    }
  }
  for (int k = 1; k <= std::max(1, n - m); ++k) {
    if (!ok(static_cast<double>(k) * g)) return false;
  }
  return true;
}

ModelParams sample_generic(LatticeSize size, Rng& rng, double eps,
                           std::optional<Complex> gamma) {
  require_valid_size(size);
  const auto draw = [&rng] {
    const double re = rng.uniform_sym();
    const double im = rng.uniform_sym();
    return Complex{re, im};
  };
  for (;;) {
    ModelParams params;
    params.gamma = gamma ? *gamma : draw();
    params.zeta = draw();
    params.phi = draw();
    params.lambdas.resize(static_cast<std::size_t>(size.n));
    for (auto& x : params.lambdas) x = draw();
    params.mus.resize(static_cast<std::size_t>(size.m));
    for (auto& x : params.mus) x = draw();
    if (is_generic(params, eps)) return params;
  }
}

}  // namespace icevertex

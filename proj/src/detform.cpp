/*
 * Copyright (c) Contributors to the icevertex project.
 * For complete copyright and license terms please see the LICENSE at the root
 * of this distribution.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "icevertex/detform.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "icevertex/linalg.hpp"

namespace icevertex {

namespace {

// The whole evaluation pipeline is templated on the floating-point type:
// double everywhere except homogeneous_limit, which runs in long double
// because its matrix degenerates as the extrapolation parameter shrinks.

template <typename Real>
using Cx = std::complex<Real>;

template <typename Real>
struct Ctx {
  Cx<Real> gamma, zeta, phi;
  std::vector<Cx<Real>> lambdas, mus;

  int n() const { return static_cast<int>(lambdas.size()); }
  int m() const { return static_cast<int>(mus.size()); }
};

template <typename Real>
Cx<Real> widen(Complex z) {
  return {static_cast<Real>(z.real()), static_cast<Real>(z.imag())};
}

template <typename Real>
Ctx<Real> widen_params(const ModelParams& p) {
  Ctx<Real> c;
  c.gamma = widen<Real>(p.gamma);
  c.zeta = widen<Real>(p.zeta);
  c.phi = widen<Real>(p.phi);
  for (const Complex z : p.lambdas) c.lambdas.push_back(widen<Real>(z));
  for (const Complex z : p.mus) c.mus.push_back(widen<Real>(z));
  return c;
}

template <typename Real>
Cx<Real> fx(Cx<Real> x) {
  return Real(2) * std::sinh(x);
}

template <typename Real>
Cx<Real> hx(Cx<Real> x) {
  return Real(2) * std::cosh(x);
}

template <typename Real>
Cx<Real> ipow(Cx<Real> base, int exponent) {
  Cx<Real> out{Real(1), Real(0)};
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

template <typename Real>
void require_nonzero(Cx<Real> value, const std::string& name) {
  if (std::abs(value) < Real(1e-300)) {
    throw PoleError("vanishing factor " + name);
  }
}

long long binom2(long long x) { return x * (x - 1) / 2; }

std::string idx(const char* base, int i) {
  return std::string(base) + "_" + std::to_string(i);
}

/// Denominator of the F-type matrix entry at (mu_i, lambda_j):
/// f(mu +- lambda) f(mu + lambda + gamma) f(mu - lambda - gamma).
/// 1-based i, j appear only in pole messages.
template <typename Real>
Cx<Real> f_entry(const Ctx<Real>& c, int i, int j) {
  const Cx<Real> mu = c.mus[static_cast<std::size_t>(i - 1)];
  const Cx<Real> la = c.lambdas[static_cast<std::size_t>(j - 1)];
  const Cx<Real> d1 = fx(mu + la);
  const Cx<Real> d2 = fx(mu - la);
  const Cx<Real> d3 = fx(mu + la + c.gamma);
  const Cx<Real> d4 = fx(mu - la - c.gamma);
  require_nonzero(d1, "f(" + idx("mu", i) + " + " + idx("lambda", j) + ")");
  require_nonzero(d2, "f(" + idx("mu", i) + " - " + idx("lambda", j) + ")");
  require_nonzero(d3,
                  "f(" + idx("mu", i) + " + " + idx("lambda", j) + " + gamma)");
  require_nonzero(d4,
                  "f(" + idx("mu", i) + " - " + idx("lambda", j) + " - gamma)");
  return Real(1) / (d1 * d2 * d3 * d4);
}

/// The product ratio shared by both determinant representations:
///   prod_i [e^{mu_i + zeta} f(mu_i - zeta)] prod_i f(2 lambda_i)
///   prod_{i,j} f(mu_j +- lambda_i)
///   / [prod_{i<j} f(mu_j +- mu_i) prod_{i<j} f(l_i - l_j) f(l_i+l_j+gamma)]
/// When skipMu/skipLambda are set (0-based) the single numerator factor
/// f(mu_skipMu - sign*lambda_skipLambda) is omitted; that is the factor that
/// vanishes at the recursion specialization and cancels against the
/// determinant's diverging entry.
template <typename Real>
Cx<Real> common_ratio(const Ctx<Real>& c, int skipLambda = -1, int skipMu = -1,
                      int sign = 0) {
  const int n = c.n();
  const int m = c.m();
  Cx<Real> num{Real(1), Real(0)};
  Cx<Real> den{Real(1), Real(0)};
  for (int j = 0; j < m; ++j) {
    num *= std::exp(c.mus[j] + c.zeta) * fx(c.mus[j] - c.zeta);
  }
  for (int i = 0; i < n; ++i) num *= fx(Real(2) * c.lambdas[i]);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const bool skipHere = (i == skipLambda && j == skipMu);
      if (!(skipHere && sign == -1)) num *= fx(c.mus[j] + c.lambdas[i]);
      if (!(skipHere && sign == +1)) num *= fx(c.mus[j] - c.lambdas[i]);
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const Cx<Real> plus = fx(c.mus[j] + c.mus[i]);
      const Cx<Real> minus = fx(c.mus[j] - c.mus[i]);
      require_nonzero(plus,
                      "f(" + idx("mu", j + 1) + " + " + idx("mu", i + 1) + ")");
      require_nonzero(minus,
                      "f(" + idx("mu", j + 1) + " - " + idx("mu", i + 1) + ")");
      den *= plus * minus;
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Cx<Real> diff = fx(c.lambdas[i] - c.lambdas[j]);
      const Cx<Real> cross = fx(c.lambdas[i] + c.lambdas[j] + c.gamma);
      require_nonzero(diff, "f(" + idx("lambda", i + 1) + " - " +
                                idx("lambda", j + 1) + ")");
      require_nonzero(cross, "f(" + idx("lambda", i + 1) + " + " +
                                 idx("lambda", j + 1) + " + gamma)");
      den *= diff * cross;
    }
  }
  return num / den;
}

template <typename Real>
Cx<Real> ck_sum(int k, Cx<Real> lambda, Cx<Real> gamma) {
  const Cx<Real> v = Real(2) * lambda + gamma;
  Cx<Real> sum{Real(0), Real(0)};
  for (int k1 = 0; k1 <= k; ++k1) {
    for (int k2 = 0; k2 + k1 <= k; ++k2) {
      for (int k3 = 0; k3 + k2 + k1 <= k; ++k3) {
        const int k4 = k - k1 - k2 - k3;
        sum += std::exp(Real(k1 + k2 - k3 - k4) * v +
                        Real(k1 - k2 + k3 - k4) * gamma);
      }
    }
  }
  return sum;
}

/// The matrix shared by both representations, minus the choice of trailing
/// rows. Rows and columns can be masked out for cofactor work.
template <typename Real>
std::vector<std::vector<Cx<Real>>> build_matrix(const Ctx<Real>& c,
                                                DetFormula formula,
                                                int skipRow = -1,
                                                int skipCol = -1) {
  const int n = c.n();
  const int m = c.m();
  std::vector<std::vector<Cx<Real>>> a;
  for (int r = 0; r < n; ++r) {
    if (r == skipRow) continue;
    std::vector<Cx<Real>> row;
    for (int j = 0; j < n; ++j) {
      if (j == skipCol) continue;
      Cx<Real> entry;
      if (r < m) {
        entry = f_entry(c, r + 1, j + 1);
      } else if (formula == DetFormula::Theorem35) {
        entry = (r == n - 1)
                    ? Cx<Real>{Real(1), Real(0)}
                    : hx(Real(n - 1 - r) *
                         (Real(2) * c.lambdas[static_cast<std::size_t>(j)] +
                          c.gamma));
      } else {
        entry = ck_sum(n - 1 - r, c.lambdas[static_cast<std::size_t>(j)],
                       c.gamma);
      }
      row.push_back(entry);
    }
    a.push_back(std::move(row));
  }
  return a;
}

template <typename Real>
Cx<Real> prefactor(const Ctx<Real>& c, DetFormula formula) {
  const int n = c.n();
  const int m = c.m();
  const Cx<Real> fg = fx(c.gamma);
  if (formula == DetFormula::Theorem35) {
    return ipow(c.phi, n - m) *
           std::exp(Real(binom2(m) - static_cast<long long>(n) * m) *
                    c.gamma) *
           ipow(fg, m);
  }
  Cx<Real> denom{Real(1), Real(0)};
  for (int k = 1; k <= n - m; ++k) {
    const Cx<Real> factor =
        Cx<Real>{Real(1), Real(0)} - std::exp(Real(-2 * k) * c.gamma);
    require_nonzero(factor, "1 - e^{-2k gamma} (k = " + std::to_string(k) +
                                ")");
    denom *= factor;
  }
  return ipow(c.phi, n - m) * std::exp(Real(-binom2(n + 1)) * c.gamma) *
         ipow(fg, n) / denom;
}

template <typename Real>
struct Eval {
  Cx<Real> value;
  Real cond;
};

template <typename Real>
Eval<Real> evaluate(const Ctx<Real>& c, DetFormula formula) {
  const auto lu = det_lu<Real>(build_matrix(c, formula));
  return {prefactor(c, formula) * common_ratio(c) * lu.det,
          lu.conditionEstimate};
}

void require_formula_size(const ModelParams& p) {
  if (p.n() < 0 || p.m() < 0 || p.m() > p.n()) {
    throw SizeError("determinant formulas require 0 <= m <= n");
  }
}

/// Evaluates the partition value when the last mu has a large real part.
///
/// With m < n the plain matrix is numerically hopeless there: the far row's
/// entries are dominated by series orders C_0 .. C_{n-m-1} that lie exactly
/// in the span of the trailing rows (ones and h(k v_j)), so the determinant's
/// true value sits e^{-2(n-m) Re mu} below the stored entries and drowns in
/// rounding. Subtracting those orders is an exact determinant-preserving row
/// operation; the surviving row is the tail of the convergent entry series,
/// which we sum directly (three terms leave a relative gap of e^{-6 Re mu}).
Complex far_partition(const Ctx<double>& c) {
  const int n = c.n();
  const int m = c.m();
  auto a = build_matrix(c, DetFormula::Theorem35);
  if (m < n) {
    const int farRow = m - 1;
    const Cx<double> mu = c.mus[static_cast<std::size_t>(farRow)];
    for (int j = 0; j < n; ++j) {
      Cx<double> tail{0.0, 0.0};
      for (int k = n - m; k <= n - m + 2; ++k) {
        tail += ck_sum(k, c.lambdas[static_cast<std::size_t>(j)], c.gamma) *
                std::exp(double(-2 * (k + 2)) * mu);
      }
      a[static_cast<std::size_t>(farRow)][static_cast<std::size_t>(j)] = tail;
    }
  }
  return prefactor(c, DetFormula::Theorem35) * common_ratio(c) *
         det_lu<double>(std::move(a)).det;
}

constexpr double kTiny = 1e-300;

}  // namespace

DetReport det_partition(const ModelParams& params) {
  require_formula_size(params);
  const Eval<double> e =
      evaluate(widen_params<double>(params), DetFormula::Theorem35);
  return {e.value, e.cond, DetFormula::Theorem35};
}

DetReport det_partition_appendix(const ModelParams& params) {
  require_formula_size(params);
  const Eval<double> e =
      evaluate(widen_params<double>(params), DetFormula::AppendixA);
  return {e.value, e.cond, DetFormula::AppendixA};
}

double check_symmetry(const ModelParams& params, const SwapSpec& swap) {
  const int bound =
      swap.kind == SwapSpec::Kind::LambdaPair ? params.n() : params.m();
  if (swap.i < 1 || swap.i > bound || swap.j < 1 || swap.j > bound) {
    throw DomainError("swap indices out of range");
  }
  const Complex base = det_partition(params).value;
  ModelParams swapped = params;
  auto& family = swap.kind == SwapSpec::Kind::LambdaPair ? swapped.lambdas
                                                         : swapped.mus;
  std::swap(family[static_cast<std::size_t>(swap.i - 1)],
            family[static_cast<std::size_t>(swap.j - 1)]);
  const Complex other = det_partition(swapped).value;
  return std::abs(other - base) / std::max(std::abs(base), kTiny);
}

double check_polynomiality(const ModelParams& params, int j, int degree) {
  const int n = params.n();
  if (j < 1 || j > params.m()) {
    throw DomainError("mu index out of range");
  }
  if (degree < 0) degree = 2 * n - 1;
  const int samples = 2 * n + 1;
  if (degree + 2 > samples) {
    throw DomainError("interpolation degree exceeds the sample budget");
  }

  // Real shifts of mu_j keep t = e^{2 mu_j} pairwise distinct. If a shift
  // lands near some other denominator, grow the step and start over.
  double delta = 0.23;
  for (int attempt = 0; attempt < 8; ++attempt) {
    bool allGeneric = true;
    for (int s = 0; s < samples && allGeneric; ++s) {
      ModelParams shifted = params;
      shifted.mus[static_cast<std::size_t>(j - 1)] += s * delta;
      allGeneric = is_generic(shifted, 1e-3);
    }
    if (allGeneric) break;
    delta *= 1.37;
  }

  std::vector<Complex> t(static_cast<std::size_t>(samples));
  std::vector<Complex> p(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    ModelParams shifted = params;
    const Complex mu =
        params.mus[static_cast<std::size_t>(j - 1)] + s * delta;
    shifted.mus[static_cast<std::size_t>(j - 1)] = mu;
    Complex norm = std::exp(static_cast<double>(2 * n - 2) * mu);
    for (const Complex lambda : params.lambdas) {
      norm *= f(lambda + mu + params.gamma) * f(lambda - mu + params.gamma);
    }
    t[static_cast<std::size_t>(s)] = std::exp(2.0 * mu);
    p[static_cast<std::size_t>(s)] = norm * det_partition(shifted).value;
  }

  const Complex tLast = t.back();
  Complex predicted{0, 0};
  for (int a = 0; a <= degree; ++a) {
    Complex term = p[static_cast<std::size_t>(a)];
    for (int b = 0; b <= degree; ++b) {
      if (b == a) continue;
      term *= (tLast - t[static_cast<std::size_t>(b)]) /
              (t[static_cast<std::size_t>(a)] - t[static_cast<std::size_t>(b)]);
    }
    predicted += term;
  }
  return std::abs(predicted - p.back()) / std::max(std::abs(p.back()), kTiny);
}

double check_recursion(const ModelParams& params, int k, int l, int sign) {
  const int n = params.n();
  const int m = params.m();
  if (k < 1 || k > m || l < 1 || l > n) {
    throw DomainError("recursion indices out of range");
  }
  if (sign != 1 && sign != -1) {
    throw DomainError("sign must be +1 or -1");
  }

  ModelParams sp = params;
  const Complex lam = params.lambdas[static_cast<std::size_t>(l - 1)];
  sp.mus[static_cast<std::size_t>(k - 1)] = static_cast<double>(sign) * lam;
  const Ctx<double> c = widen_params<double>(sp);
  const Complex mu = c.mus[static_cast<std::size_t>(k - 1)];

  // Left side: the specialization limit of the determinant formula. The
  // vanishing ratio factor f(mu_k - sign*lambda_l) cancels the blowing-up
  // matrix entry; what survives is the entry's cofactor over the three
  // surviving denominator factors.
  const Complex ratio = common_ratio(c, l - 1, k - 1, sign);
  const Complex minorDet =
      det_lu<double>(build_matrix(c, DetFormula::Theorem35, k - 1, l - 1))
          .det;
  Complex d3;
  if (sign == +1) {
    d3 = f(mu + lam) * f(mu + lam + params.gamma) *
         f(mu - lam - params.gamma);
  } else {
    d3 = f(mu - lam) * f(mu + lam + params.gamma) *
         f(mu - lam - params.gamma);
  }
  const double cofactorSign = ((k + l) % 2 == 0) ? 1.0 : -1.0;
  const Complex lhs = prefactor(c, DetFormula::Theorem35) * ratio *
                      cofactorSign * minorDet / d3;

  // Right side: the one-point recursion factor times the reduced system.
  ModelParams reduced = params;
  reduced.lambdas.erase(reduced.lambdas.begin() + (l - 1));
  reduced.mus.erase(reduced.mus.begin() + (k - 1));
  Complex factor = std::exp(-static_cast<double>(n) * params.gamma) *
                   std::exp(params.zeta + mu) * f(params.zeta - mu);
  for (const Complex li : params.lambdas) {
    factor *= f(li + lam) / f(li + lam + params.gamma);
  }
  const Complex rhs = factor * det_partition(reduced).value;
  return std::abs(lhs - rhs) / std::max(std::abs(lhs), kTiny);
}

Complex ck_coefficient(int k, Complex lambda, Complex gamma) {
  if (k < 0) throw DomainError("coefficient order must be non-negative");
  return ck_sum<double>(k, lambda, gamma);
}

double check_limit_step(const ModelParams& params, double bigReal) {
  const int n = params.n();
  const int m = params.m();
  if (m < 1) throw DomainError("the decoupling step removes one mu; m >= 1");
  if (std::abs(params.phi) < kTiny) {
    throw PoleError("vanishing factor phi");
  }

  ModelParams far = params;
  far.mus.back() = Complex{bigReal, params.mus.back().imag()};
  const Complex zBig = far_partition(widen_params<double>(far));

  ModelParams reduced = far;
  reduced.mus.pop_back();
  const Complex zSmall = det_partition(reduced).value;

  Complex geometric{0, 0};
  for (int k = 0; k <= n - m; ++k) {
    geometric += std::exp(-2.0 * static_cast<double>(k) * params.gamma);
  }
  const Complex step =
      f(params.gamma) / (params.phi * std::exp(params.gamma)) * geometric;
  return std::abs(zBig - step * zSmall) / std::max(std::abs(zBig), kTiny);
}

Complex homogeneous_limit(int n, int m, Complex zeta, Complex phi,
                          double eps) {
  if (n < 1 || m < 0 || m > n) {
    throw SizeError("homogeneous limit requires 1 <= n and 0 <= m <= n");
  }
  if (!(eps > 0)) throw DomainError("extrapolation step must be positive");

  using R = long double;
  const R pi = std::numbers::pi_v<R>;
  const Cx<R> gamma{R(0), R(4) * pi / R(3)};

  const auto z_at = [&](R e) {
    Ctx<R> c;
    c.gamma = gamma;
    c.zeta = widen<R>(zeta);
    c.phi = widen<R>(phi);
    for (int i = 1; i <= n; ++i) c.lambdas.push_back(gamma + Cx<R>{e * i, 0});
    for (int j = 1; j <= m; ++j) c.mus.push_back(Cx<R>{e * (j + R(0.5)), 0});
    return evaluate(c, DetFormula::Theorem35).value;
  };

  const R e = static_cast<R>(eps);
  const Cx<R> extrapolated = R(2) * z_at(e / 2) - z_at(e);
  return {static_cast<double>(extrapolated.real()),
          static_cast<double>(extrapolated.imag())};
}

}  // namespace icevertex

/*
 * Copyright (c) Contributors to the icevertex project.
 * For complete copyright and license terms please see the LICENSE at the root
 * of this distribution.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "icevertex/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

namespace icevertex {

namespace {

BigInt factorial(long v) {
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(v));
  return out;
}

BigInt binomial(long n, long k) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return out;
}

/// base^exp for signed exp, exact.
BigRational int_pow(unsigned base, long long exp) {
  BigInt p;
  mpz_ui_pow_ui(p.get_mpz_t(), base,
                static_cast<unsigned long>(exp < 0 ? -exp : exp));
  if (exp >= 0) return BigRational(p);
  return BigRational(1) / BigRational(p);
}

void require_count_domain(int n, int m, int k) {
  if (n < 0 || m < 0 || m > n || k < 0 || k > m) {
    throw DomainError("counts need 0 <= k <= m <= n");
  }
}

BigInt require_nonneg_integer(BigRational value, const std::string& what) {
  value.canonicalize();
  if (value.get_den() != 1) {
    throw NonIntegerResult(what + " evaluated to the non-integer " +
                           value.get_str());
  }
  if (value < 0) {
    throw NonIntegerResult(what + " evaluated to the negative value " +
                           value.get_str());
  }
  return value.get_num();
}

/// Fraction-free (Bareiss) determinant of an integer matrix; exact.
BigInt bareiss_det(std::vector<std::vector<BigInt>> a) {
  const int d = static_cast<int>(a.size());
  if (d == 0) return BigInt(1);
  BigInt prev(1);
  int sign = 1;
  for (int c = 0; c + 1 < d; ++c) {
    int pivot = -1;
    for (int r = c; r < d; ++r) {
      if (a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return BigInt(0);
    if (pivot != c) {
      std::swap(a[static_cast<std::size_t>(pivot)],
                a[static_cast<std::size_t>(c)]);
      sign = -sign;
    }
    auto& rowC = a[static_cast<std::size_t>(c)];
    for (int r = c + 1; r < d; ++r) {
      auto& rowR = a[static_cast<std::size_t>(r)];
      for (int j = c + 1; j < d; ++j) {
        BigInt num = rowC[static_cast<std::size_t>(c)] *
                         rowR[static_cast<std::size_t>(j)] -
                     rowR[static_cast<std::size_t>(c)] *
                         rowC[static_cast<std::size_t>(j)];
        mpz_divexact(rowR[static_cast<std::size_t>(j)].get_mpz_t(),
                     num.get_mpz_t(), prev.get_mpz_t());
      }
      rowR[static_cast<std::size_t>(c)] = 0;
    }
    prev = rowC[static_cast<std::size_t>(c)];
  }
  BigInt det = a[static_cast<std::size_t>(d - 1)][static_cast<std::size_t>(d - 1)];
  if (sign < 0) det = -det;
  return det;
}

/// det over 1 <= l, j <= n-m of W_{m+j-1}(-l^2/9), exact rational.
BigRational wilson_det(int n, int m) {
  const int d = n - m;
  if (d == 0) return BigRational(1);
  std::vector<std::vector<BigRational>> w(
      static_cast<std::size_t>(d),
      std::vector<BigRational>(static_cast<std::size_t>(d)));
  BigInt common(1);
  for (int l = 1; l <= d; ++l) {
    for (int j = 1; j <= d; ++j) {
      BigRational entry = wilson_poly(m + j - 1, BigRational(-l * l, 9));
      mpz_lcm(common.get_mpz_t(), common.get_mpz_t(),
              entry.get_den().get_mpz_t());
      w[static_cast<std::size_t>(l - 1)][static_cast<std::size_t>(j - 1)] =
          std::move(entry);
    }
  }
  std::vector<std::vector<BigInt>> z(
      static_cast<std::size_t>(d),
      std::vector<BigInt>(static_cast<std::size_t>(d)));
  for (int l = 0; l < d; ++l) {
    for (int j = 0; j < d; ++j) {
      const BigRational& e = w[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)];
      z[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)] =
          e.get_num() * (common / e.get_den());
    }
  }
  BigRational det(bareiss_det(std::move(z)));
  BigRational scale(common);
  for (int i = 0; i < d; ++i) det /= scale;
  return det;
}

/// The prefactor shared by the determinant form and the multi-sum form:
/// 2^{n^2-n-m^2-m} (n-m)! / 3^{2m^2-m-n^2+n-mn} times two factorial
/// products. The determinant form additionally divides by (j-1)! for
/// j = m+1..n; the multi-sum absorbs those factorials into Pochhammer pairs.
BigRational count_prefactor(int n, int m) {
  const long long nl = n;
  const long long ml = m;
  BigRational out = int_pow(2, nl * nl - nl - ml * ml - ml);
  out *= BigRational(factorial(n - m));
  out /= int_pow(3, 2 * ml * ml - ml - nl * nl + nl - ml * nl);
  for (int j = 1; j <= n; ++j) {
    out *= BigRational(factorial(2 * j - 2)) / BigRational(factorial(4 * j - 3));
  }
  for (int j = 1; j <= m; ++j) {
    out *= BigRational(factorial(6 * j - 2)) / BigRational(factorial(4 * j - 1));
  }
  return out;
}

long long binom2(long long x) { return x * (x - 1) / 2; }

Complex cpow(Complex base, int exp) {
  Complex out{1.0, 0.0};
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

/// The k-independent part of the hypergeometric multi-sum count, memoized:
/// evaluating it once per (n,m) makes the all-k sweeps cheap.
BigRational hypersum_value(int n, int m) {
  static std::map<std::pair<int, int>, BigRational> cache;
  static std::mutex cacheMutex;
  {
    std::lock_guard<std::mutex> lock(cacheMutex);
    auto it = cache.find({n, m});
    if (it != cache.end()) return it->second;
  }

  const int d = n - m;
  BigRational pre = count_prefactor(n, m);
  for (int j = m + 1; j <= n; ++j) {
    pre *= pochhammer(BigRational(5, 6), j - 1) *
           pochhammer(BigRational(4, 3), j - 1);
  }
  for (int j = 1; j <= d; ++j) {
    pre *= pochhammer(BigRational(5 + 4 * (n - j), 2), j - 1);
    pre /= pochhammer(BigRational(1 - n), j - 1) *
           pochhammer(BigRational(2 * m + 3, 2), j - 1);
  }

  BigRational sum(d == 0 ? 1 : 0);
  if (d > 0) {
    // Per-index, per-value factors of the summand.
    std::vector<std::vector<BigRational>> fac(
        static_cast<std::size_t>(d),
        std::vector<BigRational>(static_cast<std::size_t>(n)));
    for (int i = 1; i <= d; ++i) {
      for (int v = 0; v <= n - 1; ++v) {
        BigRational term = pochhammer(BigRational(1 - i, 3), v) *
                           pochhammer(BigRational(1 + i, 3), v) *
                           pochhammer(BigRational(1 - n), v) *
                           pochhammer(BigRational(2 * m + 3, 2), v);
        const BigRational fv(factorial(v));
        term /= pochhammer(BigRational(5, 6), v) *
                pochhammer(BigRational(4, 3), v) * fv * fv;
        fac[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(v)] =
            std::move(term);
      }
    }
    std::vector<int> l(static_cast<std::size_t>(d), 0);
    while (true) {
      BigRational term(1);
      bool zero = false;
      for (int i = 0; i < d && !zero; ++i) {
        const BigRational& f =
            fac[static_cast<std::size_t>(i)][static_cast<std::size_t>(
                l[static_cast<std::size_t>(i)])];
        if (f == 0) {
          zero = true;
        } else {
          term *= f;
        }
      }
      if (!zero) {
        long vandermonde = 1;
        for (int i = 0; i < d; ++i) {
          for (int j = i + 1; j < d; ++j) {
            vandermonde *= l[static_cast<std::size_t>(i)] -
                           l[static_cast<std::size_t>(j)];
          }
        }
        if (vandermonde != 0) {
          term *= BigRational(vandermonde);
          sum += term;
        }
      }
      int pos = d - 1;
      while (pos >= 0 && l[static_cast<std::size_t>(pos)] == n - 1) {
        l[static_cast<std::size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
      ++l[static_cast<std::size_t>(pos)];
    }
  }

  BigRational value = pre * sum;
  std::lock_guard<std::mutex> lock(cacheMutex);
  return cache.emplace(std::pair{n, m}, std::move(value)).first->second;
}

}  // namespace

BigRational pochhammer(const BigRational& a, int count) {
  if (count < 0) throw DomainError("rising factorial needs count >= 0");
  BigRational out(1);
  BigRational term = a;
  for (int p = 0; p < count; ++p) {
    out *= term;
    term += 1;
  }
  return out;
}

BigRational wilson_poly(int k, const BigRational& xsq) {
  if (k < 0) throw DomainError("polynomial order must be non-negative");
  BigRational sum(0);
  BigRational quadratic(1);  // prod_{p<j} ((1/3+p)^2 + xsq)
  for (int j = 0; j <= k; ++j) {
    if (j > 0) {
      const BigRational base(3 * j - 2, 3);  // 1/3 + (j-1)
      quadratic *= base * base + xsq;
    }
    BigRational term = pochhammer(BigRational(-k), j) *
                       pochhammer(BigRational(2 * k + 3, 2), j) * quadratic;
    const BigRational fj(factorial(j));
    term /= pochhammer(BigRational(5, 6), j) *
            pochhammer(BigRational(4, 3), j) * fj * fj;
    sum += term;
  }
  return pochhammer(BigRational(5, 6), k) * pochhammer(BigRational(4, 3), k) *
         BigRational(factorial(k)) * sum;
}

BigRational wilson_leading(int k) {
  if (k < 0) throw DomainError("polynomial order must be non-negative");
  BigRational out = pochhammer(BigRational(2 * k + 3, 2), k);
  out *= int_pow(6, -2LL * k);
  if (k % 2 != 0) out = -out;
  return out;
}

std::vector<BigRational> wilson_coefficients(int k) {
  if (k < 0) throw DomainError("polynomial order must be non-negative");
  std::vector<BigRational> total(static_cast<std::size_t>(k) + 1,
                                 BigRational(0));
  std::vector<BigRational> quadratic{BigRational(1)};
  for (int j = 0; j <= k; ++j) {
    if (j > 0) {
      const BigRational base(3 * j - 2, 3);
      std::vector<BigRational> next(quadratic.size() + 1, BigRational(0));
      for (std::size_t i = 0; i < quadratic.size(); ++i) {
        next[i] += quadratic[i] * base * base;
        next[i + 1] += quadratic[i];
      }
      quadratic = std::move(next);
    }
    BigRational scale = pochhammer(BigRational(-k), j) *
                        pochhammer(BigRational(2 * k + 3, 2), j);
    const BigRational fj(factorial(j));
    scale /= pochhammer(BigRational(5, 6), j) *
             pochhammer(BigRational(4, 3), j) * fj * fj;
    for (std::size_t i = 0; i < quadratic.size(); ++i) {
      total[i] += scale * quadratic[i];
    }
  }
  const BigRational prefactor = pochhammer(BigRational(5, 6), k) *
                                pochhammer(BigRational(4, 3), k) *
                                BigRational(factorial(k));
  for (auto& c : total) c *= prefactor;
  return total;
}

double wilson_norm(int k) {
  if (k < 0) throw DomainError("polynomial order must be non-negative");
  BigRational h = int_pow(2, 2LL * k + 1);
  h *= BigRational(factorial(k)) * BigRational(factorial(6 * k + 4)) *
       BigRational(factorial(2 * k + 1));
  h /= int_pow(3, 2LL * k + 1) * pochhammer(BigRational(2 * k + 3, 2), k) *
       BigRational(factorial(4 * k + 3));
  return h.get_d() / std::sqrt(3.0);
}

BigInt count_Nk(int n, int m, int k) {
  require_count_domain(n, m, k);
  BigRational value = count_prefactor(n, m) * wilson_det(n, m);
  for (int j = m + 1; j <= n; ++j) value /= BigRational(factorial(j - 1));
  value *= BigRational(binomial(m, k));
  return require_nonneg_integer(std::move(value), "state count");
}

BigInt count_Nk_hypersum(int n, int m, int k) {
  require_count_domain(n, m, k);
  BigRational value = hypersum_value(n, m) * BigRational(binomial(m, k));
  return require_nonneg_integer(std::move(value), "multi-sum state count");
}

CountReport count_total(int n, int m) {
  if (n < 0 || m < 0 || m > n) {
    throw DomainError("counts need 0 <= m <= n");
  }
  CountReport report;
  report.n = n;
  report.m = m;
  report.total = 0;
  for (int k = 0; k <= m; ++k) {
    report.Nk.push_back(count_Nk(n, m, k));
    report.total += report.Nk.back();
  }
  return report;
}

std::string count_report_json(const CountReport& report) {
  std::string out = "{\"n\":" + std::to_string(report.n) +
                    ",\"m\":" + std::to_string(report.m) + ",\"N\":[";
  for (std::size_t i = 0; i < report.Nk.size(); ++i) {
    if (i > 0) out += ",";
    out += "\"" + report.Nk[i].get_str() + "\"";
  }
  out += "],\"total\":\"" + report.total.get_str() + "\"}";
  return out;
}

Complex predict_Z_spec(int n, int m, int k, Complex zeta, Complex phi) {
  require_count_domain(n, m, k);
  const BigInt count = count_Nk(n, m, k);
  const Complex gamma{0.0, 4.0 * std::numbers::pi / 3.0};
  const Complex e2zeta = std::exp(2.0 * zeta);
  const Complex e2gamma = std::exp(2.0 * gamma);
  const Complex em2gamma = std::exp(-2.0 * gamma);

  const long long signExponent = binom2(m) - static_cast<long long>(n) * m + n;
  Complex value{signExponent % 2 == 0 ? 1.0 : -1.0, 0.0};
  value *= count.get_d();
  value *= cpow(phi, n - m);
  value *= std::exp(
      -static_cast<double>(static_cast<long long>(n) * m - binom2(m + 1)) *
      gamma);
  value *= cpow(f(gamma), n - m);
  value *= cpow(e2zeta - em2gamma, k);
  value *= cpow((e2zeta - e2gamma) / e2gamma, m - k);
  return value;
}

namespace {

/// Rounds an exact rational to long double through a two-term double
/// expansion (a single get_d() keeps only 53 bits, which is not enough:
/// the orthogonality integrals cancel through many more digits).
long double to_long_double(const BigRational& q) {
  const double hi = q.get_d();
  BigRational rest = q - BigRational(hi);
  return static_cast<long double>(hi) +
         static_cast<long double>(rest.get_d());
}

/// Monic orthogonal polynomial p_k(u) with u = t^2, coefficients ascending.
std::vector<long double> monic_coefficients(int k) {
  const std::vector<BigRational> inXsq = wilson_coefficients(k);
  const BigRational kappa = wilson_leading(k);
  std::vector<long double> out(inXsq.size());
  BigRational scale(1);  // 1/36^i
  for (std::size_t i = 0; i < inXsq.size(); ++i) {
    out[i] = to_long_double(inXsq[i] * scale / kappa);
    scale /= 36;
  }
  return out;
}

long double horner(const std::vector<long double>& c, long double u) {
  long double acc = 0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * u + c[i];
  return acc;
}

/// t^2 sinh(pi t/6)/sinh(pi t/2), in the overflow-free exponential form.
long double ortho_weight(long double t) {
  if (t <= 0) return 0;
  const long double pi = std::numbers::pi_v<long double>;
  const long double a = pi * t / 6;
  const long double b = pi * t / 2;
  return t * t * std::exp(a - b) * (1 - std::exp(-2 * a)) /
         (1 - std::exp(-2 * b));
}

template <typename F>
long double adaptive_simpson(const F& f, long double a, long double b,
                             long double fa, long double fm, long double fb,
                             long double whole, long double tol, int depth,
                             long& budget) {
  const long double mid = (a + b) / 2;
  const long double lm = (a + mid) / 2;
  const long double rm = (mid + b) / 2;
  const long double flm = f(lm);
  const long double frm = f(rm);
  const long double left = (mid - a) / 6 * (fa + 4 * flm + fm);
  const long double right = (b - mid) / 6 * (fm + 4 * frm + fb);
  const long double delta = left + right - whole;
  if (std::abs(delta) <= 15 * tol) {
    return left + right + delta / 15;
  }
  budget -= 2;
  if (depth <= 0 || budget <= 0) {
    throw QuadratureFailure(
        "adaptive quadrature failed to reach the requested tolerance");
  }
  return adaptive_simpson(f, a, mid, fa, flm, fm, left, tol / 2, depth - 1,
                          budget) +
         adaptive_simpson(f, mid, b, fm, frm, fb, right, tol / 2, depth - 1,
                          budget);
}

}  // namespace

double orthogonality_residual(int k, int l) {
  if (k < 0 || k > 6 || l < 0 || l > 6) {
    throw DomainError("orthogonality check supports orders 0..6");
  }
  const std::vector<long double> pk = monic_coefficients(k);
  const std::vector<long double> pl = monic_coefficients(l);
  const auto integrand = [&](long double t) {
    const long double u = t * t;
    return horner(pk, u) * horner(pl, u) * ortho_weight(t);
  };

  const double hk = wilson_norm(k);
  const double hl = wilson_norm(l);
  const long double a = 0;
  const long double b = 80;

  // The tolerance scales with the smaller norm (the residual is judged
  // against it) but must stay above the evaluation noise floor, which a
  // coarse scan of the integrand magnitude estimates.
  long double peak = 0;
  for (int i = 0; i <= 320; ++i) {
    peak = std::max(peak, std::abs(integrand(b * i / 320)));
  }
  const long double epsL = std::numeric_limits<long double>::epsilon();
  const long double tol =
      std::max(1e-8L * std::max(1.0L, static_cast<long double>(
                                          std::min(hk, hl))),
               50 * epsL * peak);

  const long double fa = integrand(a);
  const long double fm = integrand((a + b) / 2);
  const long double fb = integrand(b);
  const long double whole = (b - a) / 6 * (fa + 4 * fm + fb);
  long budget = 4000000;
  const long double integral = adaptive_simpson(integrand, a, b, fa, fm, fb,
                                                whole, tol, 44, budget);

  const double target = (k == l) ? hk : 0.0;
  return std::abs(static_cast<double>(integral) - target) /
         std::max(1.0, hk);
}

}  // namespace icevertex

/*
 * Copyright (c) Contributors to the icevertex project.
 * For complete copyright and license terms please see the LICENSE at the root
 * of this distribution.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "icevertex/suite.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "icevertex/asm_matrix.hpp"
#include "icevertex/counting.hpp"
#include "icevertex/detform.hpp"
#include "icevertex/errors.hpp"
#include "icevertex/lattice.hpp"
#include "icevertex/rng.hpp"
#include "icevertex/weights.hpp"

namespace icevertex {

namespace {

double rel(Complex got, Complex want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

std::string fmt(double x) {
  std::ostringstream out;
  out << std::scientific << std::setprecision(3) << x;
  return out.str();
}

std::string size_label(LatticeSize size) {
  return "n=" + std::to_string(size.n) + " m=" + std::to_string(size.m);
}

/// Sizes a sweep visits: n' = 1..min(config.n, cap), with m' either swept
/// over minM..n' or pinned to config.m when that was requested.
std::vector<LatticeSize> sweep_sizes(const SuiteConfig& cfg, int cap,
                                     int minM = 0) {
  std::vector<LatticeSize> out;
  const int nMax = std::min(cfg.n, cap);
  for (int n = 1; n <= nMax; ++n) {
    if (cfg.m >= 0) {
      if (cfg.m >= minM && cfg.m <= n) out.push_back({n, cfg.m});
    } else {
      for (int m = minM; m <= n; ++m) out.push_back({n, m});
    }
  }
  return out;
}

double tol_for(const SuiteConfig& cfg, const std::string& key) {
  const auto it = cfg.tolerances.find(key);
  return it != cfg.tolerances.end() ? it->second : default_tolerance(key);
}

/// Tracks the worst residual and where it happened.
struct Worst {
  double value = 0.0;
  std::string where;
  void feed(double residual, const std::string& at) {
    if (residual >= value) {
      value = residual;
      where = at;
    }
  }
};

CheckResult check_ybe(const SuiteConfig& cfg) {
  Rng rng(cfg.seed, "verify-ybe");
  Worst worst;
  int draws = 0;
  for (int d = 0; d < 100; ++d) {
    const Complex l1{rng.uniform_sym(), rng.uniform_sym()};
    const Complex l2{rng.uniform_sym(), rng.uniform_sym()};
    const Complex l3{rng.uniform_sym(), rng.uniform_sym()};
    const Complex gamma{rng.uniform_sym(), rng.uniform_sym()};
    if (std::abs(f(l1 - l2 + gamma)) < 0.05 ||
        std::abs(f(l1 - l3 + gamma)) < 0.05 ||
        std::abs(f(l2 - l3 + gamma)) < 0.05) {
      continue;  // skip draws too close to an R-matrix pole
    }
    ++draws;
    worst.feed(ybe_residual(l1, l2, l3, gamma), "draw " + std::to_string(d));
  }
  const double tol = tol_for(cfg, "ybe");
  return {"ybe", draws, worst.value, tol, worst.value < tol,
          "worst at " + worst.where};
}

CheckResult check_reflection(const SuiteConfig& cfg) {
  Rng rng(cfg.seed, "verify-reflection");
  Worst worst;
  int draws = 0;
  for (int d = 0; d < 100; ++d) {
    const ModelParams p = sample_generic({1, 0}, rng);
    const Complex l{rng.uniform_sym(), rng.uniform_sym()};
    const Complex lp{rng.uniform_sym(), rng.uniform_sym()};
    if (std::abs(f(l - lp + p.gamma)) < 0.05 ||
        std::abs(f(l + lp + p.gamma)) < 0.05) {
      continue;
    }
    ++draws;
    worst.feed(reflection_residual(l, lp, p), "draw " + std::to_string(d));
  }
  const double tol = tol_for(cfg, "reflection");
  return {"reflection", draws, worst.value, tol, worst.value < tol,
          "worst at " + worst.where};
}

CheckResult check_symmetry(const SuiteConfig& cfg) {
  Rng rng(cfg.seed, "verify-symmetry");
  Worst worst;
  int draws = 0;
  for (const LatticeSize size : sweep_sizes(cfg, 6)) {
    for (int d = 0; d < 2; ++d) {
      const ModelParams p = sample_generic(size, rng);
      ++draws;
      for (int i = 1; i <= size.n; ++i) {
        for (int j = i + 1; j <= size.n; ++j) {
          worst.feed(
              icevertex::check_symmetry(p, {SwapSpec::Kind::LambdaPair, i, j}),
              "lambda swap at " + size_label(size));
        }
      }
      for (int i = 1; i <= size.m; ++i) {
        for (int j = i + 1; j <= size.m; ++j) {
          worst.feed(
              icevertex::check_symmetry(p, {SwapSpec::Kind::MuPair, i, j}),
              "mu swap at " + size_label(size));
        }
      }
    }
  }
  const double tol = tol_for(cfg, "symmetry");
  return {"symmetry", draws, worst.value, tol, worst.value < tol,
          worst.where.empty() ? "no swappable pairs at this size"
                              : "worst " + worst.where};
}

CheckResult check_polynomiality(const SuiteConfig& cfg) {
  Rng rng(cfg.seed, "verify-polynomiality");
  Worst worst;
  double controlMin = std::numeric_limits<double>::infinity();
  int draws = 0;
  for (const LatticeSize size : sweep_sizes(cfg, 6, 1)) {
    for (int d = 0; d < 2; ++d) {
      const ModelParams p = sample_generic(size, rng);
      ++draws;
      for (int j = 1; j <= size.m; ++j) {
        worst.feed(icevertex::check_polynomiality(p, j),
                   "mu_" + std::to_string(j) + " at " + size_label(size));
        controlMin = std::min(
            controlMin, icevertex::check_polynomiality(p, j, 2 * size.n - 2));
      }
    }
  }
  const double tol = tol_for(cfg, "polynomiality");
  const double controlFloor = tol_for(cfg, "polynomiality-control");
  if (draws == 0) {
    return {"polynomiality", 0, 0.0, tol, true,
            "vacuous: no size with a vertical line in the sweep"};
  }
  const bool pass = worst.value < tol && controlMin > controlFloor;
  return {"polynomiality", draws, worst.value, tol, pass,
          "worst " + worst.where + "; degree control min " + fmt(controlMin) +
              " stays above " + fmt(controlFloor)};
}

CheckResult check_recursion(const SuiteConfig& cfg) {
  Rng rng(cfg.seed, "verify-recursion");
  Worst worst;
  int draws = 0;
  for (const LatticeSize size : sweep_sizes(cfg, 6, 1)) {
    for (int d = 0; d < 2; ++d) {
      const ModelParams p = sample_generic(size, rng);
      ++draws;
      for (int k = 1; k <= size.m; ++k) {
        for (int l = 1; l <= size.n; ++l) {
          for (const int sign : {+1, -1}) {
            worst.feed(icevertex::check_recursion(p, k, l, sign),
                       "mu_" + std::to_string(k) + " -> " +
                           (sign > 0 ? "+" : "-") + "lambda_" +
                           std::to_string(l) + " at " + size_label(size));
          }
        }
      }
    }
  }
  const double tol = tol_for(cfg, "recursion");
  if (draws == 0) {
    return {"recursion", 0, 0.0, tol, true,
            "vacuous: no size with a vertical line in the sweep"};
  }
  return {"recursion", draws, worst.value, tol, worst.value < tol,
          "worst " + worst.where};
}

CheckResult check_base(const SuiteConfig& cfg) {
  Rng rng(cfg.seed, "verify-base");
  Worst worst;
  int draws = 0;
  const int nMax = std::min(cfg.n, 6);
  for (int n = 1; n <= nMax; ++n) {
    for (int d = 0; d < 3; ++d) {
      const ModelParams p = sample_generic({n, 0}, rng);
      ++draws;
      Complex closed = p.phi;
      for (int i = 1; i < n; ++i) closed *= p.phi;
      for (const Complex lambda : p.lambdas) closed *= f(2.0 * lambda);
      worst.feed(rel(det_partition(p).value, closed),
                 "n=" + std::to_string(n));
    }
  }
  const double tol = tol_for(cfg, "base");
  return {"base", draws, worst.value, tol, worst.value < tol,
          "all-turn closed product; worst at " + worst.where};
}

CheckResult check_appendix(const SuiteConfig& cfg) {
  Rng rng(cfg.seed, "verify-appendix-det");
  Worst worst;
  int draws = 0;
  for (const LatticeSize size : sweep_sizes(cfg, 6)) {
    for (int d = 0; d < 3; ++d) {
      const ModelParams p = sample_generic(size, rng);
      ++draws;
      worst.feed(rel(det_partition_appendix(p).value, det_partition(p).value),
                 size_label(size));
    }
  }
  const double tol = tol_for(cfg, "appendix-det");
  return {"appendix-det", draws, worst.value, tol, worst.value < tol,
          "worst at " + worst.where};
}

CheckResult check_limit(const SuiteConfig& cfg) {
  Rng rng(cfg.seed, "verify-limit");
  Worst worst;
  double shrinkMin = std::numeric_limits<double>::infinity();
  int draws = 0;
  for (const LatticeSize size : sweep_sizes(cfg, 6, 1)) {
    for (int d = 0; d < 2; ++d) {
      const ModelParams p = sample_generic(size, rng);
      ++draws;
      const double r10 = check_limit_step(p, 10.0);
      const double r20 = check_limit_step(p, 20.0);
      worst.feed(r20, size_label(size));
      shrinkMin = std::min(shrinkMin, r10 / std::max(r20, 1e-300));
    }
  }
  const double tol = tol_for(cfg, "limit");
  const double shrinkFloor = tol_for(cfg, "limit-shrink");
  if (draws == 0) {
    return {"limit", 0, 0.0, tol, true,
            "vacuous: no size with a vertical line in the sweep"};
  }
  const bool pass = worst.value < tol && shrinkMin >= shrinkFloor;
  return {"limit", draws, worst.value, tol, pass,
          "worst at " + worst.where + "; doubling the distance shrank the " +
              "residual by at least " + fmt(shrinkMin)};
}

CheckResult check_oracle(const SuiteConfig& cfg) {
  Rng rng(cfg.seed, "verify-oracle");
  Worst worst;
  int draws = 0;
  for (const LatticeSize size : sweep_sizes(cfg, 4)) {
    for (int d = 0; d < 20; ++d) {
      const ModelParams p = sample_generic(size, rng);
      ++draws;
      worst.feed(rel(det_partition(p).value, partition_brute(p)),
                 size_label(size));
    }
  }
  const double tol = tol_for(cfg, "oracle");
  return {"oracle", draws, worst.value, tol, worst.value < tol,
          "determinant vs state sum; worst at " + worst.where};
}

CheckResult check_specialization(const SuiteConfig& cfg) {
  Rng rng(cfg.seed, "verify-specialization");
  const Complex gamma{0.0, 4.0 * std::numbers::pi / 3.0};
  Worst worst;
  int draws = 0;
  for (const LatticeSize size : sweep_sizes(cfg, 3)) {
    for (int d = 0; d < 3; ++d) {
      // Boxes chosen so e^{2 zeta} stays away from e^{+-2 gamma} and phi
      // away from 0; the reference state sum is then nonzero.
      const Complex zeta{0.4 * rng.uniform_sym(), 0.4 * rng.uniform_sym()};
      const Complex phi{1.0 + 0.5 * rng.uniform_sym(), 0.5 * rng.uniform_sym()};
      ++draws;
      ModelParams p;
      p.gamma = gamma;
      p.zeta = zeta;
      p.phi = phi;
      p.lambdas.assign(static_cast<std::size_t>(size.n), gamma);
      p.mus.assign(static_cast<std::size_t>(size.m), Complex{0.0, 0.0});
      for (int k = 0; k <= size.m; ++k) {
        worst.feed(rel(predict_Z_spec(size.n, size.m, k, zeta, phi),
                       partition_brute_fixed_k(p, k)),
                   "k=" + std::to_string(k) + " at " + size_label(size));
      }
    }
  }
  const double tol = tol_for(cfg, "specialization");
  bool pass = worst.value < tol;

  // Second leg: the k-sum of the predictions must match the homogeneous
  // limit of the determinant formula, extrapolated at a pinned operating
  // point (the extrapolation has its own, looser tolerance).
  const double limitTol = tol_for(cfg, "specialization-limit");
  const Complex zeta0{0.31, 0.17};
  const Complex phi0{0.8, -0.3};
  Worst worstLimit;
  for (const LatticeSize size :
       {LatticeSize{1, 1}, LatticeSize{2, 1}, LatticeSize{2, 2},
        LatticeSize{3, 1}}) {
    if (size.n > cfg.n) continue;
    if (cfg.m >= 0 && size.m != cfg.m) continue;
    Complex sum{0.0, 0.0};
    for (int k = 0; k <= size.m; ++k) {
      sum += predict_Z_spec(size.n, size.m, k, zeta0, phi0);
    }
    worstLimit.feed(
        rel(homogeneous_limit(size.n, size.m, zeta0, phi0, 5e-4), sum),
        size_label(size));
  }
  std::string note = "turn-count bridge; worst at " + worst.where;
  if (!worstLimit.where.empty()) {
    pass = pass && worstLimit.value < limitTol;
    note += "; homogeneous-limit residual " + fmt(worstLimit.value) +
            " (tolerance " + fmt(limitTol) + ") at " + worstLimit.where;
  }
  return {"specialization", draws, worst.value, tol, pass, note};
}

CheckResult check_orthogonality(const SuiteConfig& cfg) {
  Worst worst;
  for (int k = 0; k <= 4; ++k) {
    for (int l = 0; l <= 4; ++l) {
      worst.feed(orthogonality_residual(k, l),
                 "(k,l)=(" + std::to_string(k) + "," + std::to_string(l) +
                     ")");
    }
  }
  const double tol = tol_for(cfg, "orthogonality");
  return {"orthogonality", 0, worst.value, tol, worst.value < tol,
          "orders 0..4; worst at " + worst.where};
}

CheckResult check_bijection(const SuiteConfig& cfg) {
  long failures = 0;
  std::string firstFailure;
  const auto fail = [&](const std::string& what) {
    ++failures;
    if (firstFailure.empty()) firstFailure = what;
  };
  for (const LatticeSize size : sweep_sizes(cfg, 4)) {
    const auto states = enumerate_states(size);
    const auto matrices = enumerate_matrices(size);
    if (states.size() != matrices.size()) {
      fail("count mismatch at " + size_label(size));
    }
    std::set<std::string> stateImages;
    for (const auto& state : states) {
      const AsmMatrix mat = state_to_matrix(state);
      if (!validate_matrix(mat).empty()) {
        fail("image fails validation at " + size_label(size));
      }
      if (!(matrix_to_state(mat) == state)) {
        fail("round trip broke at " + size_label(size));
      }
      stateImages.insert(serialize_matrix(mat));
    }
    std::set<std::string> enumerated;
    for (const auto& mat : matrices) enumerated.insert(serialize_matrix(mat));
    if (stateImages != enumerated) {
      fail("image set differs from matrix enumeration at " +
           size_label(size));
    }
  }
  const double tol = tol_for(cfg, "bijection");
  return {"bijection", 0, static_cast<double>(failures), tol, failures == 0,
          failures == 0 ? "states and matrices agree exactly"
                        : "first failure: " + firstFailure};
}

CheckResult check_counts(const SuiteConfig& cfg) {
  long failures = 0;
  std::string firstFailure;
  const auto fail = [&](const std::string& what) {
    ++failures;
    if (firstFailure.empty()) firstFailure = what;
  };

  // Closed form vs exhaustive enumeration.
  for (const LatticeSize size : sweep_sizes(cfg, 4)) {
    std::vector<long> hist(static_cast<std::size_t>(size.m) + 1, 0);
    for (const auto& state : enumerate_states(size)) {
      ++hist[static_cast<std::size_t>(state_stats(state).nu(TurnKind::KPlus))];
    }
    for (int k = 0; k <= size.m; ++k) {
      if (count_Nk(size.n, size.m, k) !=
          BigInt(hist[static_cast<std::size_t>(k)])) {
        fail("enumeration mismatch at " + size_label(size) +
             " k=" + std::to_string(k));
      }
    }
  }

  // Closed form vs the multi-sum form, then integrality, at fixed depths
  // independent of the sweep (both are cheap exact-arithmetic loops).
  for (int n = 1; n <= 6; ++n) {
    for (int m = (cfg.m >= 0 ? cfg.m : 0); m <= (cfg.m >= 0 ? cfg.m : n);
         ++m) {
      if (m > n) continue;
      for (int k = 0; k <= m; ++k) {
        if (count_Nk(n, m, k) != count_Nk_hypersum(n, m, k)) {
          fail("multi-sum mismatch at n=" + std::to_string(n) +
               " m=" + std::to_string(m) + " k=" + std::to_string(k));
        }
      }
    }
  }
  for (int n = 1; n <= 8; ++n) {
    for (int m = (cfg.m >= 0 ? cfg.m : 0); m <= (cfg.m >= 0 ? cfg.m : n);
         ++m) {
      if (m > n) continue;
      for (int k = 0; k <= m; ++k) {
        try {
          if (count_Nk(n, m, k) < 0) {
            fail("negative count at n=" + std::to_string(n) +
                 " m=" + std::to_string(m) + " k=" + std::to_string(k));
          }
        } catch (const NonIntegerResult&) {
          fail("non-integer count at n=" + std::to_string(n) +
               " m=" + std::to_string(m) + " k=" + std::to_string(k));
        }
      }
    }
  }
  const double tol = tol_for(cfg, "counts");
  return {"counts", 0, static_cast<double>(failures), tol, failures == 0,
          failures == 0 ? "enumeration sweep; multi-sum equality through "
                          "n=6; integrality through n=8"
                        : "first failure: " + firstFailure};
}

using CheckFn = CheckResult (*)(const SuiteConfig&);

const std::vector<std::pair<std::string, CheckFn>>& check_table() {
  static const std::vector<std::pair<std::string, CheckFn>> table = {
      {"appendix-det", &check_appendix},
      {"base", &check_base},
      {"bijection", &check_bijection},
      {"counts", &check_counts},
      {"limit", &check_limit},
      {"oracle", &check_oracle},
      {"orthogonality", &check_orthogonality},
      {"polynomiality", &check_polynomiality},
      {"recursion", &check_recursion},
      {"reflection", &check_reflection},
      {"specialization", &check_specialization},
      {"symmetry", &check_symmetry},
      {"ybe", &check_ybe},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : check_table()) out.push_back(name);
    return out;
  }();
  return names;
}

double default_tolerance(const std::string& key) {
  static const std::map<std::string, double> defaults = {
      {"ybe", 1e-12},        // algebraic identities
      {"reflection", 1e-12},
      {"base", 1e-12},
      {"symmetry", 1e-9},    // cross-oracle equalities
      {"recursion", 1e-9},
      {"appendix-det", 1e-9},
      {"oracle", 1e-9},
      {"polynomiality", 1e-6},  // interpolation, limits and quadrature
      {"limit", 1e-6},
      {"orthogonality", 1e-6},
      {"specialization", 1e-8},
      {"bijection", 0.0},    // exact checks count mismatches
      {"counts", 0.0},
      {"polynomiality-control", 1e-3},  // degree control must EXCEED this
      {"limit-shrink", 1e6},            // doubling must shrink by this factor
      {"specialization-limit", 1e-5},   // extrapolated homogeneous limit
  };
  const auto it = defaults.find(key);
  if (it == defaults.end()) {
    throw DomainError("unknown tolerance key \"" + key + "\"");
  }
  return it->second;
}

CheckResult run_check(const std::string& name, const SuiteConfig& config) {
  for (const auto& [checkName, fn] : check_table()) {
    if (checkName == name) {
      try {
        return fn(config);
      } catch (const std::exception& e) {
        CheckResult result;
        result.name = name;
        result.tolerance = tol_for(config, name);
        result.pass = false;
        result.note = std::string("aborted: ") + e.what();
        return result;
      }
    }
  }
  throw DomainError("unknown check \"" + name + "\"");
}

std::vector<CheckResult> run_suite(std::vector<std::string> names,
                                   const SuiteConfig& config) {
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  for (const auto& name : names) {
    bool known = false;
    for (const auto& [checkName, fn] : check_table()) {
      known = known || checkName == name;
    }
    if (!known) throw DomainError("unknown check \"" + name + "\"");
  }

  std::vector<CheckResult> results(names.size());
  const int workers = std::max(
      1, std::min(worker_count(), static_cast<int>(names.size())));
  std::atomic<std::size_t> next{0};
  const auto pump = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= names.size()) return;
      results[i] = run_check(names[i], config);
    }
  };
  if (workers == 1) {
    pump();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(pump);
    for (auto& t : pool) t.join();
  }
  return results;  // names were sorted, so results are ordered by name
}

int worker_count() {
  if (const char* env = std::getenv("ICEVERTEX_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) {
      return static_cast<int>(std::min(v, 256L));
    }
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace icevertex

/*
 * Copyright (c) Contributors to the icevertex project.
 * For complete copyright and license terms please see the LICENSE at the root
 * of this distribution.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "icevertex/weights.hpp"

#include <cmath>
#include <complex>

#include "doctest.h"
#include "icevertex/lattice.hpp"
#include "icevertex/rng.hpp"

namespace {

using namespace icevertex;

constexpr double kPi = 3.14159265358979323846;

ModelParams params_11(Complex gamma, Complex zeta, Complex phi, Complex lambda,
                      Complex mu) {
  ModelParams p;
  p.gamma = gamma;
  p.zeta = zeta;
  p.phi = phi;
  p.lambdas = {lambda};
  p.mus = {mu};
  return p;
}

bool close(Complex a, Complex b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a),
                                                         std::abs(b)));
}

}  // namespace

TEST_SUITE("weights") {

TEST_CASE("f and h basics") {
  CHECK(std::abs(f(Complex{0, 0})) == 0.0);
  CHECK(close(h(Complex{0, 0}), Complex{2, 0}));
  CHECK(close(f(Complex{0, kPi / 2}), Complex{0, 2}, 1e-15));
  // f doubles sinh: f(1) = 2 sinh 1.
  CHECK(close(f(Complex{1, 0}), Complex{2 * std::sinh(1.0), 0}));
}

TEST_CASE("local weights") {
  const Complex gamma{0.3, 0.4};
  CHECK(local_weight(VertexKind::APlus, Complex{0.7, -0.2}, gamma) ==
        Complex{1, 0});
  CHECK(local_weight(VertexKind::AMinus, Complex{-1.1, 0.9}, gamma) ==
        Complex{1, 0});
  CHECK(std::abs(local_weight(VertexKind::BPlus, Complex{0, 0}, gamma)) ==
        0.0);
  CHECK(close(local_weight(VertexKind::CPlus, Complex{0, 0}, gamma),
              Complex{1, 0}));
  CHECK(close(local_weight(VertexKind::CMinus, Complex{0, 0}, gamma),
              Complex{1, 0}));

  const Complex arg{0.5, -0.3};
  CHECK(close(local_weight(VertexKind::BPlus, arg, gamma),
              std::exp(-gamma) * f(arg) / f(arg + gamma)));
  CHECK(close(local_weight(VertexKind::BMinus, arg, gamma),
              std::exp(gamma) * f(arg) / f(arg + gamma)));
  CHECK(close(local_weight(VertexKind::CPlus, arg, gamma),
              std::exp(arg) * f(gamma) / f(arg + gamma)));
  CHECK(close(local_weight(VertexKind::CMinus, arg, gamma),
              std::exp(-arg) * f(gamma) / f(arg + gamma)));

  CHECK_THROWS_AS(local_weight(VertexKind::BPlus, -gamma, gamma), PoleError);
}

TEST_CASE("turn weights") {
  const ModelParams p =
      params_11({0.3, 0.1}, {0.8, -0.5}, {0, 0}, {0.4, 0.2}, {0.1, 0.0});
  CHECK(std::abs(turn_weight(TurnKind::KCreate, p.lambdas[0], p)) == 0.0);

  ModelParams q = p;
  q.phi = {0.7, 0.1};
  CHECK(close(turn_weight(TurnKind::KCreate, q.lambdas[0], q),
              q.phi * f(2.0 * q.lambdas[0])));
  CHECK(std::abs(turn_weight(TurnKind::KMinus, q.zeta, q)) < 1e-14);
  CHECK(close(turn_weight(TurnKind::KPlus, Complex{0, 0}, q),
              std::exp(q.zeta) * f(q.zeta)));
  CHECK(close(turn_weight(TurnKind::KPlus, q.lambdas[0], q),
              std::exp(q.zeta - q.lambdas[0]) * f(q.zeta + q.lambdas[0])));
  CHECK(close(turn_weight(TurnKind::KMinus, q.lambdas[0], q),
              std::exp(q.zeta + q.lambdas[0]) * f(q.zeta - q.lambdas[0])));
}

TEST_CASE("vertex argument") {
  const Complex l{0.3, 0.7}, m{-0.2, 0.4};
  CHECK(vertex_argument(RowHalf::Upper, l, m) == l - m);
  CHECK(vertex_argument(RowHalf::Lower, l, m) == l + m);
  CHECK(vertex_argument(RowHalf::Upper, l, Complex{0, 0}) ==
        vertex_argument(RowHalf::Lower, l, Complex{0, 0}));
}

TEST_CASE("state weight of the turn-only lattice") {
  ModelParams p;
  p.gamma = {0.3, 0.2};
  p.zeta = {0.5, -0.1};
  p.phi = {0.9, 0.4};
  p.lambdas = {{0.6, 0.3}};
  const auto states = enumerate_states({1, 0});
  REQUIRE(states.size() == 1);
  CHECK(close(state_weight(states[0], p), p.phi * f(2.0 * p.lambdas[0])));
  CHECK(close(partition_brute(p), p.phi * f(2.0 * p.lambdas[0])));
}

TEST_CASE("state weights of the two 1x1 states") {
  Rng rng(11, "weights-11");
  for (int draw = 0; draw < 5; ++draw) {
    const ModelParams p = sample_generic({1, 1}, rng);
    const Complex l = p.lambdas[0];
    const Complex mu = p.mus[0];
    const auto states = enumerate_states({1, 1});
    REQUIRE(states.size() == 2);
    REQUIRE(turn_kind(states[0], 1) == TurnKind::KPlus);
    REQUIRE(turn_kind(states[1], 1) == TurnKind::KMinus);

    const Complex plusExpected =
        turn_weight(TurnKind::KPlus, l, p) *
        local_weight(VertexKind::CPlus, l + mu, p.gamma) *
        local_weight(VertexKind::BPlus, l - mu, p.gamma);
    const Complex minusExpected =
        turn_weight(TurnKind::KMinus, l, p) *
        local_weight(VertexKind::BPlus, l + mu, p.gamma) *
        local_weight(VertexKind::CMinus, l - mu, p.gamma);
    CHECK(close(state_weight(states[0], p), plusExpected));
    CHECK(close(state_weight(states[1], p), minusExpected));
    CHECK(close(partition_brute(p), plusExpected + minusExpected));
  }
}

TEST_CASE("fixed-turn-count sums partition the whole sum") {
  Rng rng(23, "weights-fixed-k");
  for (const LatticeSize size : {LatticeSize{2, 1}, LatticeSize{2, 2},
                                 LatticeSize{3, 2}}) {
    const ModelParams p = sample_generic(size, rng);
    Complex total{0, 0};
    for (int k = 0; k <= size.m; ++k) {
      total += partition_brute_fixed_k(p, k);
    }
    CHECK(close(total, partition_brute(p)));
  }

  const ModelParams p11 = sample_generic({1, 1}, rng);
  const auto states = enumerate_states({1, 1});
  CHECK(close(partition_brute_fixed_k(p11, 0), state_weight(states[1], p11)));
  CHECK(close(partition_brute_fixed_k(p11, 1), state_weight(states[0], p11)));

  // On the 2x1 lattice the four states split two against two by turn sign.
  const ModelParams p21 = sample_generic({2, 1}, rng);
  int withPlus = 0;
  Complex sumPlus{0, 0};
  for (const auto& s : enumerate_states({2, 1})) {
    if (state_stats(s).nu(TurnKind::KPlus) == 1) {
      ++withPlus;
      sumPlus += state_weight(s, p21);
    }
  }
  CHECK(withPlus == 2);
  CHECK(close(partition_brute_fixed_k(p21, 1), sumPlus));

  CHECK_THROWS_AS(partition_brute_fixed_k(p11, -1), DomainError);
  CHECK_THROWS_AS(partition_brute_fixed_k(p11, 2), DomainError);
}

TEST_CASE("phi = 0 kills every lattice with creation turns") {
  Rng rng(31, "weights-phi0");
  for (const LatticeSize size : {LatticeSize{2, 1}, LatticeSize{3, 2}}) {
    ModelParams p = sample_generic(size, rng);
    p.phi = {0, 0};
    CHECK(std::abs(partition_brute(p)) == 0.0);
  }
}

TEST_CASE("partition sum is invariant under parameter permutations") {
  Rng rng(47, "weights-permute");
  const ModelParams p = sample_generic({3, 2}, rng);
  const Complex base = partition_brute(p);

  ModelParams swappedLambdas = p;
  std::swap(swappedLambdas.lambdas[0], swappedLambdas.lambdas[2]);
  CHECK(close(partition_brute(swappedLambdas), base));

  ModelParams swappedMus = p;
  std::swap(swappedMus.mus[0], swappedMus.mus[1]);
  CHECK(close(partition_brute(swappedMus), base));
}

TEST_CASE("sharded summation agrees with the serial sum") {
  Rng rng(59, "weights-shards");
  for (const LatticeSize size : {LatticeSize{2, 2}, LatticeSize{3, 3}}) {
    const ModelParams p = sample_generic(size, rng);
    const Complex serial = partition_brute(p);
    for (int workers : {1, 2, 3, 7}) {
      const Complex parallel = partition_brute_parallel(p, workers);
      CHECK(std::abs(parallel - serial) <= 1e-12 * std::abs(serial));
    }
  }
  CHECK_THROWS_AS(
      partition_brute_parallel(sample_generic({1, 1}, rng), 0), DomainError);
}

TEST_CASE("Yang-Baxter residual vanishes") {
  Rng rng(7, "weights-ybe");
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    const Complex l1{rng.uniform_sym(), rng.uniform_sym()};
    const Complex l2{rng.uniform_sym(), rng.uniform_sym()};
    const Complex l3{rng.uniform_sym(), rng.uniform_sym()};
    Complex gamma{rng.uniform_sym(), rng.uniform_sym()};
    // Keep the three R-matrix denominators safely away from poles.
    if (std::abs(f(l1 - l2 + gamma)) < 0.05 ||
        std::abs(f(l1 - l3 + gamma)) < 0.05 ||
        std::abs(f(l2 - l3 + gamma)) < 0.05) {
      continue;
    }
    worst = std::max(worst, ybe_residual(l1, l2, l3, gamma));
  }
  CHECK(worst < 1e-12);

  // Degenerate and shifted cases stay exact.
  const Complex a{0.31, -0.27}, b{-0.45, 0.12}, c{0.15, 0.72};
  const Complex g{0.52, 0.35};
  CHECK(ybe_residual(a, a, b, g) < 1e-12);
  CHECK(ybe_residual(a, b, c, g) < 1e-12);
  CHECK(ybe_residual(a, b, c, g + Complex{0, 2 * kPi}) < 1e-12);
}

TEST_CASE("reflection residual vanishes") {
  Rng rng(13, "weights-reflection");
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    ModelParams p = sample_generic({1, 0}, rng);
    const Complex l{rng.uniform_sym(), rng.uniform_sym()};
    const Complex lp{rng.uniform_sym(), rng.uniform_sym()};
    if (std::abs(f(l - lp + p.gamma)) < 0.05 ||
        std::abs(f(l + lp + p.gamma)) < 0.05) {
      continue;
    }
    worst = std::max(worst, reflection_residual(l, lp, p));
  }
  CHECK(worst < 1e-12);

  ModelParams diag = sample_generic({1, 0}, rng);
  diag.phi = {0, 0};
  CHECK(reflection_residual({0.4, 0.1}, {-0.3, 0.6}, diag) < 1e-12);

  const ModelParams p = sample_generic({1, 0}, rng);
  CHECK(reflection_residual({0.25, -0.4}, {0.25, -0.4}, p) < 1e-12);
}

TEST_CASE("genericity predicate and sampler") {
  Rng rng(3, "weights-generic");
  const ModelParams p = sample_generic({3, 2}, rng);
  CHECK(is_generic(p, 0.05));

  ModelParams degenerate = p;
  degenerate.lambdas[1] = degenerate.lambdas[0];
  CHECK_FALSE(is_generic(degenerate, 0.05));

  ModelParams muPole = p;
  muPole.mus[0] = -muPole.lambdas[0] - muPole.gamma;
  CHECK_FALSE(is_generic(muPole, 0.05));

  // Same seed and label reproduce the same draw.
  Rng rngA(17, "weights-repeat");
  Rng rngB(17, "weights-repeat");
  const ModelParams a = sample_generic({2, 2}, rngA);
  const ModelParams b = sample_generic({2, 2}, rngB);
  CHECK(a.gamma == b.gamma);
  CHECK(a.lambdas == b.lambdas);
  CHECK(a.mus == b.mus);

  // Pinned crossing parameter passes through untouched.
  const Complex special{0, 4 * kPi / 3};
  Rng rngC(29, "weights-pinned");
  const ModelParams c = sample_generic({2, 1}, rngC, 0.05, special);
  CHECK(c.gamma == special);
}

TEST_CASE("poles surface as PoleError with the site") {
  // Dyadic parts make the cancellation lambda + mu + gamma = 0 exact; the
  // pole check fires on exactly vanishing denominators, not near-misses.
  ModelParams p = params_11({0.25, 0.5}, {0.5, -0.125}, {0.875, 0.375},
                            {0.5, 0.25}, {0, 0});
  p.mus[0] = -p.lambdas[0] - p.gamma;  // lower-row argument hits the pole
  try {
    partition_brute(p);
    FAIL("expected a pole error");
  } catch (const PoleError& e) {
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
  }
}

}  // TEST_SUITE

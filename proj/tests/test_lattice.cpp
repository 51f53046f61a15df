/*
 * Copyright (c) Contributors to the icevertex project.
 * For complete copyright and license terms please see the LICENSE at the root
 * of this distribution.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "icevertex/lattice.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

using namespace icevertex;

long long binom2(long long x) { return x * (x - 1) / 2; }

// The two admissible states of the 1x1 lattice, built edge by edge.
LatticeState state_11_kplus() {
  return LatticeState({1, 1},
                      {ArrowDir::Left, ArrowDir::Right,    // row 1
                       ArrowDir::Right, ArrowDir::Right},  // row 2
                      {ArrowDir::Up, ArrowDir::Down, ArrowDir::Down});
}

LatticeState state_11_kminus() {
  return LatticeState({1, 1},
                      {ArrowDir::Right, ArrowDir::Right,  // row 1
                       ArrowDir::Left, ArrowDir::Right},  // row 2
                      {ArrowDir::Up, ArrowDir::Up, ArrowDir::Down});
}

}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("size validation") {
  CHECK_NOTHROW(require_valid_size({1, 0}));
  CHECK_NOTHROW(require_valid_size({3, 3}));
  CHECK_NOTHROW(require_valid_size({5, 2}));
  CHECK_THROWS_AS(require_valid_size({0, 0}), SizeError);
  CHECK_THROWS_AS(require_valid_size({-1, 0}), SizeError);
  CHECK_THROWS_AS(require_valid_size({1, 2}), SizeError);
  CHECK_THROWS_AS(require_valid_size({2, -1}), SizeError);
  CHECK_THROWS_AS(enumerate_states({2, 3}), SizeError);
}

TEST_CASE("letters and names") {
  CHECK(vertex_letter(VertexKind::APlus) == 'A');
  CHECK(vertex_letter(VertexKind::AMinus) == 'a');
  CHECK(vertex_letter(VertexKind::BPlus) == 'B');
  CHECK(vertex_letter(VertexKind::BMinus) == 'b');
  CHECK(vertex_letter(VertexKind::CPlus) == 'C');
  CHECK(vertex_letter(VertexKind::CMinus) == 'c');
  CHECK(turn_letter(TurnKind::KPlus) == '+');
  CHECK(turn_letter(TurnKind::KMinus) == '-');
  CHECK(turn_letter(TurnKind::KCreate) == '*');
  CHECK(std::string(vertex_name(VertexKind::CMinus)) == "c_minus");
  CHECK(std::string(turn_name(TurnKind::KCreate)) == "k_create");
}

TEST_CASE("constructor rejects mismatched grids") {
  CHECK_THROWS_AS(LatticeState({1, 1}, {ArrowDir::Right},
                               {ArrowDir::Up, ArrowDir::Down, ArrowDir::Down}),
                  SizeError);
  CHECK_THROWS_AS(LatticeState({1, 1},
                               {ArrowDir::Left, ArrowDir::Right,
                                ArrowDir::Right, ArrowDir::Right},
                               {ArrowDir::Up}),
                  SizeError);
}

TEST_CASE("edge accessors bound-check") {
  const LatticeState s = state_11_kplus();
  CHECK(s.h_arrow(1, 0) == ArrowDir::Left);
  CHECK(s.v_arrow(1, 2) == ArrowDir::Down);
  CHECK_THROWS_AS(s.h_arrow(0, 0), SizeError);
  CHECK_THROWS_AS(s.h_arrow(3, 0), SizeError);
  CHECK_THROWS_AS(s.h_arrow(1, 2), SizeError);
  CHECK_THROWS_AS(s.v_arrow(2, 0), SizeError);
  CHECK_THROWS_AS(s.v_arrow(1, 3), SizeError);
}

TEST_CASE("classification of the two 1x1 states") {
  const LatticeState plus = state_11_kplus();
  CHECK(classify_vertex(plus, 1, 1) == VertexKind::CPlus);
  CHECK(classify_vertex(plus, 2, 1) == VertexKind::BPlus);
  CHECK(turn_kind(plus, 1) == TurnKind::KPlus);

  const LatticeState minus = state_11_kminus();
  CHECK(classify_vertex(minus, 1, 1) == VertexKind::BPlus);
  CHECK(classify_vertex(minus, 2, 1) == VertexKind::CMinus);
  CHECK(turn_kind(minus, 1) == TurnKind::KMinus);
}

TEST_CASE("stats of the 1x1 states") {
  const StateStats plus = state_stats(state_11_kplus());
  CHECK(plus.nu_south(VertexKind::CPlus) == 1);
  CHECK(plus.nu_north(VertexKind::BPlus) == 1);
  CHECK(plus.nu(VertexKind::CPlus) == 1);
  CHECK(plus.nu(VertexKind::AMinus) == 0);
  CHECK(plus.nu(TurnKind::KPlus) == 1);
  CHECK(plus.nu(TurnKind::KMinus) == 0);

  const StateStats minus = state_stats(state_11_kminus());
  CHECK(minus.nu_south(VertexKind::BPlus) == 1);
  CHECK(minus.nu_north(VertexKind::CMinus) == 1);
  CHECK(minus.nu(TurnKind::KMinus) == 1);
}

TEST_CASE("inadmissible arrow patterns throw") {
  const LatticeState broken = state_11_kplus().with_v_arrow(1, 1, ArrowDir::Up);
  CHECK_THROWS_AS(classify_vertex(broken, 1, 1), IceRuleViolation);
  CHECK_THROWS_AS(classify_vertex(broken, 2, 1), IceRuleViolation);
}

TEST_CASE("forbidden turn throws but validates as data") {
  const LatticeState bad = state_11_kplus().with_h_arrow(2, 0, ArrowDir::Left);
  CHECK_THROWS_AS(turn_kind(bad, 1), ForbiddenTurn);
  const auto violations = validate_state(bad);
  const bool has_turn = std::any_of(
      violations.begin(), violations.end(),
      [](const Violation& v) { return v.rule == "turn-forbidden"; });
  CHECK(has_turn);
}

TEST_CASE("turn index bound-check") {
  CHECK_THROWS_AS(turn_kind(state_11_kplus(), 0), SizeError);
  CHECK_THROWS_AS(turn_kind(state_11_kplus(), 2), SizeError);
}

TEST_CASE("validate_state accepts the good states") {
  CHECK(validate_state(state_11_kplus()).empty());
  CHECK(validate_state(state_11_kminus()).empty());
}

TEST_CASE("validate_state reports boundary flips") {
  const LatticeState s = state_11_kplus();
  auto rules = [](const std::vector<Violation>& vs) {
    std::vector<std::string> r;
    for (const auto& v : vs) r.push_back(v.rule);
    return r;
  };

  const auto bottom = rules(validate_state(s.with_v_arrow(1, 0, ArrowDir::Down)));
  CHECK(std::count(bottom.begin(), bottom.end(), "boundary-bottom") == 1);
  CHECK(std::count(bottom.begin(), bottom.end(), "ice-rule") == 1);

  const auto top = rules(validate_state(s.with_v_arrow(1, 2, ArrowDir::Up)));
  CHECK(std::count(top.begin(), top.end(), "boundary-top") == 1);

  const auto right = rules(validate_state(s.with_h_arrow(1, 1, ArrowDir::Left)));
  CHECK(std::count(right.begin(), right.end(), "boundary-right") == 1);

  const auto inner = rules(validate_state(s.with_v_arrow(1, 1, ArrowDir::Up)));
  CHECK(std::count(inner.begin(), inner.end(), "ice-rule") == 2);
}

TEST_CASE("validate_state counts creation turns") {
  // A k_plus turn on a 1x0 lattice breaks both the right boundary and the
  // forced number of creation turns.
  const LatticeState s({1, 0}, {ArrowDir::Left, ArrowDir::Right}, {});
  const auto violations = validate_state(s);
  const bool creation = std::any_of(
      violations.begin(), violations.end(),
      [](const Violation& v) { return v.rule == "creation-count"; });
  const bool boundary = std::any_of(
      violations.begin(), violations.end(),
      [](const Violation& v) { return v.rule == "boundary-right"; });
  CHECK(creation);
  CHECK(boundary);
}

TEST_CASE("serialization of the 1x1 states") {
  CHECK(serialize_state(state_11_kplus()) == "+\nC\nB\n");
  CHECK(serialize_state(state_11_kminus()) == "-\nB\nc\n");
}

TEST_CASE("enumeration counts") {
  const std::map<std::pair<int, int>, std::size_t> expected = {
      {{1, 0}, 1},  {{2, 0}, 1},  {{1, 1}, 2},   {{2, 1}, 4},
      {{3, 1}, 6},  {{4, 1}, 8},  {{2, 2}, 12},  {{3, 2}, 44},
      {{3, 3}, 208}, {{4, 4}, 10336}};
  for (const auto& [size, count] : expected) {
    CAPTURE(size.first);
    CAPTURE(size.second);
    CHECK(enumerate_states({size.first, size.second}).size() == count);
  }
}

TEST_CASE("enumeration is sorted, unique, valid, and deterministic") {
  for (const LatticeSize size : {LatticeSize{2, 2}, LatticeSize{3, 2}}) {
    const auto states = enumerate_states(size);
    std::vector<std::string> keys;
    for (const auto& s : states) {
      CHECK(validate_state(s).empty());
      keys.push_back(serialize_state(s));
    }
    CHECK(std::is_sorted(keys.begin(), keys.end()));
    CHECK(std::adjacent_find(keys.begin(), keys.end()) == keys.end());
    CHECK(enumerate_states(size) == states);
  }
}

TEST_CASE("1x1 enumeration returns the two known states in order") {
  const auto states = enumerate_states({1, 1});
  REQUIRE(states.size() == 2);
  CHECK(states[0] == state_11_kplus());
  CHECK(states[1] == state_11_kminus());
}

TEST_CASE("shards partition the enumeration") {
  for (const LatticeSize size : {LatticeSize{2, 2}, LatticeSize{3, 2}}) {
    const auto full = enumerate_states(size);
    for (int count : {1, 2, 3, 5}) {
      std::vector<LatticeState> merged;
      for (int index = 0; index < count; ++index) {
        const auto shard = enumerate_states_shard(size, index, count);
        merged.insert(merged.end(), shard.begin(), shard.end());
      }
      std::sort(merged.begin(), merged.end(),
                [](const LatticeState& a, const LatticeState& b) {
                  return serialize_state(a) < serialize_state(b);
                });
      CHECK(merged == full);
    }
  }
  // Without vertical lines there is a single state; it lives in shard 0.
  CHECK(enumerate_states_shard({2, 0}, 0, 4).size() == 1);
  CHECK(enumerate_states_shard({2, 0}, 3, 4).empty());
  CHECK_THROWS_AS(enumerate_states_shard({2, 2}, 2, 2), SizeError);
  CHECK_THROWS_AS(enumerate_states_shard({2, 2}, -1, 2), SizeError);
}

TEST_CASE("vertex count identities hold on every state") {
  const std::vector<LatticeSize> sizes = {{1, 1}, {2, 1}, {2, 2},
                                          {3, 1}, {3, 2}, {3, 3}};
  for (const LatticeSize size : sizes) {
    const long long n = size.n;
    const long long m = size.m;
    for (const auto& state : enumerate_states(size)) {
      const StateStats st = state_stats(state);
      CHECK(st.nu(TurnKind::KCreate) == n - m);
      CHECK(st.turns[0] + st.turns[1] + st.turns[2] == n);

      // The boundary conditions fix the b and c imbalances of every state.
      CHECK(st.nu(VertexKind::BPlus) - st.nu(VertexKind::BMinus) ==
            binom2(n + 1) - binom2(n - m + 1));
      CHECK(st.nu(VertexKind::CPlus) - st.nu(VertexKind::CMinus) ==
            m - 2 * st.nu(TurnKind::KMinus));
      CHECK(st.nu(VertexKind::APlus) + st.nu(VertexKind::AMinus) ==
            m * n + binom2(m) - m +
                2 * (st.nu(TurnKind::KMinus) - st.nu(VertexKind::BMinus) -
                     st.nu(VertexKind::CMinus)));
    }
  }
}

TEST_CASE("per-double-row c imbalance matches the turn kind") {
  for (const LatticeSize size : {LatticeSize{2, 2}, LatticeSize{3, 2},
                                 LatticeSize{3, 3}}) {
    for (const auto& state : enumerate_states(size)) {
      for (int i = 1; i <= size.n; ++i) {
        int cpS = 0, cmS = 0, cpN = 0, cmN = 0;
        for (int c = 1; c <= size.m; ++c) {
          const VertexKind lower = classify_vertex(state, 2 * i - 1, c);
          const VertexKind upper = classify_vertex(state, 2 * i, c);
          cpS += lower == VertexKind::CPlus;
          cmS += lower == VertexKind::CMinus;
          cpN += upper == VertexKind::CPlus;
          cmN += upper == VertexKind::CMinus;
        }
        switch (turn_kind(state, i)) {
          case TurnKind::KPlus:
            CHECK(cpS == cmS + 1);
            CHECK(cpN == cmN);
            break;
          case TurnKind::KMinus:
            CHECK(cpS == cmS);
            CHECK(cpN == cmN - 1);
            break;
          case TurnKind::KCreate:
            CHECK(cpS == cmS);
            CHECK(cpN == cmN);
            break;
        }
      }
    }
  }
}

TEST_CASE("serialize and parse are inverse") {
  for (const LatticeSize size : {LatticeSize{1, 0}, LatticeSize{2, 1},
                                 LatticeSize{2, 2}, LatticeSize{3, 2}}) {
    for (const auto& state : enumerate_states(size)) {
      const std::string text = serialize_state(state);
      CHECK(parse_state(text) == state);
      CHECK(serialize_state(parse_state(text)) == text);
    }
  }
}

TEST_CASE("m = 0 serialization") {
  const auto states = enumerate_states({3, 0});
  REQUIRE(states.size() == 1);
  CHECK(serialize_state(states[0]) == "*\n*\n*\n");
  CHECK(parse_state("*\n*\n*\n") == states[0]);
  CHECK(parse_state("*\n") == enumerate_states({1, 0})[0]);
}

TEST_CASE("parse is structural; validate_state judges the physics") {
  // A lone k_plus turn parses fine but breaks the m = 0 boundary invariants.
  const LatticeState s = parse_state("+\n");
  CHECK_FALSE(validate_state(s).empty());
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_state(""), ParseError);

  try {
    parse_state("+\nX\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()) ==
          "unknown vertex letter 'X' (line 2, column 1)");
    CHECK(e.line() == 2);
    CHECK(e.column() == 1);
  }

  try {
    parse_state("+\nC\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("missing vertex row") == 0);
    CHECK(e.line() == 3);
  }

  try {
    parse_state("+\nC\nBB\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("inconsistent lengths") !=
          std::string::npos);
    CHECK(e.line() == 3);
  }

  try {
    parse_state("C\nB\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("expected a turn character") == 0);
    CHECK(e.line() == 1);
  }

  try {
    parse_state("+C\nC\nB\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("single character") != std::string::npos);
  }

  // The lower row pins the shared vertical edge Down; the upper letter then
  // demands Up.
  try {
    parse_state("+\nC\nc\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("conflicting arrows") !=
          std::string::npos);
    CHECK(e.line() == 3);
  }

  // Letters describe a k_plus double row but the turn character says k_minus.
  try {
    parse_state("-\nC\nB\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("turn character") != std::string::npos);
    CHECK(e.line() == 1);
  }

  // More vertical lines than double rows cannot satisfy the turn flux.
  CHECK_THROWS_AS(parse_state("+\nCC\nBB\n"), SizeError);
}

}  // TEST_SUITE

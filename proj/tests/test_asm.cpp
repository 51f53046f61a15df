/*
 * Copyright (c) Contributors to the icevertex project.
 * For complete copyright and license terms please see the LICENSE at the root
 * of this distribution.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "icevertex/asm_matrix.hpp"

#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "icevertex/counting.hpp"
#include "icevertex/errors.hpp"
#include "icevertex/lattice.hpp"

namespace {

using icevertex::AsmMatrix;
using icevertex::LatticeSize;
using icevertex::TurnKind;

AsmMatrix make(LatticeSize size, std::vector<int> entries) {
  AsmMatrix mat;
  mat.size = size;
  mat.entries.assign(entries.begin(), entries.end());
  return mat;
}

bool has_rule(const std::vector<icevertex::Violation>& violations,
              const std::string& rule) {
  for (const auto& v : violations) {
    if (v.rule == rule) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("asm") {

TEST_CASE("figure matrices validate") {
  // The three matrices displayed as members of the family.
  const AsmMatrix a =
      make({3, 2}, {1, 0, 0, 0, -1, 1, 0, 0, 1, 0, 0, 0});
  const AsmMatrix b =
      make({3, 2}, {1, 0, 0, 0, 0, 0, -1, 1, 1, 0, 0, 0});
  const AsmMatrix c = make({4, 3}, {1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0,
                                    0, -1, 1, -1, 1, 0, 1, 0, 0, 0, 0, 0});
  CHECK(icevertex::validate_matrix(a).empty());
  CHECK(icevertex::validate_matrix(b).empty());
  CHECK(icevertex::validate_matrix(c).empty());

  // The displayed counterexample: both rows of its middle double row have
  // +1 as their leftmost nonzero entry.
  const AsmMatrix bad =
      make({3, 2}, {0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0});
  const auto violations = icevertex::validate_matrix(bad);
  REQUIRE(!violations.empty());
  CHECK(has_rule(violations, "double row sum is 0 or 1"));
  CHECK(has_rule(violations, "double row rows not both leftmost +1"));
  CHECK(violations.front().site == "double row 2");
  CHECK_THROWS_AS(icevertex::matrix_to_state(bad),
                  icevertex::InconsistentMatrix);
}

TEST_CASE("basic validation examples") {
  // The all-zero matrix with no columns.
  AsmMatrix empty;
  empty.size = {2, 0};
  CHECK(icevertex::validate_matrix(empty).empty());

  // A single +1 placed in row 2 of a 4x1 matrix.
  CHECK(icevertex::validate_matrix(make({2, 1}, {0, 1, 0, 0})).empty());

  // Constraint probes, one rule each.
  CHECK(has_rule(icevertex::validate_matrix(make({2, 1}, {0, 0, 0, 0})),
                 "column sum is 1"));
  CHECK(has_rule(icevertex::validate_matrix(make({2, 1}, {-1, 1, 0, 1})),
                 "column starts and ends with +1"));
  CHECK(has_rule(icevertex::validate_matrix(make({2, 1}, {1, 1, -1, 0})),
                 "column sign alternation"));
  CHECK(has_rule(icevertex::validate_matrix(
                     make({2, 2}, {1, 1, 0, 0, 0, 0, 0, 0})),
                 "row sign alternation"));
  CHECK(has_rule(icevertex::validate_matrix(
                     make({2, 2}, {0, 1, 1, -1, 0, 0, 0, 1})),
                 "row rightmost nonzero is +1"));
  CHECK(has_rule(icevertex::validate_matrix(make({1, 1}, {1})),
                 "entry grid size"));
  CHECK(has_rule(icevertex::validate_matrix(make({1, 1}, {2, 0})),
                 "entry range"));
}

TEST_CASE("bijection reproduces the displayed example") {
  const icevertex::LatticeState state =
      icevertex::parse_state("-\nBBB\nbcA\n+\nCaB\nBCc\n-\ncCa\ncBB\n");
  CHECK(icevertex::validate_state(state).empty());

  const AsmMatrix expected = icevertex::parse_matrix(
      "1 0 0\n-1 1 0\n0 -1 1\n1 0 0\n0 1 0\n0 0 0\n");
  CHECK(icevertex::validate_matrix(expected).empty());

  CHECK(icevertex::state_to_matrix(state) == expected);
  CHECK(icevertex::matrix_to_state(expected) == state);

  // Turn kinds agree through the vertical flip: matrix double row i is
  // lattice double row n+1-i.
  CHECK(icevertex::matrix_turn_kind(expected, 1) == TurnKind::KMinus);
  CHECK(icevertex::matrix_turn_kind(expected, 2) == TurnKind::KPlus);
  CHECK(icevertex::matrix_turn_kind(expected, 3) == TurnKind::KMinus);
  CHECK(icevertex::turn_kind(state, 1) == TurnKind::KMinus);
  CHECK(icevertex::turn_kind(state, 2) == TurnKind::KPlus);
  CHECK(icevertex::turn_kind(state, 3) == TurnKind::KMinus);
}

TEST_CASE("smallest reflecting systems") {
  const icevertex::LatticeState kplus = icevertex::parse_state("+\nC\nB\n");
  const icevertex::LatticeState kminus = icevertex::parse_state("-\nB\nc\n");

  const AsmMatrix plusImage = icevertex::state_to_matrix(kplus);
  CHECK(plusImage == make({1, 1}, {0, 1}));
  CHECK(icevertex::state_to_matrix(kminus) == make({1, 1}, {1, 0}));

  CHECK(icevertex::matrix_to_state(make({1, 1}, {0, 1})) == kplus);
  CHECK(icevertex::matrix_to_state(make({1, 1}, {1, 0})) == kminus);

  CHECK(icevertex::matrix_turn_kind(plusImage, 1) == TurnKind::KPlus);

  // Without reversal lines the image is the unique empty matrix.
  const auto states10 = icevertex::enumerate_states({1, 0});
  REQUIRE(states10.size() == 1);
  const AsmMatrix empty = icevertex::state_to_matrix(states10[0]);
  CHECK(empty.size == LatticeSize{1, 0});
  CHECK(empty.entries.empty());
  CHECK(icevertex::matrix_to_state(empty) == states10[0]);
}

TEST_CASE("round trip over every state") {
  for (int n = 1; n <= 3; ++n) {
    for (int m = 0; m <= n; ++m) {
      for (const auto& state : icevertex::enumerate_states({n, m})) {
        const AsmMatrix mat = icevertex::state_to_matrix(state);
        CHECK(icevertex::validate_matrix(mat).empty());
        CHECK(icevertex::matrix_to_state(mat) == state);
        for (int i = 1; i <= n; ++i) {
          CHECK(icevertex::matrix_turn_kind(mat, n + 1 - i) ==
                icevertex::turn_kind(state, i));
        }
      }
    }
  }
}

TEST_CASE("matrix enumeration is a faithful independent oracle") {
  CHECK(icevertex::enumerate_matrices({1, 1}).size() == 2);
  CHECK(icevertex::enumerate_matrices({2, 1}).size() == 4);
  for (int n = 1; n <= 3; ++n) {
    CHECK(icevertex::enumerate_matrices({n, 0}).size() == 1);
  }

  for (int n = 1; n <= 4; ++n) {
    for (int m = 0; m <= n; ++m) {
      const auto matrices = icevertex::enumerate_matrices({n, m});
      const auto total = icevertex::count_total(n, m).total;
      CHECK_MESSAGE(icevertex::BigInt(matrices.size()) == total,
                    "n=" << n << " m=" << m);
      CHECK(matrices.size() ==
            icevertex::enumerate_states({n, m}).size());

      std::set<std::string> distinct;
      for (const auto& mat : matrices) {
        CHECK(icevertex::validate_matrix(mat).empty());
        distinct.insert(icevertex::serialize_matrix(mat));
      }
      CHECK(distinct.size() == matrices.size());

      // The state map lands exactly onto the enumerated matrices.
      if (n <= 3) {
        std::set<std::string> images;
        for (const auto& state : icevertex::enumerate_states({n, m})) {
          images.insert(
              icevertex::serialize_matrix(icevertex::state_to_matrix(state)));
        }
        CHECK(images == distinct);
      }
    }
  }

  CHECK_THROWS_AS(icevertex::enumerate_matrices({1, 2}),
                  icevertex::SizeError);
  CHECK_THROWS_AS(icevertex::enumerate_matrices({0, 0}),
                  icevertex::SizeError);
}

TEST_CASE("turn refinement matches the closed counts") {
  for (int n = 1; n <= 4; ++n) {
    for (int m = 0; m <= n; ++m) {
      std::vector<long> hist(static_cast<std::size_t>(m) + 1, 0);
      for (const auto& mat : icevertex::enumerate_matrices({n, m})) {
        int plus = 0;
        for (int i = 1; i <= n; ++i) {
          if (icevertex::matrix_turn_kind(mat, i) == TurnKind::KPlus) {
            ++plus;
          }
        }
        REQUIRE(plus <= m);
        ++hist[static_cast<std::size_t>(plus)];
      }
      for (int k = 0; k <= m; ++k) {
        CHECK_MESSAGE(icevertex::BigInt(hist[static_cast<std::size_t>(k)]) ==
                          icevertex::count_Nk(n, m, k),
                      "n=" << n << " m=" << m << " k=" << k);
      }
    }
  }

  // All-zero double rows belong to creation turns.
  const AsmMatrix single = make({2, 1}, {0, 1, 0, 0});
  CHECK(icevertex::matrix_turn_kind(single, 1) == TurnKind::KPlus);
  CHECK(icevertex::matrix_turn_kind(single, 2) == TurnKind::KCreate);
  CHECK_THROWS_AS(icevertex::matrix_turn_kind(single, 0),
                  icevertex::DomainError);
  CHECK_THROWS_AS(icevertex::matrix_turn_kind(single, 3),
                  icevertex::DomainError);
}

TEST_CASE("matrix text round trip") {
  for (const auto& mat : icevertex::enumerate_matrices({3, 2})) {
    CHECK(icevertex::parse_matrix(icevertex::serialize_matrix(mat)) == mat);
  }
  CHECK(icevertex::serialize_matrix(make({1, 1}, {0, 1})) == "0\n1\n");
  const AsmMatrix empty = icevertex::parse_matrix("\n\n");
  CHECK(empty.size == LatticeSize{1, 0});

  CHECK_THROWS_AS(icevertex::parse_matrix(""), icevertex::ParseError);
  CHECK_THROWS_AS(icevertex::parse_matrix("0 1\n1 0\n0 0\n"),
                  icevertex::ParseError);  // odd row count
  CHECK_THROWS_AS(icevertex::parse_matrix("0 1\n0\n"),
                  icevertex::ParseError);  // ragged rows
  CHECK_THROWS_AS(icevertex::parse_matrix("0 2\n0 1\n"),
                  icevertex::ParseError);  // entry out of range
  CHECK_THROWS_AS(icevertex::parse_matrix("1 1\n0 0\n"),
                  icevertex::SizeError);  // more columns than double rows
}

TEST_CASE("contradictions are reported") {
  // -1 first in its column: the upward boundary arrow cannot flip down.
  CHECK_THROWS_AS(icevertex::matrix_to_state(make({1, 1}, {0, -1})),
                  icevertex::InconsistentMatrix);
  // Column never closes: no nonzero at all.
  CHECK_THROWS_AS(icevertex::matrix_to_state(make({1, 1}, {0, 0})),
                  icevertex::InconsistentMatrix);
  // Row whose rightmost nonzero is -1.
  CHECK_THROWS_AS(
      icevertex::matrix_to_state(make({2, 2}, {0, 1, 1, -1, 0, 0, 0, 1})),
      icevertex::InconsistentMatrix);
  // Entry grid size mismatch.
  CHECK_THROWS_AS(icevertex::matrix_to_state(make({1, 1}, {1})),
                  icevertex::InconsistentMatrix);
}

}  // TEST_SUITE

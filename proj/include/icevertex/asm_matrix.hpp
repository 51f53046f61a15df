/*
 * Copyright (c) Contributors to the icevertex project.
 * For complete copyright and license terms please see the LICENSE at the root
 * of this distribution.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef ICEVERTEX_ASM_MATRIX_HPP
#define ICEVERTEX_ASM_MATRIX_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "icevertex/lattice.hpp"

namespace icevertex {

/// A 2n x m matrix over {-1, 0, +1} in the alternating-sign family that is
/// in bijection with the lattice states: columns behave like ASM columns
/// (nonzeros alternate, start and end with +1, sum to 1), rows alternate
/// with rightmost nonzero +1, and the rows are coupled pairwise into double
/// rows whose sum must be 0 or 1.
///
/// Matrix rows are stored top-down: row 1 is the top row, and rows 2i-1 and
/// 2i form matrix double row i (counted from the top). The bijection flips
/// the vertical order relative to the lattice, whose rows count bottom-up:
/// matrix row j corresponds to lattice row 2n+1-j, so matrix double row i
/// corresponds to lattice double row n+1-i. Columns are shared: matrix
/// column c is lattice vertical line c.
struct AsmMatrix {
  LatticeSize size;
  /// Row-major entries, rows() * cols() of them; row 0 of the storage is the
  /// TOP matrix row.
  std::vector<std::int8_t> entries;

  int rows() const { return 2 * size.n; }
  int cols() const { return size.m; }

  /// Entry in matrix row r (1..2n, top-down) and column c (1..m).
  std::int8_t at(int r, int c) const {
    return entries[static_cast<std::size_t>(r - 1) *
                       static_cast<std::size_t>(size.m) +
                   static_cast<std::size_t>(c - 1)];
  }

  friend bool operator==(const AsmMatrix&, const AsmMatrix&) = default;
};

/// Checks every defining constraint and reports each break as a violation
/// (`rule` names the constraint, `site` the matrix row/column/double row,
/// 1-based, rows counted from the top). Empty result means a valid matrix.
std::vector<Violation> validate_matrix(const AsmMatrix& mat);

/// Image of a state under the bijection: c vertices become the nonzero
/// entries (+1 for the kind a turn can force leftmost, -1 for its partner;
/// upper rows take +1 from CMinus, lower rows from CPlus) and a/b vertices
/// become 0. Always produces a valid matrix for a valid state.
AsmMatrix state_to_matrix(const LatticeState& state);

/// Reconstructs the unique state whose image is `mat` by propagating
/// arrows: each column is walked bottom-up from an Up boundary arrow (+1
/// flips Up to Down, -1 flips Down to Up), each row right-to-left from a
/// Right boundary arrow. Throws InconsistentMatrix when a walk needs an
/// arrow the matrix contradicts (always the case for some site of an
/// invalid matrix, never for a valid one).
LatticeState matrix_to_state(const AsmMatrix& mat);

/// The turn kind of matrix double row i (1..n, counted from the top): a
/// lower row whose leftmost nonzero is +1 marks KPlus, otherwise an upper
/// row whose leftmost nonzero is +1 marks KMinus, otherwise the double row
/// belongs to a creation turn.
TurnKind matrix_turn_kind(const AsmMatrix& mat, int doubleRow);

/// All valid matrices of the given size, built column by column on the
/// matrix side only (independent of the state enumerator), in a fixed
/// deterministic order. Throws SizeError unless 1 <= n and 0 <= m <= n.
std::vector<AsmMatrix> enumerate_matrices(LatticeSize size);

///// Text form: 2n lines of m space-separated entries from {-1, 0, 1}, top
/// row first, each line newline-terminated.
std::string serialize_matrix(const AsmMatrix& mat);

/// Inverse of serialize_matrix. Throws ParseError on malformed text (odd
/// row count, ragged rows, or tokens outside {-1, 0, 1}) and SizeError if
/// the parsed shape has more columns than double rows.
AsmMatrix parse_matrix(const std::string& text);

}  // namespace icevertex

#endif  // ICEVERTEX_ASM_MATRIX_HPP

/*
 * Copyright (c) Contributors to the icevertex project.
 * For complete copyright and license terms please see the LICENSE at the root
 * of this distribution.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef ICEVERTEX_LATTICE_HPP
#define ICEVERTEX_LATTICE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "icevertex/errors.hpp"

namespace icevertex {

/// Lattice dimensions: n horizontal double rows (2n rows total) and m
/// vertical lines. The ice rule together with the boundary conditions
/// requires m <= n.
struct LatticeSize {
  int n = 0;
  int m = 0;

  friend bool operator==(const LatticeSize&, const LatticeSize&) = default;
};

/// Throws SizeError unless 1 <= n and 0 <= m <= n.
void require_valid_size(LatticeSize size);

/// Physical direction of the arrow on one edge. Vertical edges carry Up or
/// Down, horizontal edges carry Left or Right.
enum class ArrowDir : std::uint8_t { Up, Down, Left, Right };

/// Which half of a double row a vertex sits in. Lower rows are traversed
/// leftwards (their positive horizontal direction is Left), upper rows
/// rightwards (positive direction is Right).
enum class RowHalf : std::uint8_t { Lower, Upper };

/// The six admissible vertex configurations.
enum class VertexKind : std::uint8_t {
  APlus,
  AMinus,
  BPlus,
  BMinus,
  CPlus,
  CMinus,
};

/// The three admissible boundary turns of a double row: KPlus and KMinus
/// reflect the horizontal line back, KCreate emits two rightward arrows.
enum class TurnKind : std::uint8_t { KPlus, KMinus, KCreate };

char vertex_letter(VertexKind kind);   // {A,a,B,b,C,c}, uppercase = plus
char turn_letter(TurnKind kind);       // {+,-,*}
const char* vertex_name(VertexKind kind);
const char* turn_name(TurnKind kind);

/// One broken invariant found by a validator; `site` locates it and `rule`
/// names the invariant.
struct Violation {
  std::string rule;
  std::string site;
};

/// Arrow assignment on every edge of the 2n x m lattice with a left turn
/// boundary, fixed boundary arrows at top/bottom/right, and the ice rule at
/// every vertex. Immutable after construction.
///
/// Geometry and indexing conventions used throughout this project:
///  - Lattice rows r = 1..2n count bottom to top; rows 2i-1 (lower) and 2i
///    (upper) form double row i, which carries the spectral parameter
///    lambda_i (lambda_1 at the bottom).
///  - Vertical lines c = 1..m count left to right; line c carries the
///    spectral parameter mu_{m+1-c} (mu_m leftmost, mu_1 rightmost).
///  - Horizontal edges of row r sit in gaps g = 0..m; gap 0 touches the turn
///    and gap m is the right boundary edge.
///  - Vertical edges of line c sit in gaps g = 0..2n; gap 0 is the bottom
///    boundary edge and gap 2n the top boundary edge.
///
/// Boundary conditions: every bottom vertical arrow points Up, every top
/// vertical arrow Down, every right horizontal arrow Right. Per double row
/// the gap-0 pair (lower, upper) must be (Left,Right), (Right,Left) or
/// (Right,Right); the pair (Left,Left) is inadmissible.
class LatticeState {
 public:
  /// Builds a state from raw grids. `h` has (2n)*(m+1) entries indexed
  /// [(r-1)*(m+1) + g]; `v` has m*(2n+1) entries indexed [(c-1)*(2n+1) + g].
  /// Only the sizes are checked here; use validate_state for the physics.
  LatticeState(LatticeSize size, std::vector<ArrowDir> h,
               std::vector<ArrowDir> v);

  LatticeSize size() const { return size_; }

  /// Arrow on the horizontal edge of row r (1..2n) in gap g (0..m).
  ArrowDir h_arrow(int r, int g) const { return h_[h_index(r, g)]; }

  /// Arrow on the vertical edge of line c (1..m) in gap g (0..2n).
  ArrowDir v_arrow(int c, int g) const { return v_[v_index(c, g)]; }

  /// Copy with one horizontal edge replaced (for constructing test cases).
  LatticeState with_h_arrow(int r, int g, ArrowDir a) const;

  /// Copy with one vertical edge replaced (for constructing test cases).
  LatticeState with_v_arrow(int c, int g, ArrowDir a) const;

  friend bool operator==(const LatticeState&, const LatticeState&) = default;

 private:
  std::size_t h_index(int r, int g) const;
  std::size_t v_index(int c, int g) const;

  LatticeSize size_;
  std::vector<ArrowDir> h_;
  std::vector<ArrowDir> v_;
};

/// Occurrence counts of every vertex kind -- split into the upper (north)
/// and lower (south) halves of the double rows -- and of every turn kind.
struct StateStats {
  std::array<std::int64_t, 6> north{};  // indexed by VertexKind
  std::array<std::int64_t, 6> south{};  // indexed by VertexKind
  std::array<std::int64_t, 3> turns{};  // indexed by TurnKind

  std::int64_t nu_north(VertexKind k) const {
    return north[static_cast<int>(k)];
  }
  std::int64_t nu_south(VertexKind k) const {
    return south[static_cast<int>(k)];
  }
  std::int64_t nu(VertexKind k) const { return nu_north(k) + nu_south(k); }
  std::int64_t nu(TurnKind k) const { return turns[static_cast<int>(k)]; }
};

/// Classifies the vertex at row r (1..2n), line c (1..m) by converting its
/// four incident arrows to orientation-relative spins (Left is positive on
/// lower rows, Right on upper rows, Up on vertical lines) and matching the
/// six-entry table. Throws IceRuleViolation for the ten inadmissible
/// patterns.
VertexKind classify_vertex(const LatticeState& state, int r, int c);

/// Classifies a turn from the gap-0 arrow pair of double row i (1..n).
/// Throws ForbiddenTurn on the (Left,Left) pair.
TurnKind turn_kind(const LatticeState& state, int doubleRow);

/// Checks every invariant (edge axes, ice rule, boundary arrows, turn
/// admissibility, creation-turn count). Violations are data, not errors.
std::vector<Violation> validate_state(const LatticeState& state);

/// All admissible states of the given size, sorted in lexicographic order
/// of their serialized text. Backtracking with ice-rule constraint
/// propagation, line by line from the right boundary. Throws SizeError for
/// invalid sizes.
std::vector<LatticeState> enumerate_states(LatticeSize size);

/// Shard `index` (0 <= index < count) of the same enumeration: the search is
/// partitioned by its first decision level (the rightmost line's vertical
/// arrows). The union over all shards equals enumerate_states up to order;
/// each shard is itself sorted.
std::vector<LatticeState> enumerate_states_shard(LatticeSize size, int index,
                                                 int count);

/// Counts every vertex kind (north/south separately) and every turn kind.
StateStats state_stats(const LatticeState& state);

/// Serialized text: n blocks, bottom double row first. Each block is one
/// turn character {+,-,*} on its own line and, when m > 0, two lines of m
/// vertex letters {A,a,B,b,C,c} (uppercase = plus kind), lower row first,
/// line c = 1 leftmost. Every line is newline-terminated.
std::string serialize_state(const LatticeState& state);

/// Inverse of serialize_state. Reconstructs every edge from the per-cell
/// spin constraints; throws ParseError (with line/column) on malformed text,
/// conflicting letters, or a turn character inconsistent with the letters.
/// Boundary-condition violations are not parse errors; validate_state
/// reports them.
LatticeState parse_state(const std::string& text);

}  // namespace icevertex

#endif  // ICEVERTEX_LATTICE_HPP

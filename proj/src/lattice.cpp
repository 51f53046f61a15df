/*
 * Copyright (c) Contributors to the icevertex project.
 * For complete copyright and license terms please see the LICENSE at the root
 * of this distribution.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "icevertex/lattice.hpp"

#include <algorithm>
#include <optional>
#include <utility>

namespace icevertex {

namespace {

// Orientation-relative spin patterns of the six vertex kinds, encoded as
// (w<<3)|(e<<2)|(s<<1)|n with bit 1 for a positive spin. The pattern is read
// in the frame of a rightward-oriented row; leftward (lower) rows use the
// same table after the quarter-turn remap applied in classify_vertex.
constexpr int vertex_pattern(VertexKind k) {
  switch (k) {
    case VertexKind::APlus:
      return 0b1111;
    case VertexKind::AMinus:
      return 0b0000;
    case VertexKind::BPlus:
      return 0b1100;
    case VertexKind::BMinus:
      return 0b0011;
    case VertexKind::CPlus:
      return 0b1001;
    case VertexKind::CMinus:
      return 0b0110;
  }
  return -1;
}

constexpr std::array<std::int8_t, 16> make_pattern_table() {
  std::array<std::int8_t, 16> t{};
  for (auto& x : t) x = -1;
  for (int k = 0; k < 6; ++k) {
    t[static_cast<std::size_t>(vertex_pattern(static_cast<VertexKind>(k)))] =
        static_cast<std::int8_t>(k);
  }
  return t;
}

constexpr std::array<std::int8_t, 16> kPatternTable = make_pattern_table();

constexpr char kVertexLetters[6] = {'A', 'a', 'B', 'b', 'C', 'c'};
constexpr char kTurnLetters[3] = {'+', '-', '*'};

std::optional<VertexKind> kind_of_letter(char ch) {
  for (int k = 0; k < 6; ++k) {
    if (kVertexLetters[k] == ch) return static_cast<VertexKind>(k);
  }
  return std::nullopt;
}

std::optional<TurnKind> kind_of_turn_letter(char ch) {
  for (int k = 0; k < 3; ++k) {
    if (kTurnLetters[k] == ch) return static_cast<TurnKind>(k);
  }
  return std::nullopt;
}

// Gap-0 arrow pair (lower, upper) of each turn kind.
constexpr std::pair<ArrowDir, ArrowDir> turn_arrows(TurnKind k) {
  switch (k) {
    case TurnKind::KPlus:
      return {ArrowDir::Left, ArrowDir::Right};
    case TurnKind::KMinus:
      return {ArrowDir::Right, ArrowDir::Left};
    case TurnKind::KCreate:
      return {ArrowDir::Right, ArrowDir::Right};
  }
  return {ArrowDir::Right, ArrowDir::Right};
}

std::string site_vertex(int r, int c) {
  return "vertex (row " + std::to_string(r) + ", line " + std::to_string(c) +
         ")";
}

}  // namespace

void require_valid_size(LatticeSize size) {
  if (size.n < 1) {
    throw SizeError("lattice needs at least one double row (n = " +
                    std::to_string(size.n) + ")");
  }
  if (size.m < 0 || size.m > size.n) {
    throw SizeError("lattice requires 0 <= m <= n (n = " +
                    std::to_string(size.n) +
                    ", m = " + std::to_string(size.m) + ")");
  }
}

char vertex_letter(VertexKind kind) {
  return kVertexLetters[static_cast<int>(kind)];
}

char turn_letter(TurnKind kind) { return kTurnLetters[static_cast<int>(kind)]; }

const char* vertex_name(VertexKind kind) {
  static const char* names[6] = {"a_plus",  "a_minus", "b_plus",
                                 "b_minus", "c_plus",  "c_minus"};
  return names[static_cast<int>(kind)];
}

const char* turn_name(TurnKind kind) {
  static const char* names[3] = {"k_plus", "k_minus", "k_create"};
  return names[static_cast<int>(kind)];
}

LatticeState::LatticeState(LatticeSize size, std::vector<ArrowDir> h,
                           std::vector<ArrowDir> v)
    : size_(size), h_(std::move(h)), v_(std::move(v)) {
  require_valid_size(size_);
  const std::size_t wantH =
      static_cast<std::size_t>(2 * size_.n) * (size_.m + 1);
  const std::size_t wantV =
      static_cast<std::size_t>(size_.m) * (2 * size_.n + 1);
  if (h_.size() != wantH || v_.size() != wantV) {
    throw SizeError("arrow grids do not match the lattice size");
  }
}

std::size_t LatticeState::h_index(int r, int g) const {
  if (r < 1 || r > 2 * size_.n || g < 0 || g > size_.m) {
    throw SizeError("horizontal edge index out of range");
  }
  return static_cast<std::size_t>(r - 1) * (size_.m + 1) + g;
}

std::size_t LatticeState::v_index(int c, int g) const {
  if (c < 1 || c > size_.m || g < 0 || g > 2 * size_.n) {
    throw SizeError("vertical edge index out of range");
  }
  return static_cast<std::size_t>(c - 1) * (2 * size_.n + 1) + g;
}

LatticeState LatticeState::with_h_arrow(int r, int g, ArrowDir a) const {
  LatticeState copy = *this;
  copy.h_[h_index(r, g)] = a;
  return copy;
}

LatticeState LatticeState::with_v_arrow(int c, int g, ArrowDir a) const {
  LatticeState copy = *this;
  copy.v_[v_index(c, g)] = a;
  return copy;
}

VertexKind classify_vertex(const LatticeState& state, int r, int c) {
  const ArrowDir W = state.h_arrow(r, c - 1);
  const ArrowDir E = state.h_arrow(r, c);
  const ArrowDir S = state.v_arrow(c, r - 1);
  const ArrowDir N = state.v_arrow(c, r);
  const bool upper = (r % 2 == 0);
  const int sW = upper ? (W == ArrowDir::Right) : (W == ArrowDir::Left);
  const int sE = upper ? (E == ArrowDir::Right) : (E == ArrowDir::Left);
  const int sS = (S == ArrowDir::Up);
  const int sN = (N == ArrowDir::Up);
  // Lower rows are read through a quarter turn: lattice (S,N,E,W) plays the
  // role of the table's (w,e,s,n).
  const int pattern = upper ? (sW << 3) | (sE << 2) | (sS << 1) | sN
                            : (sS << 3) | (sN << 2) | (sE << 1) | sW;
  const std::int8_t kind = kPatternTable[static_cast<std::size_t>(pattern)];
  if (kind < 0) {
    throw IceRuleViolation("inadmissible arrow pattern at " + site_vertex(r, c));
  }
  return static_cast<VertexKind>(kind);
}

TurnKind turn_kind(const LatticeState& state, int doubleRow) {
  if (doubleRow < 1 || doubleRow > state.size().n) {
    throw SizeError("double-row index out of range");
  }
  const ArrowDir lower = state.h_arrow(2 * doubleRow - 1, 0);
  const ArrowDir upper = state.h_arrow(2 * doubleRow, 0);
  if (lower == ArrowDir::Right && upper == ArrowDir::Right)
    return TurnKind::KCreate;
  if (lower == ArrowDir::Left && upper == ArrowDir::Right)
    return TurnKind::KPlus;
  if (lower == ArrowDir::Right && upper == ArrowDir::Left)
    return TurnKind::KMinus;
  if (lower == ArrowDir::Left && upper == ArrowDir::Left) {
    throw ForbiddenTurn("double row " + std::to_string(doubleRow) +
                        " turns with both arrows pointing Left");
  }
  throw IceRuleViolation("turn edges of double row " +
                         std::to_string(doubleRow) +
                         " carry vertical arrow values");
}

std::vector<Violation> validate_state(const LatticeState& state) {
  std::vector<Violation> out;
  const int n = state.size().n;
  const int m = state.size().m;
  bool axes_ok = true;

  for (int r = 1; r <= 2 * n; ++r) {
    for (int g = 0; g <= m; ++g) {
      const ArrowDir a = state.h_arrow(r, g);
      if (a != ArrowDir::Left && a != ArrowDir::Right) {
        out.push_back({"edge-axis", "horizontal edge (row " +
                                        std::to_string(r) + ", gap " +
                                        std::to_string(g) + ")"});
        axes_ok = false;
      }
    }
  }
  for (int c = 1; c <= m; ++c) {
    for (int g = 0; g <= 2 * n; ++g) {
      const ArrowDir a = state.v_arrow(c, g);
      if (a != ArrowDir::Up && a != ArrowDir::Down) {
        out.push_back({"edge-axis", "vertical edge (line " +
                                        std::to_string(c) + ", gap " +
                                        std::to_string(g) + ")"});
        axes_ok = false;
      }
    }
  }
  if (!axes_ok) return out;

  // Fixed boundary arrows: in at the bottom and top, out at the right.
  for (int c = 1; c <= m; ++c) {
    if (state.v_arrow(c, 0) != ArrowDir::Up) {
      out.push_back(
          {"boundary-bottom", "line " + std::to_string(c) + ", gap 0"});
    }
    if (state.v_arrow(c, 2 * n) != ArrowDir::Down) {
      out.push_back({"boundary-top", "line " + std::to_string(c) + ", gap " +
                                         std::to_string(2 * n)});
    }
  }
  for (int r = 1; r <= 2 * n; ++r) {
    if (state.h_arrow(r, m) != ArrowDir::Right) {
      out.push_back({"boundary-right", "row " + std::to_string(r) + ", gap " +
                                           std::to_string(m)});
    }
  }

  // Ice rule: exactly two of the four incident arrows point into the vertex.
  for (int r = 1; r <= 2 * n; ++r) {
    for (int c = 1; c <= m; ++c) {
      const int ins = (state.h_arrow(r, c - 1) == ArrowDir::Right) +
                      (state.h_arrow(r, c) == ArrowDir::Left) +
                      (state.v_arrow(c, r - 1) == ArrowDir::Up) +
                      (state.v_arrow(c, r) == ArrowDir::Down);
      if (ins != 2) {
        out.push_back({"ice-rule", site_vertex(r, c)});
      }
    }
  }

  // Turn admissibility and the forced number of creation turns.
  int creations = 0;
  for (int i = 1; i <= n; ++i) {
    const ArrowDir lower = state.h_arrow(2 * i - 1, 0);
    const ArrowDir upper = state.h_arrow(2 * i, 0);
    if (lower == ArrowDir::Left && upper == ArrowDir::Left) {
      out.push_back({"turn-forbidden", "double row " + std::to_string(i)});
    }
    if (lower == ArrowDir::Right && upper == ArrowDir::Right) ++creations;
  }
  if (creations != n - m) {
    out.push_back({"creation-count",
                   "state has " + std::to_string(creations) +
                       " creation turns, expected " + std::to_string(n - m)});
  }
  return out;
}

namespace {

// Depth-first enumeration over vertical lines, rightmost first. Given the
// arrows east of a line and a candidate assignment of its vertical edges,
// the ice rule determines the west arrow of every row or kills the branch,
// so the search tree branches only on the m vertical-edge columns.
class Enumerator {
 public:
  Enumerator(LatticeSize size, int shardIndex, int shardCount)
      : n_(size.n),
        m_(size.m),
        shardIndex_(shardIndex),
        shardCount_(shardCount),
        h_(static_cast<std::size_t>(2 * size.n) * (size.m + 1)),
        v_(static_cast<std::size_t>(size.m) * (2 * size.n + 1)) {
    for (int r = 1; r <= 2 * n_; ++r) h_at(r, m_) = ArrowDir::Right;
  }

  std::vector<LatticeState> run() {
    descend(m_);
    std::sort(found_.begin(), found_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<LatticeState> states;
    states.reserve(found_.size());
    for (auto& entry : found_) states.push_back(std::move(entry.second));
    return states;
  }

 private:
  ArrowDir& h_at(int r, int g) {
    return h_[static_cast<std::size_t>(r - 1) * (m_ + 1) + g];
  }
  ArrowDir& v_at(int c, int g) {
    return v_[static_cast<std::size_t>(c - 1) * (2 * n_ + 1) + g];
  }

  void descend(int c) {
    if (c == 0) {
      finish();
      return;
    }
    const int H = 2 * n_;
    const std::uint64_t configs = 1ull << (H - 1);
    for (std::uint64_t mask = 0; mask < configs; ++mask) {
      if (c == m_ && shardCount_ > 1 &&
          static_cast<int>(mask % static_cast<std::uint64_t>(shardCount_)) !=
              shardIndex_) {
        continue;
      }
      v_at(c, 0) = ArrowDir::Up;
      v_at(c, H) = ArrowDir::Down;
      for (int g = 1; g < H; ++g) {
        v_at(c, g) = ((mask >> (g - 1)) & 1) ? ArrowDir::Up : ArrowDir::Down;
      }
      bool ok = true;
      for (int r = 1; r <= H; ++r) {
        const int ins = (h_at(r, c) == ArrowDir::Left) +
                        (v_at(c, r - 1) == ArrowDir::Up) +
                        (v_at(c, r) == ArrowDir::Down);
        if (ins == 1) {
          h_at(r, c - 1) = ArrowDir::Right;
        } else if (ins == 2) {
          h_at(r, c - 1) = ArrowDir::Left;
        } else {
          ok = false;
          break;
        }
      }
      if (ok) descend(c - 1);
    }
  }

  void finish() {
    for (int i = 1; i <= n_; ++i) {
      if (h_at(2 * i - 1, 0) == ArrowDir::Left &&
          h_at(2 * i, 0) == ArrowDir::Left) {
        return;  // inadmissible turn pair
      }
    }
    LatticeState state({n_, m_}, h_, v_);
    std::string key = serialize_state(state);
    found_.emplace_back(std::move(key), std::move(state));
  }

  int n_;
  int m_;
  int shardIndex_;
  int shardCount_;
  std::vector<ArrowDir> h_;
  std::vector<ArrowDir> v_;
  std::vector<std::pair<std::string, LatticeState>> found_;
};

}  // namespace

std::vector<LatticeState> enumerate_states(LatticeSize size) {
  require_valid_size(size);
  return Enumerator(size, 0, 1).run();
}

std::vector<LatticeState> enumerate_states_shard(LatticeSize size, int index,
                                                 int count) {
  require_valid_size(size);
  if (count < 1 || index < 0 || index >= count) {
    throw SizeError("shard index out of range");
  }
  if (size.m == 0) {
    // No decision levels: the unique state belongs to shard 0.
    return index == 0 ? enumerate_states(size) : std::vector<LatticeState>{};
  }
  return Enumerator(size, index, count).run();
}

StateStats state_stats(const LatticeState& state) {
  StateStats stats;
  const int n = state.size().n;
  const int m = state.size().m;
  for (int r = 1; r <= 2 * n; ++r) {
    auto& half = (r % 2 == 0) ? stats.north : stats.south;
    for (int c = 1; c <= m; ++c) {
      ++half[static_cast<int>(classify_vertex(state, r, c))];
    }
  }
  for (int i = 1; i <= n; ++i) {
    ++stats.turns[static_cast<int>(turn_kind(state, i))];
  }
  return stats;
}

std::string serialize_state(const LatticeState& state) {
  const int n = state.size().n;
  const int m = state.size().m;
  std::string out;
  out.reserve(static_cast<std::size_t>(n) * (2 * m + 3));
  for (int i = 1; i <= n; ++i) {
    out += turn_letter(turn_kind(state, i));
    out += '\n';
    if (m > 0) {
      for (int r = 2 * i - 1; r <= 2 * i; ++r) {
        for (int c = 1; c <= m; ++c) {
          out += vertex_letter(classify_vertex(state, r, c));
        }
        out += '\n';
      }
    }
  }
  return out;
}

namespace {

// Edge grids under reconstruction: every assignment remembers whether the
// edge was already pinned, so conflicting vertex letters surface as parse
// errors at the letter that exposed the conflict.
class StateBuilder {
 public:
  StateBuilder(int n, int m)
      : n_(n),
        m_(m),
        h_(static_cast<std::size_t>(2 * n) * (m + 1)),
        hSet_(h_.size(), false),
        v_(static_cast<std::size_t>(m) * (2 * n + 1)),
        vSet_(v_.size(), false) {}

  void set_h(int r, int g, ArrowDir a, int line, int col) {
    assign(h_, hSet_, static_cast<std::size_t>(r - 1) * (m_ + 1) + g, a, line,
           col);
  }
  void set_v(int c, int g, ArrowDir a, int line, int col) {
    assign(v_, vSet_, static_cast<std::size_t>(c - 1) * (2 * n_ + 1) + g, a,
           line, col);
  }
  ArrowDir get_h(int r, int g) const {
    return h_[static_cast<std::size_t>(r - 1) * (m_ + 1) + g];
  }

  LatticeState build() { return LatticeState({n_, m_}, h_, v_); }

 private:
  void assign(std::vector<ArrowDir>& grid, std::vector<bool>& set,
              std::size_t idx, ArrowDir a, int line, int col) {
    if (set[idx] && grid[idx] != a) {
      throw ParseError("vertex letters assign conflicting arrows to one edge",
                       line, col);
    }
    grid[idx] = a;
    set[idx] = true;
  }

  int n_;
  int m_;
  std::vector<ArrowDir> h_;
  std::vector<bool> hSet_;
  std::vector<ArrowDir> v_;
  std::vector<bool> vSet_;
};

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string current;
  for (char ch : text) {
    if (ch == '\n') {
      lines.push_back(current);
      current.clear();
    } else {
      current += ch;
    }
  }
  if (!current.empty()) lines.push_back(current);
  return lines;
}

// Places the four edges of the vertex at (r, c) according to its kind.
void place_vertex(StateBuilder& b, int r, int c, VertexKind kind, int line,
                  int col) {
  const int pattern = vertex_pattern(kind);
  const bool upper = (r % 2 == 0);
  int sW, sE, sS, sN;
  if (upper) {
    sW = (pattern >> 3) & 1;
    sE = (pattern >> 2) & 1;
    sS = (pattern >> 1) & 1;
    sN = pattern & 1;
  } else {
    sS = (pattern >> 3) & 1;
    sN = (pattern >> 2) & 1;
    sE = (pattern >> 1) & 1;
    sW = pattern & 1;
  }
  const ArrowDir W = upper ? (sW ? ArrowDir::Right : ArrowDir::Left)
                           : (sW ? ArrowDir::Left : ArrowDir::Right);
  const ArrowDir E = upper ? (sE ? ArrowDir::Right : ArrowDir::Left)
                           : (sE ? ArrowDir::Left : ArrowDir::Right);
  b.set_h(r, c - 1, W, line, col);
  b.set_h(r, c, E, line, col);
  b.set_v(c, r - 1, sS ? ArrowDir::Up : ArrowDir::Down, line, col);
  b.set_v(c, r, sN ? ArrowDir::Up : ArrowDir::Down, line, col);
}

}  // namespace

LatticeState parse_state(const std::string& text) {
  const std::vector<std::string> lines = split_lines(text);
  if (lines.empty()) throw ParseError("empty input", 1, 1);

  const auto is_turn_line = [](const std::string& s) {
    return s.size() == 1 && kind_of_turn_letter(s[0]).has_value();
  };

  // A text whose lines are all single turn characters is an m = 0 state; the
  // turn and vertex alphabets are disjoint, so this is unambiguous.
  if (std::all_of(lines.begin(), lines.end(), is_turn_line)) {
    const int n = static_cast<int>(lines.size());
    StateBuilder builder(n, 0);
    for (int i = 1; i <= n; ++i) {
      const TurnKind turn = *kind_of_turn_letter(lines[i - 1][0]);
      const auto [lower, upper] = turn_arrows(turn);
      builder.set_h(2 * i - 1, 0, lower, i, 1);
      builder.set_h(2 * i, 0, upper, i, 1);
    }
    return builder.build();
  }

  // Block mode: one turn line plus two vertex-letter lines per double row.
  struct Block {
    TurnKind turn;
    int turnLine;
    std::array<const std::string*, 2> rows;
    std::array<int, 2> rowLines;
  };
  std::vector<Block> blocks;
  int m = -1;
  std::size_t t = 0;
  while (t < lines.size()) {
    const std::string& turnLine = lines[t];
    if (turnLine.empty() || !kind_of_turn_letter(turnLine[0]).has_value()) {
      throw ParseError("expected a turn character (+, - or *)",
                       static_cast<int>(t + 1), 1);
    }
    if (turnLine.size() != 1) {
      throw ParseError("turn line must be a single character",
                       static_cast<int>(t + 1), 2);
    }
    Block block;
    block.turn = *kind_of_turn_letter(turnLine[0]);
    block.turnLine = static_cast<int>(t + 1);
    for (int half = 0; half < 2; ++half) {
      const std::size_t idx = t + 1 + half;
      if (idx >= lines.size()) {
        throw ParseError("missing vertex row",
                         static_cast<int>(lines.size() + 1), 1);
      }
      const std::string& row = lines[idx];
      for (std::size_t col = 0; col < row.size(); ++col) {
        if (!kind_of_letter(row[col]).has_value()) {
          throw ParseError(std::string("unknown vertex letter '") + row[col] +
                               "'",
                           static_cast<int>(idx + 1),
                           static_cast<int>(col + 1));
        }
      }
      if (row.empty()) {
        throw ParseError("empty vertex row", static_cast<int>(idx + 1), 1);
      }
      if (m < 0) {
        m = static_cast<int>(row.size());
      } else if (static_cast<int>(row.size()) != m) {
        throw ParseError("vertex rows have inconsistent lengths",
                         static_cast<int>(idx + 1),
                         static_cast<int>(row.size()) + 1);
      }
      block.rows[half] = &row;
      block.rowLines[half] = static_cast<int>(idx + 1);
    }
    blocks.push_back(block);
    t += 3;
  }

  const int n = static_cast<int>(blocks.size());
  if (m > n) {
    throw SizeError("serialized state has more vertical lines than double "
                    "rows (m > n)");
  }
  StateBuilder builder(n, m);
  for (int i = 1; i <= n; ++i) {
    const Block& block = blocks[i - 1];
    for (int half = 0; half < 2; ++half) {
      const int r = 2 * i - 1 + half;
      const std::string& row = *block.rows[half];
      for (int c = 1; c <= m; ++c) {
        place_vertex(builder, r, c, *kind_of_letter(row[c - 1]),
                     block.rowLines[half], c);
      }
    }
    const auto [lower, upper] = turn_arrows(block.turn);
    if (builder.get_h(2 * i - 1, 0) != lower ||
        builder.get_h(2 * i, 0) != upper) {
      throw ParseError("turn character is inconsistent with the vertex "
                       "letters of its double row",
                       block.turnLine, 1);
    }
  }
  return builder.build();
}

}  // namespace icevertex

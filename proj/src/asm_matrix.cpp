/*
 * Copyright (c) Contributors to the icevertex project.
 * For complete copyright and license terms please see the LICENSE at the root
 * of this distribution.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "icevertex/asm_matrix.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "icevertex/errors.hpp"

namespace icevertex {

namespace {

std::string row_site(int r) { return "row " + std::to_string(r); }
std::string column_site(int c) { return "column " + std::to_string(c); }
std::string double_row_site(int i) {
  return "double row " + std::to_string(i);
}

/// Leftmost nonzero entry of matrix row r, or 0 if the row is all zero.
int leftmost_nonzero(const AsmMatrix& mat, int r) {
  for (int c = 1; c <= mat.cols(); ++c) {
    if (mat.at(r, c) != 0) return mat.at(r, c);
  }
  return 0;
}

/// All admissible single-column patterns for 2n rows, top-down entries:
/// nonzeros alternate in sign, the first and last are +1 (so the column
/// sums to 1). Ordered by the entry choice 0 < +1 < -1 at each row, top
/// row most significant.
std::vector<std::vector<std::int8_t>> column_patterns(int rowCount) {
  std::vector<std::vector<std::int8_t>> out;
  std::vector<std::int8_t> work(static_cast<std::size_t>(rowCount), 0);
  // lastSign: 0 before any nonzero, else the last placed nonzero.
  auto rec = [&](auto&& self, int row, int lastSign) -> void {
    if (row == rowCount) {
      if (lastSign == 1) out.push_back(work);
      return;
    }
    const auto slot = static_cast<std::size_t>(row);
    work[slot] = 0;
    self(self, row + 1, lastSign);
    if (lastSign != 1) {  // first nonzero, or after a -1
      work[slot] = 1;
      self(self, row + 1, 1);
    } else {
      work[slot] = -1;
      self(self, row + 1, -1);
    }
    work[slot] = 0;
  };
  rec(rec, 0, 0);
  return out;
}

}  // namespace

std::vector<Violation> validate_matrix(const AsmMatrix& mat) {
  std::vector<Violation> out;
  const int rows = mat.rows();
  const int cols = mat.cols();
  if (mat.entries.size() !=
      static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    out.push_back({"entry grid size", "whole matrix"});
    return out;
  }
  for (std::size_t i = 0; i < mat.entries.size(); ++i) {
    if (mat.entries[i] < -1 || mat.entries[i] > 1) {
      out.push_back({"entry range",
                     "entry " + std::to_string(i + 1) + " (row-major)"});
      return out;
    }
  }

  for (int c = 1; c <= cols; ++c) {
    int last = 0;
    int first = 0;
    int sum = 0;
    for (int r = 1; r <= rows; ++r) {
      const int e = mat.at(r, c);
      if (e == 0) continue;
      sum += e;
      if (first == 0) first = e;
      if (last == e) {
        out.push_back({"column sign alternation", column_site(c)});
      }
      last = e;
    }
    if (first != 1 || last != 1) {
      out.push_back({"column starts and ends with +1", column_site(c)});
    }
    if (sum != 1) {
      out.push_back({"column sum is 1", column_site(c)});
    }
  }

  for (int r = 1; r <= rows; ++r) {
    int last = 0;
    for (int c = 1; c <= cols; ++c) {
      const int e = mat.at(r, c);
      if (e == 0) continue;
      if (last == e) {
        out.push_back({"row sign alternation", row_site(r)});
      }
      last = e;
    }
    if (last == -1) {
      out.push_back({"row rightmost nonzero is +1", row_site(r)});
    }
  }

  for (int i = 1; i <= mat.size.n; ++i) {
    int sum = 0;
    for (int c = 1; c <= cols; ++c) {
      sum += mat.at(2 * i - 1, c) + mat.at(2 * i, c);
    }
    if (sum != 0 && sum != 1) {
      out.push_back({"double row sum is 0 or 1", double_row_site(i)});
    }
    if (leftmost_nonzero(mat, 2 * i - 1) == 1 &&
        leftmost_nonzero(mat, 2 * i) == 1) {
      out.push_back(
          {"double row rows not both leftmost +1", double_row_site(i)});
    }
  }
  return out;
}

AsmMatrix state_to_matrix(const LatticeState& state) {
  const int n = state.size().n;
  const int m = state.size().m;
  AsmMatrix mat;
  mat.size = state.size();
  mat.entries.assign(
      static_cast<std::size_t>(2 * n) * static_cast<std::size_t>(m), 0);
  for (int r = 1; r <= 2 * n; ++r) {          // lattice row, bottom-up
    const bool lower = (r % 2 == 1);
    const int matRow = 2 * n + 1 - r;         // matrix row, top-down
    for (int c = 1; c <= m; ++c) {
      const VertexKind kind = classify_vertex(state, r, c);
      std::int8_t entry = 0;
      if (kind == VertexKind::CPlus) entry = lower ? 1 : -1;
      if (kind == VertexKind::CMinus) entry = lower ? -1 : 1;
      mat.entries[static_cast<std::size_t>(matRow - 1) *
                      static_cast<std::size_t>(m) +
                  static_cast<std::size_t>(c - 1)] = entry;
    }
  }
  return mat;
}

LatticeState matrix_to_state(const AsmMatrix& mat) {
  require_valid_size(mat.size);
  const int n = mat.size.n;
  const int m = mat.size.m;
  if (mat.entries.size() !=
      static_cast<std::size_t>(2 * n) * static_cast<std::size_t>(m)) {
    throw InconsistentMatrix("entry grid does not match the declared size");
  }
  // Entry of the LATTICE cell (r, c), r bottom-up.
  const auto entry = [&](int r, int c) { return mat.at(2 * n + 1 - r, c); };

  std::vector<ArrowDir> v(static_cast<std::size_t>(m) *
                          static_cast<std::size_t>(2 * n + 1));
  for (int c = 1; c <= m; ++c) {
    ArrowDir dir = ArrowDir::Up;  // bottom boundary
    for (int g = 0; g <= 2 * n; ++g) {
      if (g > 0) {
        const int e = entry(g, c);
        if (e == 1) {
          if (dir != ArrowDir::Up) {
            throw InconsistentMatrix("+1 above a downward arrow in " +
                                     column_site(c));
          }
          dir = ArrowDir::Down;
        } else if (e == -1) {
          if (dir != ArrowDir::Down) {
            throw InconsistentMatrix("-1 above an upward arrow in " +
                                     column_site(c));
          }
          dir = ArrowDir::Up;
        }
      }
      v[static_cast<std::size_t>(c - 1) * static_cast<std::size_t>(2 * n + 1) +
        static_cast<std::size_t>(g)] = dir;
    }
    if (dir != ArrowDir::Down) {
      throw InconsistentMatrix("column does not close on the top boundary in " +
                               column_site(c));
    }
  }

  std::vector<ArrowDir> h(static_cast<std::size_t>(2 * n) *
                          static_cast<std::size_t>(m + 1));
  for (int r = 1; r <= 2 * n; ++r) {
    ArrowDir dir = ArrowDir::Right;  // right boundary
    for (int g = m; g >= 0; --g) {
      h[static_cast<std::size_t>(r - 1) * static_cast<std::size_t>(m + 1) +
        static_cast<std::size_t>(g)] = dir;
      if (g > 0) {
        const int e = entry(r, g);
        if (e == 1) {
          if (dir != ArrowDir::Right) {
            throw InconsistentMatrix("+1 east of a leftward arrow in " +
                                     row_site(2 * n + 1 - r));
          }
          dir = ArrowDir::Left;
        } else if (e == -1) {
          if (dir != ArrowDir::Left) {
            throw InconsistentMatrix("-1 east of a rightward arrow in " +
                                     row_site(2 * n + 1 - r));
          }
          dir = ArrowDir::Right;
        }
      }
    }
  }

  for (int i = 1; i <= n; ++i) {
    const ArrowDir lowerStub =
        h[static_cast<std::size_t>(2 * i - 2) * static_cast<std::size_t>(m + 1)];
    const ArrowDir upperStub =
        h[static_cast<std::size_t>(2 * i - 1) * static_cast<std::size_t>(m + 1)];
    if (lowerStub == ArrowDir::Left && upperStub == ArrowDir::Left) {
      throw InconsistentMatrix("double row emits two leftward turn arrows in " +
                               double_row_site(n + 1 - i));
    }
  }
  return LatticeState(mat.size, std::move(h), std::move(v));
}

TurnKind matrix_turn_kind(const AsmMatrix& mat, int doubleRow) {
  if (doubleRow < 1 || doubleRow > mat.size.n) {
    throw DomainError("double row index out of range");
  }
  // Matrix row 2i-1 is the upper lattice row of the pair, row 2i the lower.
  if (leftmost_nonzero(mat, 2 * doubleRow) == 1) return TurnKind::KPlus;
  if (leftmost_nonzero(mat, 2 * doubleRow - 1) == 1) return TurnKind::KMinus;
  return TurnKind::KCreate;
}

std::vector<AsmMatrix> enumerate_matrices(LatticeSize size) {
  require_valid_size(size);
  const int n = size.n;
  const int m = size.m;
  const int rows = 2 * n;
  std::vector<AsmMatrix> out;
  if (m == 0) {
    AsmMatrix empty;
    empty.size = size;
    out.push_back(std::move(empty));
    return out;
  }
  if (n > 16) {
    throw SizeError("matrix enumeration supports n <= 16");
  }

  const auto patterns = column_patterns(rows);
  // Bitmask per pattern: which rows hold +1 / -1 (bit r-1 for matrix row r).
  struct Masks {
    std::uint32_t pos = 0;
    std::uint32_t neg = 0;
  };
  std::vector<Masks> masks(patterns.size());
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    for (int r = 0; r < rows; ++r) {
      if (patterns[p][static_cast<std::size_t>(r)] == 1) {
        masks[p].pos |= 1u << r;
      } else if (patterns[p][static_cast<std::size_t>(r)] == -1) {
        masks[p].neg |= 1u << r;
      }
    }
  }
  // Selects the lower bit of every double-row pair (rows 1,2 are bits 0,1).
  std::uint32_t pairSelect = 0;
  for (int i = 0; i < n; ++i) pairSelect |= 1u << (2 * i);

  std::vector<std::size_t> chosen(static_cast<std::size_t>(m), 0);
  struct Level {
    std::uint32_t lastPos = 0;   // rows whose last nonzero so far is +1
    std::uint32_t lastNeg = 0;   // ... is -1
    std::uint32_t leftPos = 0;   // rows whose first nonzero is +1
    std::uint32_t seen = 0;      // rows with any nonzero so far
  };

  auto rec = [&](auto&& self, int col, const Level& lv) -> void {
    if (col == m) {
      if (lv.lastNeg != 0) return;  // some row's rightmost nonzero is -1
      AsmMatrix mat;
      mat.size = size;
      mat.entries.resize(static_cast<std::size_t>(rows) *
                         static_cast<std::size_t>(m));
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < m; ++c) {
          mat.entries[static_cast<std::size_t>(r) *
                          static_cast<std::size_t>(m) +
                      static_cast<std::size_t>(c)] =
              patterns[chosen[static_cast<std::size_t>(c)]]
                      [static_cast<std::size_t>(r)];
        }
      }
      out.push_back(std::move(mat));
      return;
    }
    for (std::size_t p = 0; p < patterns.size(); ++p) {
      const Masks& mk = masks[p];
      if ((mk.pos & lv.lastPos) != 0 || (mk.neg & lv.lastNeg) != 0) {
        continue;  // row alternation broken
      }
      Level next;
      const std::uint32_t touched = mk.pos | mk.neg;
      next.seen = lv.seen | touched;
      next.lastPos = (lv.lastPos & ~touched) | mk.pos;
      next.lastNeg = (lv.lastNeg & ~touched) | mk.neg;
      next.leftPos = lv.leftPos | (mk.pos & ~lv.seen);
      // Reject a double row whose rows BOTH start with +1.
      if ((next.leftPos & (next.leftPos >> 1) & pairSelect) != 0) continue;
      chosen[static_cast<std::size_t>(col)] = p;
      self(self, col + 1, next);
    }
  };
  rec(rec, 0, Level{});
  return out;
}

std::string serialize_matrix(const AsmMatrix& mat) {
  std::string out;
  for (int r = 1; r <= mat.rows(); ++r) {
    for (int c = 1; c <= mat.cols(); ++c) {
      if (c > 1) out += ' ';
      out += std::to_string(static_cast<int>(mat.at(r, c)));
    }
    out += '\n';
  }
  return out;
}

AsmMatrix parse_matrix(const std::string& text) {
  std::vector<std::string> lines;
  std::string current;
  for (const char ch : text) {
    if (ch == '\n') {
      lines.push_back(current);
      current.clear();
    } else {
      current += ch;
    }
  }
  if (!current.empty()) lines.push_back(current);

  if (lines.empty() || lines.size() % 2 != 0) {
    throw ParseError("matrix text needs a positive, even number of rows",
                     static_cast<int>(lines.size()) + 1, 1);
  }
  std::vector<std::vector<std::int8_t>> grid;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int lineNo = static_cast<int>(i) + 1;
    std::vector<std::int8_t> row;
    std::string token;
    int tokenStart = 1;
    const auto flush = [&]() {
      if (token.empty()) return;
      if (token == "1") {
        row.push_back(1);
      } else if (token == "0") {
        row.push_back(0);
      } else if (token == "-1") {
        row.push_back(-1);
      } else {
        throw ParseError("matrix entry must be -1, 0 or 1, got \"" + token +
                             "\"",
                         lineNo, tokenStart);
      }
      token.clear();
    };
    for (std::size_t pos = 0; pos < lines[i].size(); ++pos) {
      const char ch = lines[i][pos];
      if (ch == ' ' || ch == '\t' || ch == '\r') {
        flush();
      } else {
        if (token.empty()) tokenStart = static_cast<int>(pos) + 1;
        token += ch;
      }
    }
    flush();
    if (i > 0 && row.size() != grid.front().size()) {
      throw ParseError("matrix rows have unequal lengths", lineNo, 1);
    }
    grid.push_back(std::move(row));
  }

  AsmMatrix mat;
  mat.size.n = static_cast<int>(lines.size()) / 2;
  mat.size.m = static_cast<int>(grid.front().size());
  require_valid_size(mat.size);
  mat.entries.reserve(grid.size() * grid.front().size());
  for (const auto& row : grid) {
    mat.entries.insert(mat.entries.end(), row.begin(), row.end());
  }
  return mat;
}

}  // namespace icevertex

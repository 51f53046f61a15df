/*
 * Copyright (c) Contributors to the icevertex project.
 * For complete copyright and license terms please see the LICENSE at the root
 * of this distribution.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef ICEVERTEX_ERRORS_HPP
#define ICEVERTEX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace icevertex {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An arrow pattern at a vertex is not one of the six admissible ones.
class IceRuleViolation : public Error {
 public:
  using Error::Error;
};

/// A double row's boundary pair is (Left, Left), which the triangular
/// boundary matrix forbids.
class ForbiddenTurn : public Error {
 public:
  using Error::Error;
};

/// Lattice dimensions violate m <= n (or are otherwise out of range).
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input; carries 1-based line/column of the offense.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// A weight or formula denominator vanished; the message names the factor.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// A matrix handed to the LU decomposition is exactly singular.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// An exact rational count failed to reduce to a non-negative integer.
class NonIntegerResult : public Error {
 public:
  using Error::Error;
};

/// An argument is outside the operation's mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature could not reach the requested tolerance.
class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

/// State reconstruction from a matrix reached a contradiction (this means a
/// validator bug, not a user error).
class InconsistentMatrix : public Error {
 public:
  using Error::Error;
};

}  // namespace icevertex

#endif  // ICEVERTEX_ERRORS_HPP

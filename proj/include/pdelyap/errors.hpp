#pragma once

#include <stdexcept>
#include <string>

namespace pdelyap {

/// Operand shapes do not agree (matrix sizes, vector lengths, block partitions).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A definite integral whose bound mentions the integration variable.
class BoundError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Boundary matrix has row rank below 2n.
class RankDeficient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// B2 = B [I 0; I (b-a)I; 0 I; 0 I] is singular, so x(a), x_s(a) cannot be
/// recovered from x_ss.
class SingularB2 : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The derivative-side basis cannot represent every monomial of the
/// derivative kernel.
class DegreeTooLow : public std::runtime_error {
 public:
  DegreeTooLow(const std::string& what, int required)
      : std::runtime_error(what), required_degree_(required) {}
  int required_degree() const { return required_degree_; }

 private:
  int required_degree_;
};

/// Problem-file or expression syntax error, with 1-based position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(what + " at line " + std::to_string(line) + ", column " +
                           std::to_string(column)),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace pdelyap

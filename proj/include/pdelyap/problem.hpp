#pragma once

// Problem files: a JSON document holding the system data as coefficient
// expressions, an optional scalar parameter and solver options.
//
// Expression grammar (exact rational arithmetic):
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*          divisor must be a nonzero constant
//   unary  := ('+' | '-') unary | power
//   power  := atom ('^' integer)?
//   atom   := number | 's' | parameter | '(' expr ')'
//   number := digits ['.' digits] [('e' | 'E') ['+' | '-'] digits], or '.' digits
// Decimals are exact: "0.2" is 1/5.

#include <optional>
#include <string>
#include <vector>

#include "pdelyap/sdp.hpp"

namespace pdelyap {

/// The parameter is carried as this variable inside parsed expressions.
inline constexpr Var kParamVar = Var::nu;

/// Polynomial in s (and the parameter, when `param` is non-empty).
/// Throws ParseError with a 1-based column (line 1).
RPoly parse_expression(const std::string& text, const std::string& param = "");
/// Constant-valued expression.
Rational parse_rational(const std::string& text);
/// Canonical text that parse_expression maps back to p.
std::string format_expression(const RPoly& p, const std::string& param = "");

enum class BisectDirection { max, min };  // certify the largest / smallest value

struct ParameterSpec {
  std::string name;
  std::optional<Rational> value;  // used by `run` when no value is given
  std::optional<Rational> lo, hi, resolution;
  BisectDirection direction = BisectDirection::max;
  bool operator==(const ParameterSpec&) const = default;
};

struct BenchmarkSpec {
  std::string mode = "run";  // "run" or "bisect"
  std::optional<double> reference;
  bool reciprocal = false;   // report 1/value
  std::string label;         // name of the reported quantity
  bool operator==(const BenchmarkSpec&) const = default;
};

struct ProblemFile {
  std::string name;
  std::string description;
  std::size_t n = 1;
  Rational a = 0, b = 1;
  RMatPoly A0, A1, A2;  // entries may contain kParamVar
  RatMatrix B;
  std::optional<ParameterSpec> parameter;
  int deg = 1;
  std::optional<int> fallback_deg;
  int deriv_deg = -1;
  std::optional<Rational> eps;
  GConfig g = GConfig::sum;
  double tol = 1e-8;
  std::optional<BenchmarkSpec> benchmark;

  bool operator==(const ProblemFile&) const = default;
};

/// Throws ParseError (syntax, with position) or DimensionError.
ProblemFile parse_problem(const std::string& text);
std::string serialize_problem(const ProblemFile& f);
ProblemFile load_problem(const std::string& path);

/// Substitute the parameter value; throws std::invalid_argument when the
/// file has a parameter and no value is available.
PDESystem instantiate(const ProblemFile& f, const std::optional<Rational>& value);

}  // namespace pdelyap

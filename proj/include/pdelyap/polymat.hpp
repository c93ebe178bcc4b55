#pragma once

// Exact multivariate polynomials over the five kernel variables
// {s, theta, eta, zeta, nu} and dense matrices of them.
//
// Coefficients are either exact rationals or affine linear forms in a set of
// decision variables (used to push a symbolic Gram matrix through the kernel
// transforms). Products are only defined when at least one side is rational,
// so everything stays affine in the decision variables.

#include <gmpxx.h>

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "pdelyap/errors.hpp"

namespace pdelyap {

using Rational = mpq_class;

enum class Var : std::uint8_t { s = 0, theta = 1, eta = 2, zeta = 3, nu = 4 };
inline constexpr int kNumVars = 5;

const char* var_name(Var v);

/// Exponent vector. Ordered graded-lexicographically (total degree first,
/// then exponent of s, theta, ... ascending).
struct Monomial {
  std::array<std::uint8_t, kNumVars> exp{};

  static Monomial of(Var v, int power = 1) {
    Monomial m;
    m.exp[static_cast<int>(v)] = static_cast<std::uint8_t>(power);
    return m;
  }
  int degree() const {
    int d = 0;
    for (auto e : exp) d += e;
    return d;
  }
  int operator[](Var v) const { return exp[static_cast<int>(v)]; }
  bool operator==(const Monomial&) const = default;
  std::strong_ordering operator<=>(const Monomial& o) const {
    if (auto c = degree() <=> o.degree(); c != 0) return c;
    return exp <=> o.exp;
  }
  Monomial operator*(const Monomial& o) const {
    Monomial r;
    for (int i = 0; i < kNumVars; ++i) r.exp[i] = static_cast<std::uint8_t>(exp[i] + o.exp[i]);
    return r;
  }
  std::string str() const;
};

/// Affine form c0 + sum_k c_k * p_k over decision variables p_k.
class LinForm {
 public:
  using Entry = std::pair<std::uint32_t, Rational>;

  LinForm() = default;
  explicit LinForm(Rational constant) : constant_(std::move(constant)) {}
  static LinForm variable(std::uint32_t index, const Rational& coef = 1);

  const Rational& constant() const { return constant_; }
  const std::vector<Entry>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty() && sgn(constant_) == 0; }
  /// Coefficient of decision variable `index` (zero if absent).
  Rational coef(std::uint32_t index) const;

  LinForm& operator+=(const LinForm& o);
  LinForm& operator-=(const LinForm& o);
  LinForm& operator*=(const Rational& r);
  LinForm operator-() const;
  bool operator==(const LinForm& o) const {
    return constant_ == o.constant_ && terms_ == o.terms_;
  }

  /// Evaluate at a numeric assignment of the decision variables.
  Rational evaluate(const std::vector<Rational>& values) const;
  double evaluate(const std::vector<double>& values) const;

 private:
  Rational constant_{0};
  std::vector<Entry> terms_;  // sorted by index, no zero coefficients
};

inline bool coef_is_zero(const Rational& r) { return sgn(r) == 0; }
inline bool coef_is_zero(const LinForm& f) { return f.is_zero(); }

template <class A, class B>
struct Product;
template <>
struct Product<Rational, Rational> {
  using type = Rational;
};
template <>
struct Product<LinForm, Rational> {
  using type = LinForm;
};
template <>
struct Product<Rational, LinForm> {
  using type = LinForm;
};
template <class A, class B>
using ProductT = typename Product<A, B>::type;

inline Rational coef_mul(const Rational& a, const Rational& b) { return a * b; }
inline LinForm coef_mul(const LinForm& a, const Rational& b) {
  LinForm r = a;
  r *= b;
  return r;
}
inline LinForm coef_mul(const Rational& a, const LinForm& b) { return coef_mul(b, a); }

template <class C>
class Poly;
using RPoly = Poly<Rational>;

/// Simultaneous substitution map: an entry per variable, empty = keep.
using Bindings = std::array<std::optional<RPoly>, kNumVars>;

template <class C>
class Poly {
 public:
  struct Term {
    Monomial mono;
    C coef;
  };

  Poly() = default;
  explicit Poly(C constant) {
    if (!coef_is_zero(constant)) terms_.push_back({Monomial{}, std::move(constant)});
  }
  static Poly variable(Var v) { return monomial(Monomial::of(v), C(Rational(1))); }
  static Poly monomial(const Monomial& m, C coef) {
    Poly p;
    if (!coef_is_zero(coef)) p.terms_.push_back({m, std::move(coef)});
    return p;
  }
  /// Build from an arbitrary term list: sorts, merges like terms, drops zeros.
  static Poly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  int degree() const { return terms_.empty() ? -1 : terms_.back().mono.degree(); }
  int degree(Var v) const;
  /// Bit i set iff variable i occurs with positive exponent.
  unsigned var_mask() const;
  bool depends_on(Var v) const { return (var_mask() >> static_cast<int>(v)) & 1u; }
  /// Coefficient of monomial m (zero if absent).
  C coef(const Monomial& m) const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Rational& r);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Rational& r) { return a *= r; }
  friend Poly operator*(const Rational& r, Poly a) { return a *= r; }
  bool operator==(const Poly& o) const;

 private:
  std::vector<Term> terms_;  // strictly increasing monomials, nonzero coefficients
};

template <class A, class B>
Poly<ProductT<A, B>> operator*(const Poly<A>& p, const Poly<B>& q);

/// Simultaneous substitution of the bound variables.
template <class C>
Poly<C> substitute(const Poly<C>& p, const Bindings& bindings);
template <class C>
Poly<C> substitute(const Poly<C>& p, std::initializer_list<std::pair<Var, RPoly>> bindings);

/// Relabel variables: variable i becomes to[i]. Cheaper than substitute.
template <class C>
Poly<C> rename(const Poly<C>& p, const std::array<Var, kNumVars>& to);
template <class C>
Poly<C> rename(const Poly<C>& p, std::initializer_list<std::pair<Var, Var>> pairs);

/// Exact definite integral over `v` from `lo` to `hi`; bounds must not contain v.
template <class C>
Poly<C> integrate(const Poly<C>& p, Var v, const RPoly& lo, const RPoly& hi);

template <class C>
Poly<C> derivative(const Poly<C>& p, Var v);

Rational evaluate(const RPoly& p, const std::array<Rational, kNumVars>& point);
double evaluate(const RPoly& p, const std::array<double, kNumVars>& point);

inline RPoly constant(const Rational& c) { return RPoly(c); }
inline RPoly var(Var v) { return RPoly::variable(v); }

template <class C>
std::string to_string(const Poly<C>& p);
template <class C>
std::ostream& operator<<(std::ostream& os, const Poly<C>& p) {
  return os << to_string(p);
}

/// Dense rows x cols matrix of polynomials. Shape fixed at construction.
template <class C>
class MatPoly {
 public:
  MatPoly() = default;
  MatPoly(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static MatPoly identity(std::size_t n);
  /// Constant matrix from row-major rational entries.
  static MatPoly from_rows(const std::vector<std::vector<Rational>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Poly<C>& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Poly<C>& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<Poly<C>>& entries() const { return data_; }
  bool is_zero() const;
  int degree() const;
  unsigned var_mask() const;

  MatPoly& operator+=(const MatPoly& o);
  MatPoly& operator-=(const MatPoly& o);
  MatPoly& operator*=(const Rational& r);
  MatPoly operator-() const;
  friend MatPoly operator+(MatPoly a, const MatPoly& b) { return a += b; }
  friend MatPoly operator-(MatPoly a, const MatPoly& b) { return a -= b; }
  friend MatPoly operator*(MatPoly a, const Rational& r) { return a *= r; }
  friend MatPoly operator*(const Rational& r, MatPoly a) { return a *= r; }
  bool operator==(const MatPoly& o) const = default;

  MatPoly transpose() const;
  template <class F>
  MatPoly map(F&& f) const {
    MatPoly r(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = f(data_[k]);
    return r;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Poly<C>> data_;
};

using RMatPoly = MatPoly<Rational>;

template <class A, class B>
MatPoly<ProductT<A, B>> operator*(const MatPoly<A>& p, const MatPoly<B>& q);
/// Every entry multiplied by the scalar polynomial q.
template <class C>
MatPoly<C> operator*(const MatPoly<C>& p, const RPoly& q);

template <class C>
MatPoly<C> substitute(const MatPoly<C>& p, const Bindings& bindings);
template <class C>
MatPoly<C> substitute(const MatPoly<C>& p, std::initializer_list<std::pair<Var, RPoly>> bindings);
template <class C>
MatPoly<C> rename(const MatPoly<C>& p, std::initializer_list<std::pair<Var, Var>> pairs);
template <class C>
MatPoly<C> integrate(const MatPoly<C>& p, Var v, const RPoly& lo, const RPoly& hi);
template <class C>
MatPoly<C> derivative(const MatPoly<C>& p, Var v);

/// N(theta, s)^T for a kernel N(s, theta).
template <class C>
MatPoly<C> transpose_swap(const MatPoly<C>& n);

/// One stored coefficient of a matrix polynomial.
struct CoefEntry {
  std::size_t row;
  std::size_t col;
  Monomial mono;
  Rational value;
  bool operator==(const CoefEntry&) const = default;
};

/// Sparse enumeration in (row, col, graded-lex monomial) order.
std::vector<CoefEntry> coefficients(const RMatPoly& p);
RMatPoly from_coefficients(std::size_t rows, std::size_t cols, const std::vector<CoefEntry>& list);

/// Entrywise evaluation to doubles.
std::vector<std::vector<double>> evaluate(const RMatPoly& p, const std::array<double, kNumVars>& point);

extern template class Poly<Rational>;
extern template class Poly<LinForm>;
extern template class MatPoly<Rational>;
extern template class MatPoly<LinForm>;

}  // namespace pdelyap

#include "pdelyap/detail/polymat_impl.hpp"

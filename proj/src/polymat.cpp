#include "pdelyap/polymat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pdelyap {

const char* var_name(Var v) {
  switch (v) {
    case Var::s:
      return "s";
    case Var::theta:
      return "theta";
    case Var::eta:
      return "eta";
    case Var::zeta:
      return "zeta";
    case Var::nu:
      return "nu";
  }
  return "?";
}

std::string Monomial::str() const {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < kNumVars; ++i) {
    if (exp[i] == 0) continue;
    if (!first) os << "*";
    first = false;
    os << var_name(static_cast<Var>(i));
    if (exp[i] > 1) os << "^" << static_cast<int>(exp[i]);
  }
  return first ? "1" : os.str();
}

LinForm LinForm::variable(std::uint32_t index, const Rational& coef) {
  LinForm f;
  if (sgn(coef) != 0) f.terms_.push_back({index, coef});
  return f;
}

Rational LinForm::coef(std::uint32_t index) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), index,
                             [](const Entry& e, std::uint32_t i) { return e.first < i; });
  if (it != terms_.end() && it->first == index) return it->second;
  return 0;
}

namespace {

template <bool Subtract>
std::vector<LinForm::Entry> merge(const std::vector<LinForm::Entry>& a,
                                  const std::vector<LinForm::Entry>& b) {
  std::vector<LinForm::Entry> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
      if constexpr (Subtract) out.back().second = -out.back().second;
    } else {
      Rational c = Subtract ? Rational(a[i].second - b[j].second) : Rational(a[i].second + b[j].second);
      if (sgn(c) != 0) out.emplace_back(a[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

LinForm& LinForm::operator+=(const LinForm& o) {
  constant_ += o.constant_;
  if (!o.terms_.empty()) terms_ = terms_.empty() ? o.terms_ : merge<false>(terms_, o.terms_);
  return *this;
}

LinForm& LinForm::operator-=(const LinForm& o) {
  constant_ -= o.constant_;
  if (!o.terms_.empty()) terms_ = merge<true>(terms_, o.terms_);
  return *this;
}

LinForm& LinForm::operator*=(const Rational& r) {
  if (sgn(r) == 0) {
    constant_ = 0;
    terms_.clear();
    return *this;
  }
  constant_ *= r;
  for (auto& e : terms_) e.second *= r;
  return *this;
}

LinForm LinForm::operator-() const {
  LinForm r = *this;
  r *= Rational(-1);
  return r;
}

Rational LinForm::evaluate(const std::vector<Rational>& values) const {
  Rational acc = constant_;
  for (const auto& [i, c] : terms_) acc += c * values.at(i);
  return acc;
}

double LinForm::evaluate(const std::vector<double>& values) const {
  double acc = constant_.get_d();
  for (const auto& [i, c] : terms_) acc += c.get_d() * values.at(i);
  return acc;
}

namespace detail {
std::string coef_str(const LinForm& f) {
  std::ostringstream os;
  os << f.constant().get_str();
  for (const auto& [i, c] : f.terms()) os << " + " << c.get_str() << "*p" << i;
  return os.str();
}
}  // namespace detail

Rational evaluate(const RPoly& p, const std::array<Rational, kNumVars>& point) {
  Rational acc = 0;
  for (const auto& t : p.terms()) {
    Rational term = t.coef;
    for (int v = 0; v < kNumVars; ++v)
      for (int k = 0; k < t.mono.exp[v]; ++k) term *= point[v];
    acc += term;
  }
  return acc;
}

double evaluate(const RPoly& p, const std::array<double, kNumVars>& point) {
  double acc = 0.0;
  for (const auto& t : p.terms()) {
    double term = t.coef.get_d();
    for (int v = 0; v < kNumVars; ++v) term *= std::pow(point[v], t.mono.exp[v]);
    acc += term;
  }
  return acc;
}

std::vector<CoefEntry> coefficients(const RMatPoly& p) {
  std::vector<CoefEntry> out;
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j)
      for (const auto& t : p(i, j).terms()) out.push_back({i, j, t.mono, t.coef});
  return out;
}

RMatPoly from_coefficients(std::size_t rows, std::size_t cols, const std::vector<CoefEntry>& list) {
  RMatPoly m(rows, cols);
  std::vector<std::vector<RPoly::Term>> acc(rows * cols);
  for (const auto& e : list) {
    if (e.row >= rows || e.col >= cols) throw DimensionError("coefficient index out of range");
    acc[e.row * cols + e.col].push_back({e.mono, e.value});
  }
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = RPoly::from_terms(std::move(acc[i * cols + j]));
  return m;
}

std::vector<std::vector<double>> evaluate(const RMatPoly& p, const std::array<double, kNumVars>& point) {
  std::vector<std::vector<double>> out(p.rows(), std::vector<double>(p.cols()));
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j) out[i][j] = evaluate(p(i, j), point);
  return out;
}

template class Poly<Rational>;
template class Poly<LinForm>;
template class MatPoly<Rational>;
template class MatPoly<LinForm>;

}  // namespace pdelyap

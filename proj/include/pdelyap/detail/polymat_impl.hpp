#pragma once

// Template definitions for polymat.hpp.

#include <algorithm>
#include <sstream>

namespace pdelyap {

template <class C>
Poly<C> Poly<C>::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.mono < b.mono; });
  Poly p;
  p.terms_.reserve(terms.size());
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coef += t.coef;
    } else {
      if (!p.terms_.empty() && coef_is_zero(p.terms_.back().coef)) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && coef_is_zero(p.terms_.back().coef)) p.terms_.pop_back();
  return p;
}

template <class C>
int Poly<C>::degree(Var v) const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, t.mono[v]);
  return d;
}

template <class C>
unsigned Poly<C>::var_mask() const {
  unsigned m = 0;
  for (const auto& t : terms_)
    for (int i = 0; i < kNumVars; ++i)
      if (t.mono.exp[i] != 0) m |= 1u << i;
  return m;
}

template <class C>
C Poly<C>::coef(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& x) { return t.mono < x; });
  if (it != terms_.end() && it->mono == m) return it->coef;
  return C(Rational(0));
}

template <class C>
Poly<C> Poly<C>::operator-() const {
  Poly r = *this;
  for (auto& t : r.terms_) t.coef *= Rational(-1);
  return r;
}

namespace detail {

template <class C, bool Subtract>
std::vector<typename Poly<C>::Term> merge_terms(const std::vector<typename Poly<C>::Term>& a,
                                                const std::vector<typename Poly<C>::Term>& b) {
  std::vector<typename Poly<C>::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].mono < b[j].mono)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].mono < a[i].mono) {
      out.push_back(b[j++]);
      if constexpr (Subtract) out.back().coef *= Rational(-1);
    } else {
      C c = a[i].coef;
      if constexpr (Subtract) {
        c -= b[j].coef;
      } else {
        c += b[j].coef;
      }
      if (!coef_is_zero(c)) out.push_back({a[i].mono, std::move(c)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace detail

template <class C>
Poly<C>& Poly<C>::operator+=(const Poly& o) {
  if (o.terms_.empty()) return *this;
  if (terms_.empty()) return *this = o;
  terms_ = detail::merge_terms<C, false>(terms_, o.terms_);
  return *this;
}

template <class C>
Poly<C>& Poly<C>::operator-=(const Poly& o) {
  if (o.terms_.empty()) return *this;
  terms_ = detail::merge_terms<C, true>(terms_, o.terms_);
  return *this;
}

template <class C>
Poly<C>& Poly<C>::operator*=(const Rational& r) {
  if (sgn(r) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coef *= r;
  return *this;
}

template <class C>
bool Poly<C>::operator==(const Poly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t k = 0; k < terms_.size(); ++k)
    if (!(terms_[k].mono == o.terms_[k].mono) || !(terms_[k].coef == o.terms_[k].coef)) return false;
  return true;
}

template <class A, class B>
Poly<ProductT<A, B>> operator*(const Poly<A>& p, const Poly<B>& q) {
  using R = ProductT<A, B>;
  std::vector<typename Poly<R>::Term> out;
  out.reserve(p.size() * q.size());
  for (const auto& a : p.terms())
    for (const auto& b : q.terms()) out.push_back({a.mono * b.mono, coef_mul(a.coef, b.coef)});
  return Poly<R>::from_terms(std::move(out));
}

namespace detail {

// Cached integer powers of a rational polynomial.
class PowerCache {
 public:
  explicit PowerCache(const RPoly* base) : base_(base) {}
  const RPoly& pow(int k) {
    if (powers_.empty()) powers_.push_back(RPoly(Rational(1)));
    while (static_cast<int>(powers_.size()) <= k) powers_.push_back(powers_.back() * *base_);
    return powers_[k];
  }

 private:
  const RPoly* base_;
  std::vector<RPoly> powers_;
};

enum class BindKind { keep, constant, relabel, general };

}  // namespace detail

template <class C>
Poly<C> substitute(const Poly<C>& p, const Bindings& bindings) {
  using Term = typename Poly<C>::Term;
  std::array<detail::BindKind, kNumVars> kind{};
  std::array<Rational, kNumVars> cval;
  std::array<int, kNumVars> target{};
  std::vector<detail::PowerCache> caches;
  caches.reserve(kNumVars);
  std::array<int, kNumVars> cache_idx{};
  for (int v = 0; v < kNumVars; ++v) {
    cache_idx[v] = -1;
    if (!bindings[v]) {
      kind[v] = detail::BindKind::keep;
      continue;
    }
    const RPoly& q = *bindings[v];
    if (q.degree() <= 0) {
      kind[v] = detail::BindKind::constant;
      cval[v] = q.is_zero() ? Rational(0) : q.terms()[0].coef;
    } else if (q.size() == 1 && q.degree() == 1 && q.terms()[0].coef == 1) {
      kind[v] = detail::BindKind::relabel;
      const auto& m = q.terms()[0].mono;
      for (int w = 0; w < kNumVars; ++w)
        if (m.exp[w] != 0) target[v] = w;
    } else {
      kind[v] = detail::BindKind::general;
      cache_idx[v] = static_cast<int>(caches.size());
      caches.emplace_back(&q);
    }
  }

  std::vector<Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    Monomial m;
    Rational scale(1);
    RPoly general(Rational(1));
    bool has_general = false;
    bool vanished = false;
    for (int v = 0; v < kNumVars; ++v) {
      const int e = t.mono.exp[v];
      if (e == 0) continue;
      switch (kind[v]) {
        case detail::BindKind::keep:
          m.exp[v] = static_cast<std::uint8_t>(m.exp[v] + e);
          break;
        case detail::BindKind::constant: {
          if (sgn(cval[v]) == 0) {
            vanished = true;
            break;
          }
          Rational c;
          mpz_pow_ui(c.get_num_mpz_t(), cval[v].get_num_mpz_t(), e);
          mpz_pow_ui(c.get_den_mpz_t(), cval[v].get_den_mpz_t(), e);
          scale *= c;
          break;
        }
        case detail::BindKind::relabel:
          m.exp[target[v]] = static_cast<std::uint8_t>(m.exp[target[v]] + e);
          break;
        case detail::BindKind::general:
          general = general * caches[cache_idx[v]].pow(e);
          has_general = true;
          break;
      }
      if (vanished) break;
    }
    if (vanished) continue;
    C coef = t.coef;
    if (scale != 1) coef *= scale;
    if (!has_general) {
      out.push_back({m, std::move(coef)});
    } else {
      for (const auto& g : general.terms()) out.push_back({m * g.mono, coef_mul(coef, g.coef)});
    }
  }
  return Poly<C>::from_terms(std::move(out));
}

template <class C>
Poly<C> substitute(const Poly<C>& p, std::initializer_list<std::pair<Var, RPoly>> bindings) {
  Bindings b;
  for (const auto& [v, q] : bindings) b[static_cast<int>(v)] = q;
  return substitute(p, b);
}

template <class C>
Poly<C> rename(const Poly<C>& p, const std::array<Var, kNumVars>& to) {
  using Term = typename Poly<C>::Term;
  std::vector<Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    Monomial m;
    for (int v = 0; v < kNumVars; ++v) {
      const int w = static_cast<int>(to[v]);
      m.exp[w] = static_cast<std::uint8_t>(m.exp[w] + t.mono.exp[v]);
    }
    out.push_back({m, t.coef});
  }
  return Poly<C>::from_terms(std::move(out));
}

template <class C>
Poly<C> rename(const Poly<C>& p, std::initializer_list<std::pair<Var, Var>> pairs) {
  std::array<Var, kNumVars> to{Var::s, Var::theta, Var::eta, Var::zeta, Var::nu};
  for (const auto& [from, dest] : pairs) to[static_cast<int>(from)] = dest;
  return rename(p, to);
}

template <class C>
Poly<C> integrate(const Poly<C>& p, Var v, const RPoly& lo, const RPoly& hi) {
  if (lo.depends_on(v) || hi.depends_on(v))
    throw BoundError(std::string("integration bound depends on the integration variable ") +
                     var_name(v));
  using Term = typename Poly<C>::Term;
  const int vi = static_cast<int>(v);
  std::vector<Term> anti;
  anti.reserve(p.size());
  for (const auto& t : p.terms()) {
    Term a = t;
    const int e = a.mono.exp[vi] + 1;
    a.mono.exp[vi] = static_cast<std::uint8_t>(e);
    a.coef *= Rational(1, e);
    anti.push_back(std::move(a));
  }
  const Poly<C> f = Poly<C>::from_terms(std::move(anti));
  Bindings bh, bl;
  bh[vi] = hi;
  bl[vi] = lo;
  return substitute(f, bh) - substitute(f, bl);
}

template <class C>
Poly<C> derivative(const Poly<C>& p, Var v) {
  using Term = typename Poly<C>::Term;
  const int vi = static_cast<int>(v);
  std::vector<Term> out;
  for (const auto& t : p.terms()) {
    const int e = t.mono.exp[vi];
    if (e == 0) continue;
    Term d = t;
    d.mono.exp[vi] = static_cast<std::uint8_t>(e - 1);
    d.coef *= Rational(e);
    out.push_back(std::move(d));
  }
  return Poly<C>::from_terms(std::move(out));
}

namespace detail {
inline std::string coef_str(const Rational& r) { return r.get_str(); }
std::string coef_str(const LinForm& f);
}  // namespace detail

template <class C>
std::string to_string(const Poly<C>& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : p.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << detail::coef_str(t.coef) << ")";
    if (t.mono.degree() > 0) os << "*" << t.mono.str();
  }
  return os.str();
}

// ---- MatPoly ----

template <class C>
MatPoly<C> MatPoly<C>::identity(std::size_t n) {
  MatPoly m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Poly<C>(C(Rational(1)));
  return m;
}

template <class C>
MatPoly<C> MatPoly<C>::from_rows(const std::vector<std::vector<Rational>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows[0].size() : 0;
  MatPoly m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw DimensionError("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = Poly<C>(C(rows[i][j]));
  }
  return m;
}

template <class C>
bool MatPoly<C>::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Poly<C>& p) { return p.is_zero(); });
}

template <class C>
int MatPoly<C>::degree() const {
  int d = -1;
  for (const auto& p : data_) d = std::max(d, p.degree());
  return d;
}

template <class C>
unsigned MatPoly<C>::var_mask() const {
  unsigned m = 0;
  for (const auto& p : data_) m |= p.var_mask();
  return m;
}

template <class C>
MatPoly<C>& MatPoly<C>::operator+=(const MatPoly& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix sum: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

template <class C>
MatPoly<C>& MatPoly<C>::operator-=(const MatPoly& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix difference: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

template <class C>
MatPoly<C>& MatPoly<C>::operator*=(const Rational& r) {
  for (auto& p : data_) p *= r;
  return *this;
}

template <class C>
MatPoly<C> MatPoly<C>::operator-() const {
  MatPoly r = *this;
  for (auto& p : r.data_) p = -p;
  return r;
}

template <class C>
MatPoly<C> MatPoly<C>::transpose() const {
  MatPoly t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

template <class A, class B>
MatPoly<ProductT<A, B>> operator*(const MatPoly<A>& p, const MatPoly<B>& q) {
  if (p.cols() != q.rows()) throw DimensionError("matrix product: inner dimensions differ");
  using R = ProductT<A, B>;
  MatPoly<R> r(p.rows(), q.cols());
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < q.cols(); ++j) {
      std::vector<typename Poly<R>::Term> acc;
      for (std::size_t k = 0; k < p.cols(); ++k) {
        const auto& a = p(i, k);
        const auto& b = q(k, j);
        if (a.is_zero() || b.is_zero()) continue;
        for (const auto& ta : a.terms())
          for (const auto& tb : b.terms()) acc.push_back({ta.mono * tb.mono, coef_mul(ta.coef, tb.coef)});
      }
      r(i, j) = Poly<R>::from_terms(std::move(acc));
    }
  return r;
}

template <class C>
MatPoly<C> operator*(const MatPoly<C>& p, const RPoly& q) {
  return p.map([&](const Poly<C>& e) { return e * q; });
}

template <class C>
MatPoly<C> substitute(const MatPoly<C>& p, const Bindings& bindings) {
  return p.map([&](const Poly<C>& e) { return substitute(e, bindings); });
}

template <class C>
MatPoly<C> substitute(const MatPoly<C>& p, std::initializer_list<std::pair<Var, RPoly>> bindings) {
  Bindings b;
  for (const auto& [v, q] : bindings) b[static_cast<int>(v)] = q;
  return substitute(p, b);
}

template <class C>
MatPoly<C> rename(const MatPoly<C>& p, std::initializer_list<std::pair<Var, Var>> pairs) {
  std::array<Var, kNumVars> to{Var::s, Var::theta, Var::eta, Var::zeta, Var::nu};
  for (const auto& [from, dest] : pairs) to[static_cast<int>(from)] = dest;
  return p.map([&](const Poly<C>& e) { return rename(e, to); });
}

template <class C>
MatPoly<C> integrate(const MatPoly<C>& p, Var v, const RPoly& lo, const RPoly& hi) {
  return p.map([&](const Poly<C>& e) { return integrate(e, v, lo, hi); });
}

template <class C>
MatPoly<C> derivative(const MatPoly<C>& p, Var v) {
  return p.map([&](const Poly<C>& e) { return derivative(e, v); });
}

template <class C>
MatPoly<C> transpose_swap(const MatPoly<C>& n) {
  return rename(n, {{Var::s, Var::theta}, {Var::theta, Var::s}}).transpose();
}

}  // namespace pdelyap

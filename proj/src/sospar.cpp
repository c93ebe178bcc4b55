#include "pdelyap/sospar.hpp"

#include <algorithm>
#include <stdexcept>

namespace pdelyap {

std::vector<std::pair<int, int>> z2_exponents(int d2) {
  std::vector<Monomial> monos;
  for (int i = 0; i <= d2; ++i)
    for (int j = 0; i + j <= d2; ++j) {
      Monomial m;
      m.exp[static_cast<int>(Var::s)] = static_cast<std::uint8_t>(i);
      m.exp[static_cast<int>(Var::theta)] = static_cast<std::uint8_t>(j);
      monos.push_back(m);
    }
  std::sort(monos.begin(), monos.end());
  std::vector<std::pair<int, int>> out;
  for (const auto& m : monos) out.emplace_back(m[Var::s], m[Var::theta]);
  return out;
}

RPoly weight_poly(GChoice g, const Rational& a, const Rational& b) {
  if (g == GChoice::one) return constant(1);
  return (var(Var::s) - constant(a)) * (constant(b) - var(Var::s));
}

namespace {

using Basis = std::vector<RPoly>;

Basis z1_in(int d1, Var x) {
  Basis out;
  for (int k = 0; k <= d1; ++k) out.push_back(RPoly::monomial(Monomial::of(x, k), 1));
  return out;
}

// x^i y^j over the exponent list; with `zero_at`, only j >= 1 and y^j - c^j.
Basis z2_in(const std::vector<std::pair<int, int>>& ex, Var x, Var y, const Rational* zero_at) {
  Basis out;
  for (const auto& [i, j] : ex) {
    if (zero_at && j == 0) continue;
    Monomial m = Monomial::of(x, i);
    m.exp[static_cast<int>(y)] += static_cast<std::uint8_t>(j);
    RPoly p = RPoly::monomial(m, 1);
    if (zero_at) {
      Rational c = 1;
      for (int k = 0; k < j; ++k) c *= *zero_at;
      p -= RPoly::monomial(Monomial::of(x, i), c);
    }
    out.push_back(std::move(p));
  }
  return out;
}

template <class C, class Entry>
Poly<C> gram(const Basis& left, const Basis& right, std::size_t roff, std::size_t coff, std::size_t i,
             std::size_t j, std::size_t n, const Entry& entry) {
  std::vector<typename Poly<C>::Term> terms;
  terms.reserve(left.size() * right.size());
  for (std::size_t k = 0; k < left.size(); ++k)
    for (std::size_t l = 0; l < right.size(); ++l) {
      C c = entry(roff + k * n + i, coff + l * n + j);
      if (coef_is_zero(c)) continue;
      for (const auto& a : left[k].terms())
        for (const auto& b : right[l].terms()) terms.push_back({a.mono * b.mono, coef_mul(c, a.coef * b.coef)});
    }
  return Poly<C>::from_terms(std::move(terms));
}

template <class C, class Entry>
KernelOp<C> build(const PhiBasis& bs, const Rational& a, const Rational& b, const Entry& entry, bool need_n2) {
  const std::size_t n = bs.n;
  const std::size_t o1 = 0, o2 = n * bs.z1(), o3 = n * (bs.z1() + bs.z_lower());
  const auto ex = z2_exponents(bs.d2);
  const Rational* za = bs.lower_zero_at_a ? &a : nullptr;
  const Rational* zb = bs.upper_zero_at_b ? &b : nullptr;
  const Basis z1s = z1_in(bs.d1, Var::s), z1t = z1_in(bs.d1, Var::theta);
  // lower-integral factor (block 2) and upper-integral factor (block 3)
  const Basis lo_st = z2_in(ex, Var::s, Var::theta, za), lo_ts = z2_in(ex, Var::theta, Var::s, za);
  const Basis lo_ns = z2_in(ex, Var::nu, Var::s, za), lo_nt = z2_in(ex, Var::nu, Var::theta, za);
  const Basis up_st = z2_in(ex, Var::s, Var::theta, zb), up_ts = z2_in(ex, Var::theta, Var::s, zb);
  const Basis up_ns = z2_in(ex, Var::nu, Var::s, zb), up_nt = z2_in(ex, Var::nu, Var::theta, zb);

  const RPoly g = weight_poly(bs.g, a, b);
  const RPoly gs = g, gt = rename(g, {{Var::s, Var::theta}}), gn = rename(g, {{Var::s, Var::nu}});
  const RPoly lo = constant(a), hi = constant(b), s = var(Var::s), th = var(Var::theta);

  KernelOp<C> K = KernelOp<C>::zero(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (bs.z1() > 0) {
        K.M(i, j) = gram<C>(z1s, z1s, o1, o1, i, j, n, entry) * gs;
        K.N1(i, j) += gram<C>(z1s, lo_st, o1, o2, i, j, n, entry) * gs;
        K.N1(i, j) += gram<C>(up_ts, z1t, o3, o1, i, j, n, entry) * gt;
        if (need_n2) {
          K.N2(i, j) += gram<C>(z1s, up_st, o1, o3, i, j, n, entry) * gs;
          K.N2(i, j) += gram<C>(lo_ts, z1t, o2, o1, i, j, n, entry) * gt;
        }
      }
      const Poly<C> p22 = gram<C>(lo_ns, lo_nt, o2, o2, i, j, n, entry) * gn;
      const Poly<C> p33 = gram<C>(up_ns, up_nt, o3, o3, i, j, n, entry) * gn;
      K.N1(i, j) += integrate(p33, Var::nu, lo, th);
      K.N1(i, j) += integrate(gram<C>(up_ns, lo_nt, o3, o2, i, j, n, entry) * gn, Var::nu, th, s);
      K.N1(i, j) += integrate(p22, Var::nu, s, hi);
      if (!need_n2) continue;
      K.N2(i, j) += integrate(p33, Var::nu, lo, s);
      K.N2(i, j) += integrate(gram<C>(lo_ns, up_nt, o2, o3, i, j, n, entry) * gn, Var::nu, s, th);
      K.N2(i, j) += integrate(p22, Var::nu, th, hi);
    }
  return K;
}

}  // namespace

RKernelOp phi_kernels(const PhiParam& p, const Rational& a, const Rational& b) {
  const std::size_t m = p.basis.size();
  if (p.basis.n == 0 || p.basis.d2 < 0) throw DimensionError("invalid basis degrees");
  if (p.P.size() != m) throw DimensionError("P does not match the basis partition");
  for (std::size_t i = 0; i < m; ++i) {
    if (p.P[i].size() != m) throw DimensionError("P does not match the basis partition");
    for (std::size_t j = 0; j < i; ++j)
      if (p.P[i][j] != p.P[j][i]) throw std::invalid_argument("P must be symmetric");
  }
  return build<Rational>(
      p.basis, a, b, [&](std::size_t r, std::size_t c) { return p.P[r][c]; }, true);
}

KernelOp<LinForm> phi_linear_map(const PhiBasis& basis, const Rational& a, const Rational& b,
                                 std::uint32_t offset, bool with_n2) {
  if (basis.n == 0 || basis.d2 < 0) throw DimensionError("invalid basis degrees");
  const std::size_t m = basis.size();
  return build<LinForm>(
      basis, a, b,
      [&](std::size_t r, std::size_t c) {
        return LinForm::variable(offset + static_cast<std::uint32_t>(sym_index(r, c, m)));
      },
      with_n2);
}

RMatPoly evaluate_linear(const MatPoly<LinForm>& p, const std::vector<Rational>& values) {
  RMatPoly out(p.rows(), p.cols());
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j) {
      std::vector<RPoly::Term> terms;
      for (const auto& t : p(i, j).terms()) terms.push_back({t.mono, t.coef.evaluate(values)});
      out(i, j) = RPoly::from_terms(std::move(terms));
    }
  return out;
}

}  // namespace pdelyap

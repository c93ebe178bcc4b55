#include "pdelyap/boundary.hpp"

#include <utility>

namespace pdelyap {

RatMatrix rat_zeros(std::size_t rows, std::size_t cols) {
  return RatMatrix(rows, std::vector<Rational>(cols, Rational(0)));
}

RatMatrix rat_identity(std::size_t n) {
  RatMatrix m = rat_zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

RatMatrix rat_mul(const RatMatrix& a, const RatMatrix& b) {
  const std::size_t inner = a.empty() ? 0 : a[0].size();
  if (inner != b.size()) throw DimensionError("rational matrix product: inner dimensions differ");
  const std::size_t cols = b.empty() ? 0 : b[0].size();
  RatMatrix c = rat_zeros(a.size(), cols);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (sgn(a[i][k]) == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

std::size_t exact_rank(RatMatrix m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && sgn(m[piv][c]) == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (sgn(m[r][c]) == 0) continue;
      const Rational f = m[r][c] / m[rank][c];
      for (std::size_t j = c; j < cols; ++j) m[r][j] -= f * m[rank][j];
    }
    ++rank;
  }
  return rank;
}

RatMatrix exact_inverse(RatMatrix m) {
  const std::size_t n = m.size();
  RatMatrix inv = rat_identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && sgn(m[piv][c]) == 0) ++piv;
    if (piv == n) return {};
    std::swap(m[piv], m[c]);
    std::swap(inv[piv], inv[c]);
    const Rational d = m[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      m[c][j] /= d;
      inv[c][j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || sgn(m[r][c]) == 0) continue;
      const Rational f = m[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        m[r][j] -= f * m[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

std::vector<Rational> exact_solve(const RatMatrix& a, const std::vector<Rational>& rhs) {
  const RatMatrix inv = exact_inverse(a);
  if (inv.empty()) throw SingularB2("singular system");
  std::vector<Rational> x(a.size(), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) x[i] += inv[i][j] * rhs[j];
  return x;
}

RMatPoly BoundaryKernels::ba_at(Var first, Var second) const {
  if (first == Var::s && second == Var::eta) return Ba;
  return rename(Ba, {{Var::s, first}, {Var::eta, second}});
}

RMatPoly BoundaryKernels::bb_at(Var v) const {
  if (v == Var::eta) return Bb;
  return rename(Bb, {{Var::eta, v}});
}

BoundaryKernels build_kernels(const BoundaryMatrix& B, std::size_t n, const Rational& a,
                              const Rational& b) {
  if (n == 0 || B.rows() != 2 * n || B.cols() != 4 * n)
    throw DimensionError("boundary matrix must be 2n x 4n");
  for (const auto& row : B.entries)
    if (row.size() != 4 * n) throw DimensionError("boundary matrix rows are ragged");
  if (exact_rank(B.entries) < 2 * n) throw RankDeficient("boundary matrix row rank is below 2n");

  // [x(a); x(b); x_s(a); x_s(b)] = L [x(a); x_s(a)] + R [int (b-eta) x_ss; int x_ss]
  RatMatrix L = rat_zeros(4 * n, 2 * n);
  RatMatrix R = rat_zeros(4 * n, 2 * n);
  const Rational len = b - a;
  for (std::size_t i = 0; i < n; ++i) {
    L[i][i] = 1;
    L[n + i][i] = 1;
    L[n + i][n + i] = len;
    L[2 * n + i][n + i] = 1;
    L[3 * n + i][n + i] = 1;
    R[n + i][i] = 1;
    R[3 * n + i][n + i] = 1;
  }

  BoundaryKernels k;
  k.n = n;
  k.a = a;
  k.b = b;
  k.B2 = rat_mul(B.entries, L);
  const RatMatrix inv = exact_inverse(k.B2);
  if (inv.empty())
    throw SingularB2("B2 is singular: the boundary conditions do not determine x(a) and x_s(a)");
  k.B3 = rat_mul(inv, rat_mul(B.entries, R));
  for (auto& row : k.B3)
    for (auto& v : row) v = -v;

  // [B4(s) B5(s)] = [I (s-a)I] B3,  [B6 B7] = [0 I] B3
  const RPoly s_minus_a = var(Var::s) - constant(a);
  k.B4 = RMatPoly(n, n);
  k.B5 = RMatPoly(n, n);
  k.B6 = RMatPoly(n, n);
  k.B7 = RMatPoly(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      k.B4(i, j) = constant(k.B3[i][j]) + s_minus_a * k.B3[n + i][j];
      k.B5(i, j) = constant(k.B3[i][n + j]) + s_minus_a * k.B3[n + i][n + j];
      k.B6(i, j) = constant(k.B3[n + i][j]);
      k.B7(i, j) = constant(k.B3[n + i][n + j]);
    }
  const RPoly b_minus_eta = constant(b) - var(Var::eta);
  k.Ba = k.B4 * b_minus_eta + k.B5;
  k.Bb = k.B6 * b_minus_eta + k.B7;
  return k;
}

namespace {

void check_xss(const BoundaryKernels& k, const std::vector<RPoly>& xss) {
  if (xss.size() != k.n) throw DimensionError("x_ss has the wrong number of components");
  for (const auto& p : xss)
    if (p.var_mask() & ~1u) throw DimensionError("x_ss must be a polynomial in s only");
}

RMatPoly column_in(const std::vector<RPoly>& xss, Var v) {
  RMatPoly c(xss.size(), 1);
  for (std::size_t i = 0; i < xss.size(); ++i) c(i, 0) = rename(xss[i], {{Var::s, v}});
  return c;
}

std::vector<RPoly> as_vector(const RMatPoly& c) {
  std::vector<RPoly> out(c.rows());
  for (std::size_t i = 0; i < c.rows(); ++i) out[i] = c(i, 0);
  return out;
}

}  // namespace

std::vector<RPoly> reconstruct_x(const BoundaryKernels& k, const std::vector<RPoly>& xss) {
  check_xss(k, xss);
  const RMatPoly xe = column_in(xss, Var::eta);
  const RPoly s = var(Var::s), eta = var(Var::eta);
  RMatPoly x = integrate(k.Ba * xe, Var::eta, constant(k.a), constant(k.b));
  x += integrate(xe * (s - eta), Var::eta, constant(k.a), s);
  return as_vector(x);
}

std::vector<RPoly> reconstruct_xs(const BoundaryKernels& k, const std::vector<RPoly>& xss) {
  check_xss(k, xss);
  const RMatPoly xe = column_in(xss, Var::eta);
  RMatPoly xs = integrate(k.Bb * xe, Var::eta, constant(k.a), constant(k.b));
  xs += integrate(xe, Var::eta, constant(k.a), var(Var::s));
  return as_vector(xs);
}

std::vector<Rational> boundary_vector(const std::vector<RPoly>& x, const Rational& a, const Rational& b) {
  const std::size_t n = x.size();
  std::vector<Rational> v(4 * n, Rational(0));
  auto at = [](const RPoly& p, const Rational& s) {
    return evaluate(p, std::array<Rational, kNumVars>{s, 0, 0, 0, 0});
  };
  for (std::size_t i = 0; i < n; ++i) {
    const RPoly d = derivative(x[i], Var::s);
    v[i] = at(x[i], a);
    v[n + i] = at(x[i], b);
    v[2 * n + i] = at(d, a);
    v[3 * n + i] = at(d, b);
  }
  return v;
}

std::vector<Rational> boundary_residual(const BoundaryMatrix& B, const std::vector<RPoly>& x,
                                        const Rational& a, const Rational& b) {
  const std::vector<Rational> v = boundary_vector(x, a, b);
  if (B.cols() != v.size()) throw DimensionError("boundary matrix does not match state dimension");
  std::vector<Rational> r(B.rows(), Rational(0));
  for (std::size_t i = 0; i < B.rows(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) r[i] += B.entries[i][j] * v[j];
  return r;
}

std::vector<RPoly> project_admissible(const BoundaryMatrix& B, const BoundaryKernels& k,
                                      const std::vector<RPoly>& x) {
  if (x.size() != k.n) throw DimensionError("state has the wrong number of components");
  // B (bv(x) + L [c0; c1]) = 0  =>  B2 [c0; c1] = -B bv(x)
  std::vector<Rational> rhs = boundary_residual(B, x, k.a, k.b);
  for (auto& v : rhs) v = -v;
  const std::vector<Rational> c = exact_solve(k.B2, rhs);
  std::vector<RPoly> out = x;
  const RPoly s_minus_a = var(Var::s) - constant(k.a);
  for (std::size_t i = 0; i < k.n; ++i) out[i] += constant(c[i]) + s_minus_a * c[k.n + i];
  return out;
}

}  // namespace pdelyap

#pragma once

// Boundary kernels: recover x and x_s from x_ss under linear boundary
// conditions B [x(a); x(b); x_s(a); x_s(b)] = 0,
//
//   x(s)   = int_a^b Ba(s,eta) x_ss(eta) deta + int_a^s (s-eta) x_ss(eta) deta
//   x_s(s) = int_a^b Bb(eta)   x_ss(eta) deta + int_a^s x_ss(eta) deta.

#include <cstddef>
#include <vector>

#include "pdelyap/polymat.hpp"

namespace pdelyap {

using RatMatrix = std::vector<std::vector<Rational>>;

RatMatrix rat_zeros(std::size_t rows, std::size_t cols);
RatMatrix rat_identity(std::size_t n);
RatMatrix rat_mul(const RatMatrix& a, const RatMatrix& b);
std::size_t exact_rank(RatMatrix m);
/// Exact inverse by Gauss-Jordan; empty result when singular.
RatMatrix exact_inverse(RatMatrix m);
/// Solve A x = rhs exactly for square nonsingular A.
std::vector<Rational> exact_solve(const RatMatrix& a, const std::vector<Rational>& rhs);

/// 2n x 4n matrix acting on [x(a); x(b); x_s(a); x_s(b)].
struct BoundaryMatrix {
  RatMatrix entries;

  std::size_t rows() const { return entries.size(); }
  std::size_t cols() const { return entries.empty() ? 0 : entries[0].size(); }
};

struct BoundaryKernels {
  std::size_t n = 0;
  Rational a;
  Rational b;
  RatMatrix B2;   // 2n x 2n
  RatMatrix B3;   // 2n x 2n, [x(a); x_s(a)] = B3 [int (b-eta) x_ss; int x_ss]
  RMatPoly B4;    // n x n, in s
  RMatPoly B5;    // n x n, in s
  RMatPoly B6;    // n x n constant
  RMatPoly B7;    // n x n constant
  RMatPoly Ba;    // n x n, in (s, eta): B4(s)(b - eta) + B5(s)
  RMatPoly Bb;    // n x n, in eta:      B6(b - eta) + B7

  /// Ba with s -> first, eta -> second.
  RMatPoly ba_at(Var first, Var second) const;
  /// Bb with eta -> v.
  RMatPoly bb_at(Var v) const;
};

/// Throws DimensionError (shape), RankDeficient (row rank < 2n) or
/// SingularB2 (x(a), x_s(a) not determined by the conditions).
BoundaryKernels build_kernels(const BoundaryMatrix& B, std::size_t n, const Rational& a,
                              const Rational& b);

std::vector<RPoly> reconstruct_x(const BoundaryKernels& k, const std::vector<RPoly>& xss);
std::vector<RPoly> reconstruct_xs(const BoundaryKernels& k, const std::vector<RPoly>& xss);

/// [x(a); x(b); x_s(a); x_s(b)] for a polynomial vector in s.
std::vector<Rational> boundary_vector(const std::vector<RPoly>& x, const Rational& a, const Rational& b);
/// B times the boundary vector of x; zero iff x satisfies the conditions.
std::vector<Rational> boundary_residual(const BoundaryMatrix& B, const std::vector<RPoly>& x,
                                        const Rational& a, const Rational& b);

/// Add the unique affine term c0 + c1 (s - a) that makes x satisfy the
/// boundary conditions. Second derivative is unchanged.
std::vector<RPoly> project_admissible(const BoundaryMatrix& B, const BoundaryKernels& k,
                                      const std::vector<RPoly>& x);

}  // namespace pdelyap

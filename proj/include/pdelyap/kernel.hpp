#pragma once

// Operators P{M,N1,N2}:
//   (P x)(s) = M(s) x(s) + int_a^s N1(s,theta) x(theta) dtheta + int_s^b N2(s,theta) x(theta) dtheta
// and the transforms that rewrite <x, P x_ss>, <x, P x_s>, <x, P x> as
// quadratic forms <x_ss, P{0,K1,K2} x_ss>.
//
// Everything is templated on the coefficient type so the same code runs on
// exact rationals and on linear forms in the decision variables.

#include <cstddef>

#include "pdelyap/boundary.hpp"
#include "pdelyap/polymat.hpp"

namespace pdelyap {

template <class C>
struct KernelOp {
  MatPoly<C> M;   // in s
  MatPoly<C> N1;  // in (s, theta), theta <= s
  MatPoly<C> N2;  // in (s, theta), theta >= s

  static KernelOp zero(std::size_t n) { return {MatPoly<C>(n, n), MatPoly<C>(n, n), MatPoly<C>(n, n)}; }
  std::size_t dim() const { return M.rows(); }
  int degree() const;
  /// DimensionError unless all blocks are n x n in the allowed variables.
  void validate() const;

  KernelOp& operator+=(const KernelOp& o);
  friend KernelOp operator+(KernelOp a, const KernelOp& b) { return a += b; }
  bool operator==(const KernelOp&) const = default;
};

template <class C>
struct TwoKernel {
  MatPoly<C> K1;  // lower triangle
  MatPoly<C> K2;  // upper triangle

  static TwoKernel zero(std::size_t n) { return {MatPoly<C>(n, n), MatPoly<C>(n, n)}; }
  TwoKernel& operator+=(const TwoKernel& o);
  friend TwoKernel operator+(TwoKernel a, const TwoKernel& b) { return a += b; }
  TwoKernel operator-() const { return {-K1, -K2}; }
  bool operator==(const TwoKernel&) const = default;
};

template <class C>
struct YKernels {
  MatPoly<C> Y1;  // (s, theta)
  MatPoly<C> Y2;  // s
  MatPoly<C> Y3;  // (s, theta)
};

template <class C>
struct L1Terms {
  MatPoly<C> E1, E2, E3;
  TwoKernel<C> R;
};

template <class C>
struct L2Terms {
  MatPoly<C> F1, F2, F3;
  MatPoly<C> F4;  // (theta, eta)
  MatPoly<C> F5;  // (s, eta)
  TwoKernel<C> Q;
};

template <class C>
struct L3Terms {
  MatPoly<C> G1, G2, G3;
  MatPoly<C> G4;  // (theta, eta)
  MatPoly<C> G5;  // (s, theta, eta)
  TwoKernel<C> T;
};

template <class C>
YKernels<C> y_kernels(const KernelOp<C>& K, const BoundaryKernels& bk);

template <class C>
L1Terms<C> l1_terms(const KernelOp<C>& K, const BoundaryKernels& bk);
template <class C>
L2Terms<C> l2_terms(const KernelOp<C>& K, const BoundaryKernels& bk);
template <class C>
L3Terms<C> l3_terms(const KernelOp<C>& K, const BoundaryKernels& bk);

/// <x, P_K x_ss> = <x_ss, P{0,R1,R2} x_ss>
template <class C>
TwoKernel<C> transform_L1(const KernelOp<C>& K, const BoundaryKernels& bk) {
  return l1_terms(K, bk).R;
}
/// <x, P_K x_s> = <x_ss, P{0,Q1,Q2} x_ss>
template <class C>
TwoKernel<C> transform_L2(const KernelOp<C>& K, const BoundaryKernels& bk) {
  return l2_terms(K, bk).Q;
}
/// <x, P_K x> = <x_ss, P{0,T1,T2} x_ss>
template <class C>
TwoKernel<C> transform_L3(const KernelOp<C>& K, const BoundaryKernels& bk) {
  return l3_terms(K, bk).T;
}

/// Degree of transform_Li(K) is at most degree(K) + this, with affine B_a.
constexpr int transform_degree_increase(int lemma) { return lemma + 2; }

/// {M(s) A(s), N1(s,theta) A(theta), N2(s,theta) A(theta)}
template <class C>
KernelOp<C> weight_right(const KernelOp<C>& K, const RMatPoly& A);

/// (H1 + H2(theta,s)^T, H2 + H1(theta,s)^T)
template <class C>
TwoKernel<C> symmetrize(const TwoKernel<C>& H);

using RKernelOp = KernelOp<Rational>;
using RTwoKernel = TwoKernel<Rational>;

extern template struct KernelOp<Rational>;
extern template struct KernelOp<LinForm>;
extern template struct TwoKernel<Rational>;
extern template struct TwoKernel<LinForm>;

}  // namespace pdelyap

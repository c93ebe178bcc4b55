#include "pdelyap/kernel.hpp"

#include <algorithm>

namespace pdelyap {

namespace {

// K(s, theta) -> K(x, y)
template <class C>
MatPoly<C> at(const MatPoly<C>& K, Var x, Var y) {
  if (x == Var::s && y == Var::theta) return K;
  return rename(K, {{Var::s, x}, {Var::theta, y}});
}

// M(s) -> M(x)
template <class C>
MatPoly<C> at(const MatPoly<C>& M, Var x) {
  if (x == Var::s) return M;
  return rename(M, {{Var::s, x}});
}

RPoly lo_of(const BoundaryKernels& bk) { return constant(bk.a); }
RPoly hi_of(const BoundaryKernels& bk) { return constant(bk.b); }
RPoly v(Var x) { return var(x); }

template <class C>
void check_against(const KernelOp<C>& K, const BoundaryKernels& bk) {
  K.validate();
  if (K.dim() != bk.n) throw DimensionError("operator and boundary kernels have different dimensions");
}

}  // namespace

template <class C>
int KernelOp<C>::degree() const {
  return std::max({M.degree(), N1.degree(), N2.degree()});
}

template <class C>
void KernelOp<C>::validate() const {
  const std::size_t n = M.rows();
  for (const MatPoly<C>* b : {&M, &N1, &N2})
    if (b->rows() != n || b->cols() != n) throw DimensionError("operator blocks must be n x n");
  if (M.var_mask() & ~1u) throw DimensionError("M must depend on s only");
  if ((N1.var_mask() | N2.var_mask()) & ~3u) throw DimensionError("N1, N2 must depend on s, theta only");
}

template <class C>
KernelOp<C>& KernelOp<C>::operator+=(const KernelOp& o) {
  M += o.M;
  N1 += o.N1;
  N2 += o.N2;
  return *this;
}

template <class C>
TwoKernel<C>& TwoKernel<C>::operator+=(const TwoKernel& o) {
  K1 += o.K1;
  K2 += o.K2;
  return *this;
}

template <class C>
YKernels<C> y_kernels(const KernelOp<C>& K, const BoundaryKernels& bk) {
  check_against(K, bk);
  const RPoly a = lo_of(bk), b = hi_of(bk);
  const RPoly s = v(Var::s), th = v(Var::theta);
  YKernels<C> y;

  // Y1(s,theta) = Ba(theta,s)^T M(theta) + int_theta^b Ba(nu,s)^T N1(nu,theta) dnu
  //             + int_a^theta Ba(nu,s)^T N2(nu,theta) dnu
  const RMatPoly ba_nu_s = bk.ba_at(Var::nu, Var::s).transpose();
  y.Y1 = bk.ba_at(Var::theta, Var::s).transpose() * at(K.M, Var::theta);
  y.Y1 += integrate(ba_nu_s * at(K.N1, Var::nu, Var::theta), Var::nu, th, b);
  y.Y1 += integrate(ba_nu_s * at(K.N2, Var::nu, Var::theta), Var::nu, a, th);

  // Y2(s) = M(s) + int_a^s N1(s,theta) dtheta + int_s^b N2(s,theta) dtheta
  y.Y2 = K.M;
  y.Y2 += integrate(K.N1, Var::theta, a, s);
  y.Y2 += integrate(K.N2, Var::theta, s, b);

  // Y3(s,theta) = M(s) Ba(s,theta) + int_a^s N1(s,eta) Ba(eta,theta) deta
  //             + int_s^b N2(s,eta) Ba(eta,theta) deta
  const RMatPoly ba_eta_th = bk.ba_at(Var::eta, Var::theta);
  y.Y3 = K.M * bk.ba_at(Var::s, Var::theta);
  y.Y3 += integrate(at(K.N1, Var::s, Var::eta) * ba_eta_th, Var::eta, a, s);
  y.Y3 += integrate(at(K.N2, Var::s, Var::eta) * ba_eta_th, Var::eta, s, b);
  return y;
}

template <class C>
L1Terms<C> l1_terms(const KernelOp<C>& K, const BoundaryKernels& bk) {
  check_against(K, bk);
  const RPoly b = hi_of(bk);
  const RPoly s = v(Var::s), th = v(Var::theta), eta = v(Var::eta);
  L1Terms<C> t;
  const MatPoly<C> n1 = at(K.N1, Var::eta, Var::theta) * (eta - s);
  const MatPoly<C> n2 = at(K.N2, Var::eta, Var::theta) * (eta - s);
  t.E1 = integrate(n1, Var::eta, s, b);
  t.E2 = at(K.M, Var::theta) * (th - s);
  t.E2 += integrate(n1, Var::eta, th, b);
  t.E2 += integrate(n2, Var::eta, s, th);
  t.E3 = y_kernels(K, bk).Y1;
  t.R = {t.E1 + t.E3, t.E2 + t.E3};
  return t;
}

template <class C>
L2Terms<C> l2_terms(const KernelOp<C>& K, const BoundaryKernels& bk) {
  check_against(K, bk);
  const RPoly a = lo_of(bk), b = hi_of(bk);
  const RPoly s = v(Var::s), th = v(Var::theta), eta = v(Var::eta), zeta = v(Var::zeta);
  L2Terms<C> t;

  // F4(theta,eta) = M(eta) + int_theta^eta N1(eta,zeta) dzeta
  t.F4 = at(K.M, Var::eta) + integrate(at(K.N1, Var::eta, Var::zeta), Var::zeta, th, eta);
  // F5(s,eta) = int_s^eta (zeta-s) N2(zeta,eta) dzeta
  t.F5 = integrate(at(K.N2, Var::zeta, Var::eta) * (zeta - s), Var::zeta, s, eta);
  const MatPoly<C> inner = t.F4 * (eta - s) + t.F5;
  t.F1 = integrate(inner, Var::eta, s, b);
  t.F2 = integrate(inner, Var::eta, th, b);

  // F3(s,theta) = int_a^b Ba(zeta,s)^T Y2(zeta) dzeta Bb(theta) + int_theta^b Y1(s,zeta) dzeta
  //             + int_s^b (zeta-s) Y2(zeta) dzeta Bb(theta)
  const YKernels<C> y = y_kernels(K, bk);
  const MatPoly<C> y2z = at(y.Y2, Var::zeta);
  const RMatPoly bb_th = bk.bb_at(Var::theta);
  t.F3 = integrate(bk.ba_at(Var::zeta, Var::s).transpose() * y2z, Var::zeta, a, b) * bb_th;
  t.F3 += integrate(at(y.Y1, Var::s, Var::zeta), Var::zeta, th, b);
  t.F3 += integrate(y2z * (zeta - s), Var::zeta, s, b) * bb_th;

  t.Q = {t.F1 + t.F3, t.F2 + t.F3};
  return t;
}

template <class C>
L3Terms<C> l3_terms(const KernelOp<C>& K, const BoundaryKernels& bk) {
  check_against(K, bk);
  const RPoly a = lo_of(bk), b = hi_of(bk);
  const RPoly s = v(Var::s), th = v(Var::theta), eta = v(Var::eta), zeta = v(Var::zeta);
  L3Terms<C> t;

  // G4(theta,eta) = (eta-theta) M(eta) + int_theta^eta (zeta-theta) N1(eta,zeta) dzeta
  t.G4 = at(K.M, Var::eta) * (eta - th);
  t.G4 += integrate(at(K.N1, Var::eta, Var::zeta) * (zeta - th), Var::zeta, th, eta);
  // G5(s,theta,eta) = int_s^eta (zeta-s)(eta-theta) N2(zeta,eta) dzeta
  t.G5 = integrate(at(K.N2, Var::zeta, Var::eta) * (zeta - s), Var::zeta, s, eta) * (eta - th);
  const MatPoly<C> inner = t.G4 * (eta - s) + t.G5;
  t.G1 = integrate(inner, Var::eta, s, b);
  t.G2 = integrate(inner, Var::eta, th, b);

  // G3(s,theta) = int_a^b Ba(eta,s)^T Y3(eta,theta) deta + int_theta^b (eta-theta) Y1(s,eta) deta
  //             + int_s^b (eta-s) Y3(eta,theta) deta
  const YKernels<C> y = y_kernels(K, bk);
  const MatPoly<C> y3 = at(y.Y3, Var::eta, Var::theta);
  t.G3 = integrate(bk.ba_at(Var::eta, Var::s).transpose() * y3, Var::eta, a, b);
  t.G3 += integrate(at(y.Y1, Var::s, Var::eta) * (eta - th), Var::eta, th, b);
  t.G3 += integrate(y3 * (eta - s), Var::eta, s, b);

  t.T = {t.G1 + t.G3, t.G2 + t.G3};
  return t;
}

template <class C>
KernelOp<C> weight_right(const KernelOp<C>& K, const RMatPoly& A) {
  K.validate();
  if (A.rows() != K.dim() || A.cols() != K.dim()) throw DimensionError("weight matrix must be n x n");
  if (A.var_mask() & ~1u) throw DimensionError("weight matrix must depend on s only");
  const RMatPoly a_th = rename(A, {{Var::s, Var::theta}});
  return {K.M * A, K.N1 * a_th, K.N2 * a_th};
}

template <class C>
TwoKernel<C> symmetrize(const TwoKernel<C>& H) {
  return {H.K1 + transpose_swap(H.K2), H.K2 + transpose_swap(H.K1)};
}

template struct KernelOp<Rational>;
template struct KernelOp<LinForm>;
template struct TwoKernel<Rational>;
template struct TwoKernel<LinForm>;

#define PDELYAP_KERNEL_INSTANTIATE(C)                                                   \
  template YKernels<C> y_kernels(const KernelOp<C>&, const BoundaryKernels&);          \
  template L1Terms<C> l1_terms(const KernelOp<C>&, const BoundaryKernels&);            \
  template L2Terms<C> l2_terms(const KernelOp<C>&, const BoundaryKernels&);            \
  template L3Terms<C> l3_terms(const KernelOp<C>&, const BoundaryKernels&);            \
  template KernelOp<C> weight_right(const KernelOp<C>&, const RMatPoly&);              \
  template TwoKernel<C> symmetrize(const TwoKernel<C>&);

PDELYAP_KERNEL_INSTANTIATE(Rational)
PDELYAP_KERNEL_INSTANTIATE(LinForm)

#undef PDELYAP_KERNEL_INSTANTIATE

}  // namespace pdelyap

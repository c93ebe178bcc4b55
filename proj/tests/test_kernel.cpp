#include "doctest.h"
#include "pdelyap/kernel.hpp"
#include "pdelyap/oracle.hpp"
#include "support.hpp"

using namespace pdelyap;
using pdelyap::testing::gauss_legendre;
using pdelyap::testing::point;

namespace {
const RPoly S = var(Var::s);
const RPoly T = var(Var::theta);
const RPoly ONE = constant(1);

RMatPoly scalar(const RPoly& p) {
  RMatPoly m(1, 1);
  m(0, 0) = p;
  return m;
}

BoundaryKernels dirichlet() { return build_kernels(BoundaryMatrix{{{1, 0, 0, 0}, {0, 1, 0, 0}}}, 1, 0, 1); }

RKernelOp identity_op(std::size_t n) {
  RKernelOp K = RKernelOp::zero(n);
  K.M = RMatPoly::identity(n);
  return K;
}
}  // namespace

TEST_CASE("Y kernels for K = (I,0,0), Dirichlet") {
  const auto y = y_kernels(identity_op(1), dirichlet());
  CHECK(y.Y1 == scalar(-(T * (ONE - S))));
  CHECK(y.Y2 == scalar(ONE));
  CHECK(y.Y3 == scalar(-(S * (ONE - T))));

  const auto z = y_kernels(RKernelOp::zero(1), dirichlet());
  CHECK(z.Y1.is_zero());
  CHECK(z.Y2.is_zero());
  CHECK(z.Y3.is_zero());
}

TEST_CASE("Y2 against pointwise quadrature") {
  std::mt19937_64 rng(21);
  const auto bk = dirichlet();
  for (int trial = 0; trial < 5; ++trial) {
    const RKernelOp K = random_kernel(rng, 1, 3);
    const auto y = y_kernels(K, bk);
    CHECK_FALSE(y.Y2(0, 0).depends_on(Var::theta));
    for (double z : {0.13, 0.5, 0.81}) {
      const double quad =
          evaluate(K.M(0, 0), point(z)) +
          gauss_legendre([&](double th) { return evaluate(K.N1(0, 0), point(z, th)); }, 0.0, z) +
          gauss_legendre([&](double th) { return evaluate(K.N2(0, 0), point(z, th)); }, z, 1.0);
      CHECK(evaluate(y.Y2(0, 0), point(z)) == doctest::Approx(quad).epsilon(1e-11));
    }
  }
}

TEST_CASE("L1 worked example") {
  const auto bk = dirichlet();
  const auto t = l1_terms(identity_op(1), bk);
  CHECK(t.E1.is_zero());
  CHECK(t.E2 == scalar(T - S));
  CHECK(t.R.K1 == scalar(T * (S - ONE)));
  CHECK(t.R.K2 == scalar(S * (T - ONE)));
  CHECK(transform_L1(RKernelOp::zero(1), bk) == RTwoKernel::zero(1));

  // x = s(s-1), x_ss = 2: both sides equal -1/3
  const std::vector<RPoly> x = {S * S - S}, xss = {constant(2)};
  CHECK(inner_product(x, identity_op(1), xss, 0, 1) == Rational(-1, 3));
  CHECK(inner_product(xss, t.R, xss, 0, 1) == Rational(-1, 3));
}

TEST_CASE("L2 and L3 worked examples") {
  const auto bk = dirichlet();
  const std::vector<RPoly> x = {S * S - S}, xs = {Rational(2) * S - ONE}, xss = {constant(2)};
  CHECK(transform_L2(RKernelOp::zero(1), bk) == RTwoKernel::zero(1));
  CHECK(transform_L3(RKernelOp::zero(1), bk) == RTwoKernel::zero(1));

  CHECK(inner_product(x, identity_op(1), xs, 0, 1) == 0);
  CHECK(inner_product(xss, transform_L2(identity_op(1), bk), xss, 0, 1) == 0);

  CHECK(inner_product(x, identity_op(1), x, 0, 1) == Rational(1, 30));
  CHECK(inner_product(xss, transform_L3(identity_op(1), bk), xss, 0, 1) == Rational(1, 30));
}

TEST_CASE("L3 of the identity transports positivity") {
  const auto bk = dirichlet();
  const RTwoKernel T3 = transform_L3(identity_op(1), bk);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto st = random_admissible(bk, 6, seed);
    if (st.xss[0].is_zero()) continue;
    CHECK(inner_product(st.xss, T3, st.xss, 0, 1) > 0);
  }
}

TEST_CASE("lemma equivalence on random inputs") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t n = 1 + trial % 2;
    const Rational a(trial % 3 == 0 ? -1 : 0), b(trial % 3 == 2 ? Rational(5, 2) : Rational(1));
    const auto bk = build_kernels(random_boundary(rng, n, a, b), n, a, b);
    const RKernelOp K = random_kernel(rng, n, 3);
    const auto st = random_admissible(bk, 6, rng());
    for (int lemma = 1; lemma <= 3; ++lemma) CHECK(check_lemma(lemma, K, bk, st) == 0);
  }
}

TEST_CASE("transforms are linear") {
  std::mt19937_64 rng(23);
  const auto bk = build_kernels(random_boundary(rng, 2, 0, 1), 2, 0, 1);
  const RKernelOp K = random_kernel(rng, 2, 2), L = random_kernel(rng, 2, 2);
  const Rational al(2, 3), be(-7, 5);
  RKernelOp comb = K;
  comb.M = al * K.M + be * L.M;
  comb.N1 = al * K.N1 + be * L.N1;
  comb.N2 = al * K.N2 + be * L.N2;
  auto lin = [&](auto f) {
    const RTwoKernel x = f(K, bk), y = f(L, bk), z = f(comb, bk);
    return z.K1 == al * x.K1 + be * y.K1 && z.K2 == al * x.K2 + be * y.K2;
  };
  CHECK(lin(transform_L1<Rational>));
  CHECK(lin(transform_L2<Rational>));
  CHECK(lin(transform_L3<Rational>));
}

TEST_CASE("degree bookkeeping") {
  std::mt19937_64 rng(24);
  for (int dk = 0; dk <= 3; ++dk) {
    const auto bk = build_kernels(random_boundary(rng, 1, 0, 1), 1, 0, 1);
    const RKernelOp K = random_kernel(rng, 1, dk);
    const int d = K.degree();
    const RTwoKernel r[3] = {transform_L1(K, bk), transform_L2(K, bk), transform_L3(K, bk)};
    for (int i = 0; i < 3; ++i) {
      CHECK(r[i].K1.degree() <= d + transform_degree_increase(i + 1));
      CHECK(r[i].K2.degree() <= d + transform_degree_increase(i + 1));
    }
  }
}

TEST_CASE("linear-form coefficients agree with rational evaluation") {
  std::mt19937_64 rng(25);
  const auto bk = build_kernels(random_boundary(rng, 1, 0, 1), 1, 0, 1);
  using LMat = MatPoly<LinForm>;
  // K = p0 * K0 + p1 * K1 with symbolic p
  const RKernelOp K0 = random_kernel(rng, 1, 2), K1 = random_kernel(rng, 1, 2);
  auto lift = [](const RMatPoly& a, const RMatPoly& b) {
    LMat out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) {
        std::vector<Poly<LinForm>::Term> terms;
        for (const auto& t : a(i, j).terms()) terms.push_back({t.mono, LinForm::variable(0, t.coef)});
        for (const auto& t : b(i, j).terms()) terms.push_back({t.mono, LinForm::variable(1, t.coef)});
        out(i, j) = Poly<LinForm>::from_terms(std::move(terms));
      }
    return out;
  };
  const KernelOp<LinForm> KL{lift(K0.M, K1.M), lift(K0.N1, K1.N1), lift(K0.N2, K1.N2)};
  const auto sym = transform_L3(KL, bk);
  const std::vector<Rational> p = {Rational(3, 2), Rational(-2)};
  RKernelOp Kp = K0;
  Kp.M = p[0] * K0.M + p[1] * K1.M;
  Kp.N1 = p[0] * K0.N1 + p[1] * K1.N1;
  Kp.N2 = p[0] * K0.N2 + p[1] * K1.N2;
  const auto num = transform_L3(Kp, bk);
  for (const auto& e : coefficients(num.K1)) CHECK(sym.K1(e.row, e.col).coef(e.mono).evaluate(p) == e.value);
  std::size_t nonzero = 0;
  for (const auto& t : sym.K1(0, 0).terms())
    if (sgn(t.coef.evaluate(p)) != 0) ++nonzero;
  CHECK(nonzero == num.K1(0, 0).size());
}

TEST_CASE("weight_right and symmetrize") {
  std::mt19937_64 rng(26);
  const RKernelOp K = random_kernel(rng, 2, 2);
  CHECK(weight_right(K, RMatPoly::identity(2)) == K);
  CHECK(weight_right(K, RMatPoly(2, 2)) == RKernelOp::zero(2));

  RKernelOp k1 = RKernelOp::zero(1);
  k1.M = scalar(ONE);
  k1.N1 = scalar(S);
  k1.N2 = scalar(S);
  const auto w = weight_right(k1, scalar(constant(3)));
  CHECK(w.M == scalar(constant(3)));
  CHECK(w.N1 == scalar(Rational(3) * S));

  // A(s) = s: M picks up s, kernels pick up theta
  const auto ws = weight_right(k1, scalar(S));
  CHECK(ws.M == scalar(S));
  CHECK(ws.N2 == scalar(S * T));
  CHECK_THROWS_AS(weight_right(K, RMatPoly(1, 1)), DimensionError);

  const RTwoKernel R = transform_L1(identity_op(1), dirichlet());
  const RTwoKernel sym = symmetrize(R);
  CHECK(sym.K1 == Rational(2) * R.K1);
  CHECK(sym.K2 == Rational(2) * R.K2);

  const RKernelOp H = random_kernel(rng, 2, 3);
  const RTwoKernel hs = symmetrize(RTwoKernel{H.N1, H.N2});
  CHECK(hs.K1 == transpose_swap(hs.K2));
  std::vector<RPoly> v = {random_polynomial(rng, 1, 3), random_polynomial(rng, 1, 2)};
  CHECK(inner_product(v, hs, v, 0, 1) == Rational(2) * inner_product(v, RTwoKernel{H.N1, H.N2}, v, 0, 1));
}

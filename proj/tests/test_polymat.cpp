#include "doctest.h"
#include "pdelyap/polymat.hpp"
#include "support.hpp"

using namespace pdelyap;
using pdelyap::testing::gauss_legendre;
using pdelyap::testing::point;
using pdelyap::testing::random_matpoly;
using pdelyap::testing::random_poly;

namespace {
const RPoly S = var(Var::s);
const RPoly T = var(Var::theta);
const RPoly E = var(Var::eta);
const RPoly ONE = constant(1);
const RPoly ZERO;

RMatPoly scalar(const RPoly& p) {
  RMatPoly m(1, 1);
  m(0, 0) = p;
  return m;
}
}  // namespace

TEST_CASE("add: identity, cancellation, like terms") {
  std::mt19937_64 rng(1);
  const RMatPoly p = random_matpoly(rng, 2, 3, {Var::s, Var::theta}, 3);
  CHECK(p + RMatPoly(2, 3) == p);
  CHECK((S * T + (-(S * T))).is_zero());
  CHECK(S * S + Rational(2) * (S * S) == Rational(3) * (S * S));
  CHECK_THROWS_AS(RMatPoly(2, 2) + RMatPoly(2, 3), DimensionError);
}

TEST_CASE("mul: identity, scalar, naive triple loop") {
  std::mt19937_64 rng(2);
  const RMatPoly q = random_matpoly(rng, 2, 2, {Var::s, Var::theta}, 2);
  CHECK(RMatPoly::identity(2) * q == q);
  CHECK(scalar(S) * scalar(T) == scalar(S * T));
  CHECK_THROWS_AS(RMatPoly(2, 3) * RMatPoly(2, 3), DimensionError);

  for (int trial = 0; trial < 10; ++trial) {
    const RMatPoly a = random_matpoly(rng, 2, 2, {Var::s, Var::theta}, 2);
    const RMatPoly b = random_matpoly(rng, 2, 2, {Var::s, Var::eta}, 2);
    RMatPoly naive(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t k = 0; k < 2; ++k) naive(i, j) += a(i, k) * b(k, j);
    CHECK(a * b == naive);
  }
}

TEST_CASE("integrate: textbook cases") {
  // int_0^s (s - eta) d eta = s^2 / 2
  CHECK(integrate(S - E, Var::eta, ZERO, S) == Rational(1, 2) * (S * S));
  CHECK(integrate(ONE, Var::eta, ZERO, ONE) == ONE);
  // int_theta^1 (eta - s) d eta = (1 - theta^2)/2 - s (1 - theta)
  const RPoly expected = Rational(1, 2) * (ONE - T * T) - S * (ONE - T);
  const RPoly got = integrate(E - S, Var::eta, T, ONE);
  CHECK(got == expected);
  for (double s : {0.1, 0.5, 0.93})
    for (double th : {0.0, 0.3, 0.77}) {
      const double quad = gauss_legendre([&](double e) { return e - s; }, th, 1.0);
      CHECK(evaluate(got, point(s, th)) == doctest::Approx(quad).epsilon(1e-12));
    }
  CHECK_THROWS_AS(integrate(S, Var::eta, E, ONE), BoundError);
}

TEST_CASE("integrate: polynomial bounds against quadrature") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const RPoly p = random_poly(rng, {Var::s, Var::theta, Var::eta}, 4);
    const RPoly lo = S * T - ONE;
    const RPoly hi = S + T * T;
    const RPoly r = integrate(p, Var::eta, lo, hi);
    CHECK_FALSE(r.depends_on(Var::eta));
    const double s = 0.3 + 0.1 * trial, th = 0.7 - 0.05 * trial;
    const double quad = gauss_legendre([&](double e) { return evaluate(p, point(s, th, e)); },
                                       evaluate(lo, point(s, th)), evaluate(hi, point(s, th)));
    CHECK(evaluate(r, point(s, th)) == doctest::Approx(quad).epsilon(1e-10));
  }
}

TEST_CASE("integrate: linearity, Chasles, fundamental theorem") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const RPoly p = random_poly(rng, {Var::s, Var::eta}, 4);
    const RPoly q = random_poly(rng, {Var::s, Var::eta, Var::theta}, 3);
    const Rational alpha(3, 7), beta(-5, 2);
    const RPoly lo = random_poly(rng, {Var::s}, 2);
    const RPoly mid = random_poly(rng, {Var::theta}, 1);
    const RPoly hi = random_poly(rng, {Var::s, Var::theta}, 2);

    CHECK(integrate(alpha * p + beta * q, Var::eta, lo, hi) ==
          alpha * integrate(p, Var::eta, lo, hi) + beta * integrate(q, Var::eta, lo, hi));
    CHECK(integrate(p, Var::eta, lo, mid) + integrate(p, Var::eta, mid, hi) ==
          integrate(p, Var::eta, lo, hi));
    // d/ds int_a^s p(s, eta) d eta = p(s, s) + int_a^s dp/ds d eta
    const RPoly lhs = derivative(integrate(p, Var::eta, constant(Rational(1, 3)), S), Var::s);
    const RPoly rhs = substitute(p, {{Var::eta, S}}) +
                      integrate(derivative(p, Var::s), Var::eta, constant(Rational(1, 3)), S);
    CHECK(lhs == rhs);
    // eta-only integrand: the pure FTC statement
    const RPoly f = random_poly(rng, {Var::eta}, 5);
    CHECK(derivative(integrate(f, Var::eta, constant(0), S), Var::s) == substitute(f, {{Var::eta, S}}));
  }
}

TEST_CASE("substitute: swaps, constants, pointwise relabeling") {
  CHECK(substitute(S - T, {{Var::s, T}, {Var::theta, S}}) == T - S);
  CHECK(substitute(S * T + ONE, {{Var::s, ZERO}}) == ONE);

  std::mt19937_64 rng(5);
  const RPoly n = random_poly(rng, {Var::s, Var::theta}, 4);
  const RPoly m = substitute(n, {{Var::s, E}, {Var::theta, S}});
  for (double a : {0.2, 0.6})
    for (double b : {0.1, 0.9})
      CHECK(evaluate(m, point(b, 0.0, a)) == doctest::Approx(evaluate(n, point(a, b))).epsilon(1e-13));

  // rename and substitute agree on pure relabelings
  CHECK(rename(n, {{Var::s, Var::eta}, {Var::theta, Var::s}}) == m);
  // general polynomial binding
  const RPoly g = substitute(S * S, {{Var::s, S + T}});
  CHECK(g == S * S + Rational(2) * (S * T) + T * T);
}

TEST_CASE("transpose_swap") {
  RMatPoly sym(2, 2);
  sym(0, 0) = S + T;
  sym(0, 1) = S * S;
  sym(1, 0) = T * T;
  sym(1, 1) = S * T;
  CHECK(transpose_swap(sym) == sym);
  CHECK(transpose_swap(scalar(S * T * T)) == scalar(S * S * T));

  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const RMatPoly n = random_matpoly(rng, 3, 3, {Var::s, Var::theta}, 3);
    CHECK(transpose_swap(transpose_swap(n)) == n);
  }
}

TEST_CASE("coefficients: enumeration and round trip") {
  CHECK(coefficients(RMatPoly(2, 2)).empty());
  const auto one = coefficients(scalar(Rational(3) * (S * S * T)));
  REQUIRE(one.size() == 1);
  CHECK(one[0].value == 3);
  CHECK(one[0].mono[Var::s] == 2);
  CHECK(one[0].mono[Var::theta] == 1);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const RMatPoly p = random_matpoly(rng, 2, 3, {Var::s, Var::theta, Var::eta}, 3);
    CHECK(from_coefficients(2, 3, coefficients(p)) == p);
  }
}

TEST_CASE("canonical form: no stored zeros, graded-lex order") {
  const RPoly p = (S + ONE) * (S - ONE) + ONE;
  CHECK(p == S * S);
  CHECK(p.size() == 1);
  const RPoly q = T * T + S + ONE;
  REQUIRE(q.size() == 3);
  CHECK(q.terms()[0].mono.degree() == 0);
  CHECK(q.terms()[2].mono.degree() == 2);
}

TEST_CASE("linear-form coefficients stay affine") {
  using LPoly = Poly<LinForm>;
  const LPoly p = LPoly::monomial(Monomial::of(Var::s), LinForm::variable(0)) +
                  LPoly(LinForm(Rational(2)));
  const LPoly q = p * (S + ONE);
  // (p0 s + 2)(s + 1) = p0 s^2 + (p0 + 2) s + 2
  CHECK(q.coef(Monomial::of(Var::s, 2)) == LinForm::variable(0));
  LinForm mid = LinForm::variable(0);
  mid += LinForm(Rational(2));
  CHECK(q.coef(Monomial::of(Var::s)) == mid);
  const auto r = integrate(q, Var::s, ZERO, ONE);
  REQUIRE(r.size() == 1);
  // p0/3 + (p0+2)/2 + 2 at p0 = 6: 2 + 4 + 2 = 8
  CHECK(r.terms()[0].coef.evaluate(std::vector<Rational>{6}) == 8);
}

#include "doctest.h"
#include "pdelyap/oracle.hpp"
#include "pdelyap/sospar.hpp"
#include "support.hpp"

using namespace pdelyap;
using pdelyap::testing::random_rational;

namespace {
const RPoly S = var(Var::s);
const RPoly T = var(Var::theta);
const RPoly ONE = constant(1);

RMatPoly scalar(const RPoly& p) {
  RMatPoly m(1, 1);
  m(0, 0) = p;
  return m;
}

RatMatrix random_symmetric(std::mt19937_64& rng, std::size_t m) {
  RatMatrix P = rat_zeros(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) P[i][j] = P[j][i] = random_rational(rng);
  return P;
}

RatMatrix random_gram(std::mt19937_64& rng, std::size_t m) {
  const std::size_t k = 1 + rng() % m;
  RatMatrix G = rat_zeros(k, m);
  for (auto& r : G)
    for (auto& v : r) v = random_rational(rng, 4, 3);
  RatMatrix P = rat_zeros(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t r = 0; r < k; ++r) P[i][j] += G[r][i] * G[r][j];
  return P;
}
}  // namespace

TEST_CASE("basis sizes and ordering") {
  PhiBasis b{2, 1, 1, GChoice::one};
  CHECK(b.z1() == 2);
  CHECK(b.z2() == 3);
  CHECK(b.size() == 2 * (2 + 6));
  CHECK(PhiBasis{1, -1, 2, GChoice::one}.size() == 12);
  const auto ex = z2_exponents(2);
  REQUIRE(ex.size() == 6);
  CHECK(ex[0] == std::pair<int, int>{0, 0});
  for (std::size_t k = 1; k < ex.size(); ++k) CHECK(ex[k - 1].first + ex[k - 1].second <= ex[k].first + ex[k].second);
  CHECK(sym_index(0, 0, 4) == 0);
  CHECK(sym_index(0, 3, 4) == 3);
  CHECK(sym_index(1, 1, 4) == 4);
  CHECK(sym_index(3, 3, 4) == 9);
  CHECK(sym_index(2, 1, 4) == sym_index(1, 2, 4));
}

TEST_CASE("P = I3 worked example") {
  const PhiParam p{{1, 0, 0, GChoice::one}, rat_identity(3)};
  const RKernelOp K = phi_kernels(p, 0, 1);
  CHECK(K.M == scalar(ONE));
  CHECK(K.N1 == scalar(T + ONE - S));
  CHECK(K.N2 == scalar(S + ONE - T));
  CHECK(inner_product({ONE}, K, {ONE}, 0, 1) == Rational(5, 3));

  const RKernelOp Z = phi_kernels(PhiParam{{1, 0, 0, GChoice::one}, rat_zeros(3, 3)}, 0, 1);
  CHECK(Z == RKernelOp::zero(1));
  CHECK_THROWS_AS(phi_kernels(PhiParam{{1, 0, 0, GChoice::one}, rat_identity(4)}, 0, 1), DimensionError);
}

TEST_CASE("unit entry in the multiplier block") {
  for (GChoice g : {GChoice::one, GChoice::boundary}) {
    const PhiBasis b{1, 1, 1, g};
    RatMatrix P = rat_zeros(b.size(), b.size());
    P[0][0] = 1;
    const RKernelOp K = phi_kernels(PhiParam{b, P}, 0, 1);
    CHECK(K.M == scalar(weight_poly(g, 0, 1)));
    CHECK(K.N1.is_zero());
    CHECK(K.N2.is_zero());
  }
}

TEST_CASE("linear map matches direct construction") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const PhiBasis b{1 + static_cast<std::size_t>(trial % 2), trial % 3 == 0 ? -1 : 1, 1 + trial % 2,
                     trial % 2 ? GChoice::boundary : GChoice::one};
    const Rational a(trial % 4 == 0 ? -1 : 0), e(2);
    const RatMatrix P = random_symmetric(rng, b.size());
    std::vector<Rational> vals(b.num_entries() + 3);
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i; j < b.size(); ++j) vals[3 + sym_index(i, j, b.size())] = P[i][j];
    const auto map = phi_linear_map(b, a, e, 3);
    const RKernelOp direct = phi_kernels(PhiParam{b, P}, a, e);
    CHECK(evaluate_linear(map.M, vals) == direct.M);
    CHECK(evaluate_linear(map.N1, vals) == direct.N1);
    CHECK(evaluate_linear(map.N2, vals) == direct.N2);
  }
  const auto map = phi_linear_map(PhiBasis{1, 1, 1, GChoice::one}, 0, 1);
  CHECK(evaluate_linear(map.N1, std::vector<Rational>(PhiBasis{1, 1, 1, GChoice::one}.num_entries())).is_zero());
}

TEST_CASE("boundary weight vanishes at the endpoints") {
  std::mt19937_64 rng(42);
  const PhiBasis b{2, 1, 1, GChoice::boundary};
  const RKernelOp K = phi_kernels(PhiParam{b, random_gram(rng, b.size())}, Rational(-1, 2), 1);
  for (const auto& e : K.M.entries()) {
    CHECK(evaluate(e, std::array<Rational, kNumVars>{Rational(-1, 2), 0, 0, 0, 0}) == 0);
    CHECK(evaluate(e, std::array<Rational, kNumVars>{1, 0, 0, 0, 0}) == 0);
  }
}

TEST_CASE("symmetric output: N1(s,theta) = N2(theta,s)^T") {
  std::mt19937_64 rng(43);
  const PhiBasis b{2, 1, 1, GChoice::one};
  const RKernelOp K = phi_kernels(PhiParam{b, random_symmetric(rng, b.size())}, 0, 1);
  CHECK(K.N1 == transpose_swap(K.N2));
}

TEST_CASE("positivity for Gram-sampled P") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 50; ++trial) {
    const PhiBasis b{1 + static_cast<std::size_t>(trial % 2), trial % 3 - 1 < 0 ? 0 : 1, trial % 2,
                     trial % 4 < 2 ? GChoice::one : GChoice::boundary};
    const RKernelOp K = phi_kernels(PhiParam{b, random_gram(rng, b.size())}, 0, 1);
    for (int k = 0; k < 20; ++k) {
      std::vector<RPoly> x(b.n);
      for (auto& p : x) p = pdelyap::testing::random_poly(rng, {Var::s}, 4);
      CHECK(inner_product(x, K, x, 0, 1) >= 0);
    }
  }
}

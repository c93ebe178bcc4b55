#include "pdelyap/oracle.hpp"

#include <chrono>

namespace pdelyap {

namespace {

RMatPoly column(const std::vector<RPoly>& v, Var at) {
  RMatPoly c(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) c(i, 0) = at == Var::s ? v[i] : rename(v[i], {{Var::s, at}});
  return c;
}

RMatPoly row(const std::vector<RPoly>& v) { return column(v, Var::s).transpose(); }

void check_vectors(const std::vector<RPoly>& u, const std::vector<RPoly>& v, std::size_t n) {
  if (u.size() != n || v.size() != n) throw DimensionError("vector length does not match the operator");
  for (const auto* w : {&u, &v})
    for (const auto& p : *w)
      if (p.var_mask() & ~1u) throw DimensionError("functions must depend on s only");
}

}  // namespace

Rational inner_product(const std::vector<RPoly>& u, const RKernelOp& K, const std::vector<RPoly>& v,
                       const Rational& a, const Rational& b) {
  K.validate();
  check_vectors(u, v, K.dim());
  const RPoly lo = constant(a), hi = constant(b), s = var(Var::s);
  const RMatPoly vt = column(v, Var::theta);
  RMatPoly pv = K.M * column(v, Var::s);
  pv += integrate(K.N1 * vt, Var::theta, lo, s);
  pv += integrate(K.N2 * vt, Var::theta, s, hi);
  const RMatPoly r = integrate(row(u) * pv, Var::s, lo, hi);
  return r(0, 0).coef(Monomial{});
}

Rational inner_product(const std::vector<RPoly>& u, const RTwoKernel& K, const std::vector<RPoly>& v,
                       const Rational& a, const Rational& b) {
  const std::size_t n = K.K1.rows();
  return inner_product(u, RKernelOp{RMatPoly(n, n), K.K1, K.K2}, v, a, b);
}

Rational random_small_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-6, 6);
  std::uniform_int_distribution<int> den(1, 4);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

RPoly random_polynomial(std::mt19937_64& rng, unsigned var_mask, int degree) {
  std::vector<Var> vars;
  for (int i = 0; i < kNumVars; ++i)
    if ((var_mask >> i) & 1u) vars.push_back(static_cast<Var>(i));
  std::vector<RPoly::Term> terms;
  std::bernoulli_distribution keep(0.7);
  // enumerate exponent vectors over vars with total degree <= degree
  std::vector<int> e(vars.size(), 0);
  for (;;) {
    int total = 0;
    for (int x : e) total += x;
    if (total <= degree && keep(rng)) {
      Monomial m;
      for (std::size_t k = 0; k < vars.size(); ++k) m.exp[static_cast<int>(vars[k])] = static_cast<std::uint8_t>(e[k]);
      terms.push_back({m, random_small_rational(rng)});
    }
    std::size_t k = 0;
    while (k < e.size() && ++e[k] > degree) e[k++] = 0;
    if (k == e.size()) break;
  }
  return RPoly::from_terms(std::move(terms));
}

RKernelOp random_kernel(std::mt19937_64& rng, std::size_t n, int degree) {
  RKernelOp K = RKernelOp::zero(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      K.M(i, j) = random_polynomial(rng, 0b1, degree);
      K.N1(i, j) = random_polynomial(rng, 0b11, degree);
      K.N2(i, j) = random_polynomial(rng, 0b11, degree);
    }
  return K;
}

BoundaryMatrix random_boundary(std::mt19937_64& rng, std::size_t n, const Rational& a, const Rational& b) {
  for (;;) {
    BoundaryMatrix B{rat_zeros(2 * n, 4 * n)};
    for (auto& r : B.entries)
      for (auto& x : r) x = random_small_rational(rng);
    try {
      build_kernels(B, n, a, b);
      return B;
    } catch (const RankDeficient&) {
    } catch (const SingularB2&) {
    }
  }
}

AdmissibleState random_admissible(const BoundaryKernels& bk, int degree, std::uint64_t seed) {
  if (degree < 2) throw std::invalid_argument("admissible state degree must be at least 2");
  std::mt19937_64 rng(seed);
  AdmissibleState st;
  st.xss.resize(bk.n);
  for (auto& p : st.xss) p = random_polynomial(rng, 0b1, degree - 2);
  st.x = reconstruct_x(bk, st.xss);
  st.xs = reconstruct_xs(bk, st.xss);
  return st;
}

Rational check_lemma(int lemma, const RKernelOp& K, const BoundaryKernels& bk, const AdmissibleState& st) {
  const std::vector<RPoly>* right = nullptr;
  RTwoKernel T;
  switch (lemma) {
    case 1:
      right = &st.xss;
      T = transform_L1(K, bk);
      break;
    case 2:
      right = &st.xs;
      T = transform_L2(K, bk);
      break;
    case 3:
      right = &st.x;
      T = transform_L3(K, bk);
      break;
    default:
      throw std::invalid_argument("lemma must be 1, 2 or 3");
  }
  return inner_product(st.x, K, *right, bk.a, bk.b) - inner_product(st.xss, T, st.xss, bk.a, bk.b);
}

std::vector<LemmaSuiteResult> run_lemma_suite(int trials, std::uint64_t seed, int kernel_degree,
                                              int state_degree) {
  std::vector<LemmaSuiteResult> out;
  for (int lemma = 1; lemma <= 3; ++lemma) {
    LemmaSuiteResult r;
    r.lemma = lemma;
    const auto start = std::chrono::steady_clock::now();
    for (int t = 0; t < trials; ++t) {
      std::mt19937_64 rng(seed + 1000003ull * static_cast<std::uint64_t>(lemma) + static_cast<std::uint64_t>(t));
      const std::size_t n = std::uniform_int_distribution<int>(1, 2)(rng);
      const int dk = std::uniform_int_distribution<int>(0, kernel_degree)(rng);
      const int dx = std::uniform_int_distribution<int>(2, state_degree)(rng);
      const BoundaryMatrix B = random_boundary(rng, n, 0, 1);
      const BoundaryKernels bk = build_kernels(B, n, 0, 1);
      const RKernelOp K = random_kernel(rng, n, dk);
      const AdmissibleState st = random_admissible(bk, dx, rng());
      const Rational res = check_lemma(lemma, K, bk, st);
      ++r.trials;
      if (sgn(res) == 0) ++r.passed;
      if (abs(res) > r.worst_residual) r.worst_residual = abs(res);
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(r);
  }
  return out;
}

}  // namespace pdelyap

#pragma once

// Brute-force checks of the operator identities by exact symbolic
// integration.

#include <cstdint>
#include <random>
#include <vector>

#include "pdelyap/boundary.hpp"
#include "pdelyap/kernel.hpp"

namespace pdelyap {

struct AdmissibleState {
  std::vector<RPoly> x;
  std::vector<RPoly> xs;
  std::vector<RPoly> xss;
};

/// Exact <u, P_K v> on [a, b].
Rational inner_product(const std::vector<RPoly>& u, const RKernelOp& K, const std::vector<RPoly>& v,
                       const Rational& a, const Rational& b);
/// Exact <u, P{0,K1,K2} v> on [a, b].
Rational inner_product(const std::vector<RPoly>& u, const RTwoKernel& K, const std::vector<RPoly>& v,
                       const Rational& a, const Rational& b);

/// Deterministic random admissible state of degree <= degree (>= 2).
AdmissibleState random_admissible(const BoundaryKernels& bk, int degree, std::uint64_t seed);

/// LHS - RHS of lemma i in {1, 2, 3}; zero when the transform is correct.
Rational check_lemma(int lemma, const RKernelOp& K, const BoundaryKernels& bk, const AdmissibleState& st);

// Random inputs for the randomized identity suite.
Rational random_small_rational(std::mt19937_64& rng);
RPoly random_polynomial(std::mt19937_64& rng, unsigned var_mask, int degree);
RKernelOp random_kernel(std::mt19937_64& rng, std::size_t n, int degree);
/// Random 2n x 4n boundary matrix that passes build_kernels on [a, b].
BoundaryMatrix random_boundary(std::mt19937_64& rng, std::size_t n, const Rational& a, const Rational& b);

struct LemmaSuiteResult {
  int lemma = 0;
  int trials = 0;
  int passed = 0;
  double seconds = 0.0;
  Rational worst_residual;  // largest |residual| seen
};

/// Seeded suite: per trial n in {1,2}, random B on [0,1], kernel degree
/// <= kernel_degree, state degree <= state_degree.
std::vector<LemmaSuiteResult> run_lemma_suite(int trials, std::uint64_t seed, int kernel_degree,
                                              int state_degree);

}  // namespace pdelyap

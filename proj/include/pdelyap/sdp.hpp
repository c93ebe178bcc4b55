#pragma once

// Stability conditions as a semidefinite feasibility problem.
//
// Lyapunov operator:   (eps I + Phi_P.M, Phi_P.N1, Phi_P.N2), P >= 0
// Derivative side:     H = L3(M A0 + eps I, N1 A0(theta), N2 A0(theta))
//                        + L2(M A1, N1 A1(theta), N2 A1(theta))
//                        + L1(M A2, N1 A2(theta), N2 A2(theta))
//                      Phi_Q.N1 = -(H1 + H2(theta,s)^T), Q >= 0, no Z(s) block.
// Matching is per matrix entry and monomial of N1; N2 follows by symmetry.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pdelyap/boundary.hpp"
#include "pdelyap/kernel.hpp"
#include "pdelyap/sospar.hpp"

namespace pdelyap {

struct PDESystem {
  std::size_t n = 1;
  Rational a = 0;
  Rational b = 1;
  RMatPoly A0, A1, A2;  // n x n in s
  BoundaryMatrix B;

  /// DimensionError on inconsistent shapes; boundary errors propagate.
  void validate() const;
};

enum class GConfig { one, boundary, sum };

const char* to_string(GConfig g);
GConfig parse_gconfig(const std::string& s);

struct AssembleOptions {
  int deg = 1;                  // Lyapunov basis degree (d1 = d2 = deg)
  int deriv_deg = -1;           // derivative-side d'; -1 picks the minimal sufficient value
  std::optional<Rational> eps;  // default_eps(sys) when empty
  GConfig g = GConfig::sum;
};

/// 1e-3 * (1 + largest |coefficient| of A0).
Rational default_eps(const PDESystem& sys);

/// Largest total degree reachable by Phi_Q.N1 with Z(s,theta) of degree d2.
int reachable_degree(int d2, GConfig g);
/// Smallest d2 with reachable_degree(d2, g) >= h_degree.
int required_deriv_degree(int h_degree, GConfig g);

enum class BlockRole { lyapunov, derivative };

struct BlockInfo {
  BlockRole role = BlockRole::lyapunov;
  PhiBasis basis;
  std::vector<std::uint32_t> kept;  // basis indices surviving facial reduction
};

/// Coefficient of the unknown X[i][j] (i <= j, one unknown per symmetric pair).
struct SDPTerm {
  std::uint32_t block = 0;
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  double coef = 0.0;
  bool operator==(const SDPTerm&) const = default;
};

/// Which coefficient a constraint matches: entry (row, col) of N1, monomial.
struct Provenance {
  std::size_t row = 0;
  std::size_t col = 0;
  Monomial mono;
  std::string str() const;
  bool operator==(const Provenance&) const = default;
};

struct SDPConstraint {
  std::vector<SDPTerm> terms;  // sorted by (block, i, j)
  double rhs = 0.0;
  Provenance prov;
  bool operator==(const SDPConstraint&) const = default;
};

struct SDPProblem {
  std::vector<std::size_t> block_sizes;
  std::vector<BlockInfo> blocks;  // empty for problems read from files; blocks reduced to size 0 are omitted
  std::vector<SDPConstraint> constraints;
  Rational eps;
  int deg = 0;
  int deriv_deg = 0;
  int h_degree = -1;
  std::size_t matched_rows = 0;             // before presolve
  std::size_t dropped_rows = 0;             // linearly dependent, removed
  std::vector<Provenance> inconsistent;     // rows reducing to 0 = nonzero
  std::size_t zeroed_indices = 0;           // basis indices forced to zero
};

/// Build the SDP for sys. Throws DegreeTooLow when an explicit deriv_deg
/// cannot reach the degree of H.
SDPProblem assemble(const PDESystem& sys, const AssembleOptions& opts);

enum class Verdict { feasible, infeasible, indeterminate };
const char* to_string(Verdict v);

struct SolveOptions {
  double tol = 1e-8;
  int max_iter = 200;
  bool verbose = false;
};

struct SolveResult {
  Verdict verdict = Verdict::indeterminate;
  std::vector<Eigen::MatrixXd> blocks;  // X with A(X) = b when feasible
  int iterations = 0;
  double margin = 0.0;      // normalized homogenizing scale (> 0 certifies)
  double dual_bound = 0.0;  // upper bound on margin from the dual iterate
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  std::string message;
};

/// Find X >= 0 with <A_i, X> = b_i: maximize e subject to A(X) = e b,
/// tr(X) <= dim(X), X >= 0, by a primal-dual path-following method
/// (HKM direction, Mehrotra predictor-corrector).
SolveResult solve(const SDPProblem& p, const SolveOptions& opts = {});

// SDPA sparse format. The equality problem is the SDPA dual:
//   c_i = b_i, F_i = A_i (symmetric, off-diagonal entry = coef / 2), F_0 = 0.
std::string export_sdpa(const SDPProblem& p);
/// Throws ParseError.
SDPProblem parse_sdpa(const std::string& text);

struct StabilityCertificate {
  Rational eps;
  int deg = 0;
  int deriv_deg = 0;
  GConfig g = GConfig::sum;
  std::vector<BlockInfo> blocks;
  std::vector<RatMatrix> matrices;  // exact values of the solved blocks
  RKernelOp lyapunov;               // (M, N1, N2) including eps I
};

struct VerifyReport {
  bool pass = false;
  double max_residual = 0.0;  // relative to the largest derivative-side coefficient
  double residual_scale = 0.0;
  Provenance worst;           // where max_residual occurs
  std::vector<double> min_eigenvalues;  // per block, relative to its largest eigenvalue
  std::string message;
};

StabilityCertificate make_certificate(const PDESystem& sys, const SDPProblem& p, const SolveResult& r,
                                      GConfig g);

/// Rebuild the kernels from the stored blocks with exact arithmetic, rerun
/// the transforms and compare against Phi_Q. PASS iff max_residual <= 10 tol
/// and every min eigenvalue >= -10 tol.
VerifyReport verify_certificate(const StabilityCertificate& c, const PDESystem& sys, double tol);

std::string certificate_json(const StabilityCertificate& c, const VerifyReport& r);

}  // namespace pdelyap

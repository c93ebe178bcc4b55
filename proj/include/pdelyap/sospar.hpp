#pragma once

// Positive operators from a PSD Gram matrix P and monomial bases:
// (M, N1, N2) built from P and Z(s) = [1 .. s^d1] (x) I_n,
// Z(s,theta) = [s^i theta^j, i+j <= d2] (x) I_n, weighted by g(s) >= 0.
//
// P is partitioned conformally with [Z(s); lower integral; upper integral].

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "pdelyap/boundary.hpp"
#include "pdelyap/kernel.hpp"

namespace pdelyap {

enum class GChoice { one, boundary };

struct PhiBasis {
  std::size_t n = 1;
  int d1 = 0;  // -1 drops the Z(s) block (M = 0)
  int d2 = 0;
  GChoice g = GChoice::one;
  // Restrict the lower-integral factor Z(nu,s) to functions vanishing at
  // s = a (entries nu^i (s^j - a^j), j >= 1), and the upper one at s = b.
  // Then N1(a,a) = 0, resp. N1(b,b) = 0, for every P.
  bool lower_zero_at_a = false;
  bool upper_zero_at_b = false;

  std::size_t z1() const { return d1 < 0 ? 0 : static_cast<std::size_t>(d1 + 1); }
  std::size_t z2() const { return static_cast<std::size_t>((d2 + 1) * (d2 + 2) / 2); }
  std::size_t z_lower() const { return z2() - (lower_zero_at_a ? static_cast<std::size_t>(d2 + 1) : 0); }
  std::size_t z_upper() const { return z2() - (upper_zero_at_b ? static_cast<std::size_t>(d2 + 1) : 0); }
  /// Side length of P.
  std::size_t size() const { return n * (z1() + z_lower() + z_upper()); }
  /// Number of free entries of the symmetric P.
  std::size_t num_entries() const { return size() * (size() + 1) / 2; }
};

struct PhiParam {
  PhiBasis basis;
  RatMatrix P;  // symmetric, basis.size() square
};

/// Position of P(i,j) = P(j,i) in the row-major upper triangle of an m x m matrix.
inline std::size_t sym_index(std::size_t i, std::size_t j, std::size_t m) {
  if (i > j) std::swap(i, j);
  return i * m - i * (i - 1) / 2 + (j - i);
}

/// Monomials of Z(s,theta) in graded-lex order, as (s exponent, theta exponent).
std::vector<std::pair<int, int>> z2_exponents(int d2);

/// g as a polynomial in s.
RPoly weight_poly(GChoice g, const Rational& a, const Rational& b);

/// Throws DimensionError when P does not match the basis.
RKernelOp phi_kernels(const PhiParam& p, const Rational& a, const Rational& b);

/// Same kernels with symbolic P: coefficients are linear forms over
/// variable offset + sym_index(i, j, size). N2 is left zero unless with_n2.
KernelOp<LinForm> phi_linear_map(const PhiBasis& basis, const Rational& a, const Rational& b,
                                 std::uint32_t offset = 0, bool with_n2 = true);

/// Evaluate linear-form coefficients at values (indexed by variable).
RMatPoly evaluate_linear(const MatPoly<LinForm>& p, const std::vector<Rational>& values);

}  // namespace pdelyap

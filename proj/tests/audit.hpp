#pragma once

// Helpers shared by the certificate tests and the acceptance binary.

#include <random>
#include <string>

#include "pdelyap/driver.hpp"

namespace pdelyap::testing {

inline std::string problem_path(const std::string& name) { return std::string(PDELYAP_PROBLEM_DIR) + "/" + name + ".json"; }
inline std::string fixture_path(const std::string& name) { return std::string(PDELYAP_FIXTURE_DIR) + "/" + name; }

/// Corrupt the first nonempty Lyapunov block: bump its largest diagonal entry.
inline StabilityCertificate mutate(StabilityCertificate c) {
  for (std::size_t k = 0; k < c.blocks.size(); ++k) {
    if (c.blocks[k].role != BlockRole::lyapunov || c.matrices[k].empty()) continue;
    RatMatrix& P = c.matrices[k];
    std::size_t at = 0;
    for (std::size_t i = 1; i < P.size(); ++i)
      if (abs(P[i][i]) > abs(P[at][at])) at = i;
    P[at][at] += 1 + abs(P[at][at]);
    return c;
  }
  throw std::logic_error("certificate has no Lyapunov block to corrupt");
}

/// Small random SDP with dyadic data, so doubles print and parse exactly.
inline SDPProblem random_sdp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nb(0, 3), sz(1, 4), nm(0, 5), coef(-40, 40);
  SDPProblem p;
  const int blocks = nb(rng);
  for (int k = 0; k < blocks; ++k) p.block_sizes.push_back(static_cast<std::size_t>(sz(rng)));
  const int m = blocks ? nm(rng) : 0;
  for (int i = 0; i < m; ++i) {
    SDPConstraint c;
    c.rhs = coef(rng) / 8.0;
    for (std::uint32_t k = 0; k < p.block_sizes.size(); ++k)
      for (std::uint32_t a = 0; a < p.block_sizes[k]; ++a)
        for (std::uint32_t b = a; b < p.block_sizes[k]; ++b)
          if (rng() % 3 == 0) {
            const int v = coef(rng);
            if (v) c.terms.push_back({k, a, b, v / 16.0});
          }
    p.constraints.push_back(c);
  }
  return p;
}

}  // namespace pdelyap::testing

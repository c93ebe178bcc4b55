#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "pdelyap/sdp.hpp"

namespace pdelyap {

void PDESystem::validate() const {
  if (n == 0) throw DimensionError("system dimension must be positive");
  if (!(a < b)) throw std::invalid_argument("domain must satisfy a < b");
  for (const RMatPoly* A : {&A0, &A1, &A2}) {
    if (A->rows() != n || A->cols() != n) throw DimensionError("A0, A1, A2 must be n x n");
    if (A->var_mask() & ~1u) throw DimensionError("A0, A1, A2 must depend on s only");
  }
  if (B.rows() != 2 * n || B.cols() != 4 * n) throw DimensionError("boundary matrix must be 2n x 4n");
}

const char* to_string(GConfig g) {
  switch (g) {
    case GConfig::one:
      return "one";
    case GConfig::boundary:
      return "boundary";
    case GConfig::sum:
      return "sum";
  }
  return "?";
}

GConfig parse_gconfig(const std::string& s) {
  if (s == "one") return GConfig::one;
  if (s == "boundary") return GConfig::boundary;
  if (s == "sum") return GConfig::sum;
  throw std::invalid_argument("g must be one, boundary or sum");
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::feasible:
      return "feasible";
    case Verdict::infeasible:
      return "infeasible";
    case Verdict::indeterminate:
      return "indeterminate";
  }
  return "?";
}

std::string Provenance::str() const {
  std::ostringstream os;
  os << "N1(" << row << "," << col << ") coefficient of " << mono.str();
  return os.str();
}

Rational default_eps(const PDESystem& sys) {
  Rational big = 0;
  for (const auto& e : sys.A0.entries())
    for (const auto& t : e.terms()) big = std::max(big, Rational(abs(t.coef)));
  return Rational(1, 1000) * (1 + big);
}

int reachable_degree(int d2, GConfig g) { return 2 * d2 + (g == GConfig::one ? 1 : 3); }

int required_deriv_degree(int h_degree, GConfig g) {
  int d = 0;
  while (reachable_degree(d, g) < h_degree) ++d;
  return d;
}

namespace {

std::vector<GChoice> choices(GConfig g) {
  switch (g) {
    case GConfig::one:
      return {GChoice::one};
    case GConfig::boundary:
      return {GChoice::boundary};
    case GConfig::sum:
      break;
  }
  return {GChoice::one, GChoice::boundary};
}

// Arithmetic modulo the Mersenne prime 2^61 - 1.
constexpr std::uint64_t kP = (1ull << 61) - 1;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 z = static_cast<unsigned __int128>(a) * b;
  std::uint64_t r = static_cast<std::uint64_t>(z & kP) + static_cast<std::uint64_t>(z >> 61);
  if (r >= kP) r -= kP;
  return r;
}

std::uint64_t submod(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kP - b; }

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a);
    a = mulmod(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t invmod(std::uint64_t a) { return powmod(a, kP - 2); }

std::uint64_t to_mod(const Rational& q) {
  const std::uint64_t num = mpz_fdiv_ui(q.get_num_mpz_t(), kP);
  const std::uint64_t den = mpz_fdiv_ui(q.get_den_mpz_t(), kP);
  return mulmod(num, invmod(den));
}

struct ModRow {
  std::vector<std::pair<std::uint32_t, std::uint64_t>> e;  // sorted by key, nonzero
  std::uint64_t rhs = 0;
};

// r -= c * p
void axpy(ModRow& r, std::uint64_t c, const ModRow& p) {
  std::vector<std::pair<std::uint32_t, std::uint64_t>> out;
  out.reserve(r.e.size() + p.e.size());
  std::size_t i = 0, j = 0;
  while (i < r.e.size() || j < p.e.size()) {
    if (j == p.e.size() || (i < r.e.size() && r.e[i].first < p.e[j].first)) {
      out.push_back(r.e[i++]);
    } else if (i == r.e.size() || p.e[j].first < r.e[i].first) {
      out.emplace_back(p.e[j].first, submod(0, mulmod(c, p.e[j].second)));
      ++j;
    } else {
      const std::uint64_t v = submod(r.e[i].second, mulmod(c, p.e[j].second));
      if (v) out.emplace_back(r.e[i].first, v);
      ++i;
      ++j;
    }
  }
  r.e = std::move(out);
  r.rhs = submod(r.rhs, mulmod(c, p.rhs));
}

enum class RowStatus { independent, dependent, inconsistent };

// Incremental sparse elimination: classify each row against the previous ones.
class Eliminator {
 public:
  RowStatus add(ModRow r) {
    std::size_t idx = 0;
    while (idx < r.e.size()) {
      auto it = pivots_.find(r.e[idx].first);
      if (it == pivots_.end()) {
        ++idx;
        continue;
      }
      axpy(r, r.e[idx].second, it->second);
    }
    if (r.e.empty()) return r.rhs == 0 ? RowStatus::dependent : RowStatus::inconsistent;
    const std::uint64_t inv = invmod(r.e[0].second);
    for (auto& [k, v] : r.e) v = mulmod(v, inv);
    r.rhs = mulmod(r.rhs, inv);
    const std::uint32_t lead = r.e[0].first;
    pivots_.emplace(lead, std::move(r));
    return RowStatus::independent;
  }

 private:
  std::unordered_map<std::uint32_t, ModRow> pivots_;
};

}  // namespace

SDPProblem assemble(const PDESystem& sys, const AssembleOptions& opts) {
  sys.validate();
  if (opts.deg < 0) throw std::invalid_argument("degree must be non-negative");
  const BoundaryKernels bk = build_kernels(sys.B, sys.n, sys.a, sys.b);
  const std::size_t n = sys.n;
  const auto gs = choices(opts.g);

  SDPProblem p;
  p.eps = opts.eps ? *opts.eps : default_eps(sys);
  if (p.eps < 0) throw std::invalid_argument("eps must be non-negative");
  p.deg = opts.deg;

  std::vector<std::uint32_t> offsets;
  std::uint32_t next = 0;
  auto add_block = [&](BlockRole role, const PhiBasis& basis) {
    p.blocks.push_back({role, basis, {}});
    p.block_sizes.push_back(basis.size());
    offsets.push_back(next);
    next += static_cast<std::uint32_t>(basis.num_entries());
    return offsets.back();
  };

  using LPoly = Poly<LinForm>;
  KernelOp<LinForm> K = KernelOp<LinForm>::zero(n);
  for (GChoice g : gs) {
    const PhiBasis basis{n, opts.deg, opts.deg, g};
    K += phi_linear_map(basis, sys.a, sys.b, add_block(BlockRole::lyapunov, basis));
  }
  for (std::size_t i = 0; i < n; ++i) K.M(i, i) += LPoly(LinForm(p.eps));

  KernelOp<LinForm> V = weight_right(K, sys.A0);
  for (std::size_t i = 0; i < n; ++i) V.M(i, i) += LPoly(LinForm(p.eps));
  TwoKernel<LinForm> H = transform_L3(V, bk);
  if (!sys.A1.is_zero()) H += transform_L2(weight_right(K, sys.A1), bk);
  if (!sys.A2.is_zero()) H += transform_L1(weight_right(K, sys.A2), bk);
  MatPoly<LinForm> S = H.K1 + transpose_swap(H.K2);
  p.h_degree = S.degree();

  const int need = required_deriv_degree(std::max(p.h_degree, 0), opts.g);
  if (opts.deriv_deg >= 0 && opts.deriv_deg < need)
    throw DegreeTooLow("derivative-side degree " + std::to_string(opts.deriv_deg) +
                           " cannot represent H of degree " + std::to_string(p.h_degree) +
                           "; need at least " + std::to_string(need),
                       need);
  p.deriv_deg = opts.deriv_deg >= 0 ? opts.deriv_deg : need;
  // Phi_Q.N1(c,c) is a sum of PSD integrals; when S(c,c) vanishes for every P
  // the directions of Q feeding it are zero in every solution, so leave them out.
  auto corner_zero = [&](const Rational& c) {
    Bindings at;
    at[static_cast<int>(Var::s)] = constant(c);
    at[static_cast<int>(Var::theta)] = constant(c);
    return substitute(S, at).is_zero();
  };
  const bool zero_a = corner_zero(sys.a), zero_b = corner_zero(sys.b);
  for (GChoice g : gs) {
    PhiBasis basis{n, -1, p.deriv_deg, g};
    basis.lower_zero_at_a = zero_a;
    basis.upper_zero_at_b = zero_b;
    S += phi_linear_map(basis, sys.a, sys.b, add_block(BlockRole::derivative, basis), false).N1;
  }

  // variable index -> (block, i, j)
  struct Slot {
    std::uint32_t block, i, j;
  };
  std::vector<Slot> slot(next);
  for (std::size_t k = 0; k < p.block_sizes.size(); ++k) {
    const std::size_t m = p.block_sizes[k];
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j)
        slot[offsets[k] + sym_index(i, j, m)] = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(i),
                                                 static_cast<std::uint32_t>(j)};
  }

  struct ExactRow {
    const LinForm* f;
    Provenance prov;
  };
  std::vector<ExactRow> rows;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& t : S(i, j).terms()) rows.push_back({&t.coef, {i, j, t.mono}});
  p.matched_rows = rows.size();

  // Facial reduction: a homogeneous row whose live terms are all diagonal
  // with one sign forces those diagonal entries, and their rows and columns, to 0.
  std::vector<std::vector<bool>> zero(p.block_sizes.size());
  for (std::size_t k = 0; k < zero.size(); ++k) zero[k].assign(p.block_sizes[k], false);
  auto live = [&](std::uint32_t v) { return !zero[slot[v].block][slot[v].i] && !zero[slot[v].block][slot[v].j]; };
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& r : rows) {
      if (r.f->constant() != 0) continue;
      int sign = 0;
      bool ok = true, any = false;
      for (const auto& [v, c] : r.f->terms()) {
        if (!live(v)) continue;
        const int sg = sgn(c);
        if (slot[v].i != slot[v].j || (sign != 0 && sg != sign)) {
          ok = false;
          break;
        }
        sign = sg;
        any = true;
      }
      if (!ok || !any) continue;
      for (const auto& [v, c] : r.f->terms())
        if (live(v)) zero[slot[v].block][slot[v].i] = true;
      changed = true;
    }
  }

  // compact the blocks
  std::vector<std::int64_t> new_block(p.block_sizes.size(), -1);
  std::vector<std::vector<std::uint32_t>> new_index(p.block_sizes.size());
  {
    std::vector<BlockInfo> blocks;
    std::vector<std::size_t> sizes;
    for (std::size_t k = 0; k < p.block_sizes.size(); ++k) {
      BlockInfo info = p.blocks[k];
      new_index[k].assign(p.block_sizes[k], 0);
      for (std::uint32_t i = 0; i < p.block_sizes[k]; ++i) {
        if (zero[k][i]) {
          ++p.zeroed_indices;
          continue;
        }
        new_index[k][i] = static_cast<std::uint32_t>(info.kept.size());
        info.kept.push_back(i);
      }
      if (info.kept.empty()) continue;
      new_block[k] = static_cast<std::int64_t>(blocks.size());
      sizes.push_back(info.kept.size());
      blocks.push_back(std::move(info));
    }
    p.blocks = std::move(blocks);
    p.block_sizes = std::move(sizes);
  }

  // Pivot on derivative-side unknowns first: they enter few rows each.
  const std::uint32_t first_deriv = offsets[gs.size()];
  auto key_of = [&](std::uint32_t v) { return v >= first_deriv ? v - first_deriv : v + (next - first_deriv); };

  Eliminator elim;
  for (const auto& r : rows) {
    const LinForm& f = *r.f;
    ModRow mr;
    for (const auto& [v, c] : f.terms())
      if (live(v)) mr.e.emplace_back(key_of(v), to_mod(c));
    std::sort(mr.e.begin(), mr.e.end());
    mr.rhs = to_mod(-f.constant());
    const RowStatus st = elim.add(std::move(mr));
    if (st == RowStatus::dependent) {
      ++p.dropped_rows;
      continue;
    }
    if (st == RowStatus::inconsistent) {
      p.inconsistent.push_back(r.prov);
      continue;
    }
    SDPConstraint row;
    row.prov = r.prov;
    double scale = 0.0;
    for (const auto& [v, c] : f.terms()) {
      if (!live(v)) continue;
      const Slot& sl = slot[v];
      SDPTerm term{static_cast<std::uint32_t>(new_block[sl.block]), new_index[sl.block][sl.i],
                   new_index[sl.block][sl.j], c.get_d()};
      scale = std::max(scale, std::abs(term.coef));
      row.terms.push_back(term);
    }
    row.rhs = Rational(-f.constant()).get_d();
    for (auto& term : row.terms) term.coef /= scale;
    row.rhs /= scale;
    std::sort(row.terms.begin(), row.terms.end(), [](const SDPTerm& x, const SDPTerm& y) {
      return std::tie(x.block, x.i, x.j) < std::tie(y.block, y.i, y.j);
    });
    p.constraints.push_back(std::move(row));
  }
  return p;
}

}  // namespace pdelyap

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "pdelyap/sdp.hpp"

namespace pdelyap {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Entry {
  std::uint32_t p, q;
  double v;  // A[p][q] = A[q][p]
};

struct Part {
  std::uint32_t block;
  std::vector<Entry> entries;
  std::vector<std::uint32_t> support;
  MatrixXd sub;  // A restricted to support x support
};

struct Row {
  std::vector<Part> parts;
};

using Blocks = std::vector<MatrixXd>;

double inner(const Row& r, const Blocks& X) {
  double acc = 0.0;
  for (const auto& part : r.parts) {
    const MatrixXd& B = X[part.block];
    for (const auto& e : part.entries) acc += (e.p == e.q ? 1.0 : 2.0) * e.v * B(e.p, e.q);
  }
  return acc;
}

void add_scaled(const Row& r, double y, Blocks& out) {
  for (const auto& part : r.parts) {
    MatrixXd& B = out[part.block];
    for (const auto& e : part.entries) {
      B(e.p, e.q) += y * e.v;
      if (e.p != e.q) B(e.q, e.p) += y * e.v;
    }
  }
}

double dot(const Blocks& a, const Blocks& b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k].cwiseProduct(b[k]).sum();
  return acc;
}

double norm(const Blocks& a) { return std::sqrt(dot(a, a)); }

void symmetrize(MatrixXd& m) { m = 0.5 * (m + m.transpose()).eval(); }

// Largest step alpha <= cap keeping X + alpha dX positive definite.
double max_step(const MatrixXd& X, const MatrixXd& dX, double cap) {
  Eigen::LLT<MatrixXd> llt(X);
  if (llt.info() != Eigen::Success) return 0.0;
  const MatrixXd L = llt.matrixL();
  MatrixXd T = llt.matrixL().solve(dX);
  T = llt.matrixL().solve(T.transpose()).transpose();
  symmetrize(T);
  const double lmin = Eigen::SelfAdjointEigenSolver<MatrixXd>(T, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  if (lmin >= 0) return cap;
  return std::min(cap, -1.0 / lmin);
}

class Solver {
 public:
  Solver(const SDPProblem& p, const SolveOptions& o) : opts_(o) {
    sizes_ = p.block_sizes;
    sizes_.push_back(1);  // slack of the trace row
    const std::size_t nb = sizes_.size();
    m_ = p.constraints.size() + 1;
    rows_.resize(m_);
    f_ = VectorXd::Zero(static_cast<Eigen::Index>(m_));
    beta_ = VectorXd::Zero(static_cast<Eigen::Index>(m_));

    VectorXd b(static_cast<Eigen::Index>(m_ - 1));
    for (std::size_t i = 0; i + 1 < m_; ++i) b[static_cast<Eigen::Index>(i)] = p.constraints[i].rhs;
    bnorm_ = b.norm();
    for (std::size_t i = 0; i + 1 < m_; ++i) {
      const auto& c = p.constraints[i];
      std::vector<Part> parts;
      for (const auto& t : c.terms) {
        if (parts.empty() || parts.back().block != t.block) parts.push_back({t.block, {}, {}, {}});
        parts.back().entries.push_back({t.i, t.j, t.i == t.j ? t.coef : 0.5 * t.coef});
      }
      for (auto& part : parts) finish(part);
      rows_[i].parts = std::move(parts);
      f_[static_cast<Eigen::Index>(i)] = bnorm_ > 0 ? -c.rhs / bnorm_ : 0.0;
    }
    // trace row over every block, including the slack
    dim_x_ = 0;
    for (std::size_t k = 0; k + 1 < nb; ++k) dim_x_ += sizes_[k];
    for (std::size_t k = 0; k < nb; ++k) {
      Part part{static_cast<std::uint32_t>(k), {}, {}, {}};
      for (std::uint32_t d = 0; d < sizes_[k]; ++d) part.entries.push_back({d, d, 1.0});
      finish(part);
      rows_[m_ - 1].parts.push_back(std::move(part));
    }
    trace_bound_ = static_cast<double>(std::max<std::size_t>(dim_x_, 1));
    beta_[static_cast<Eigen::Index>(m_ - 1)] = trace_bound_;

    // block -> rows touching it
    touching_.resize(nb);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t k = 0; k < rows_[i].parts.size(); ++k)
        touching_[rows_[i].parts[k].block].push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(k)});
  }

  SolveResult run() {
    SolveResult res;
    // Phase 1: maximize the margin e until it is clearly positive, or until
    // the dual bound rules it out.
    State st = start();
    double e_found = 0.0;
    std::string why;
    int iters = 0;
    const bool stopped = ipm(st, f_, beta_, -1.0, iters, why, [&](const State& s, const Summary& sm) {
      res.margin = s.e;
      res.dual_bound = -sm.dobj;
      res.primal_residual = sm.pinf;
      res.dual_residual = sm.dinf;
      if (sm.dinf <= opts_.tol && -sm.dobj < opts_.tol) {
        res.verdict = Verdict::infeasible;
        res.message = "dual bound on the margin is below tolerance";
        return true;
      }
      const bool converged = sm.pinf <= opts_.tol && sm.dinf <= opts_.tol && sm.gap <= opts_.tol;
      if (s.e >= 100 * opts_.tol && (sm.rp_norm <= 1e-4 * s.e || converged)) {
        e_found = s.e;
        return true;
      }
      if (converged) {
        res.verdict = Verdict::infeasible;
        res.message = "optimal margin is below tolerance";
        return true;
      }
      return false;
    });
    res.iterations = iters;
    if (!stopped) {
      res.message = why;
      return res;
    }
    if (e_found <= 0) return res;

    // Phase 2: fix e at half the margin found and follow the central path of
    // the pure feasibility problem towards the relative interior, then polish.
    const double e_t = 0.5 * e_found;
    const VectorXd beta2 = beta_ - e_t * f_;
    const VectorXd zero = VectorXd::Zero(f_.size());
    State c = start();
    double last_rp = std::numeric_limits<double>::infinity(), last_mu = last_rp;
    double best_mu = last_mu;
    int iters2 = 0, since_best = 0;
    bool stalled = false;
    Blocks Xp;
    bool found = ipm(c, zero, beta2, 0.0, iters2, why, [&](const State& s, const Summary& sm) {
      // the central path stops improving once mu reaches roundoff
      if (sm.mu < 0.5 * best_mu) {
        best_mu = sm.mu;
        since_best = 0;
      } else if (++since_best >= 15) {
        stalled = true;
        return true;
      }
      if (sm.rp_norm > 1e-3 * e_t || (sm.rp_norm >= 0.5 * last_rp && sm.mu >= 0.1 * last_mu)) return false;
      last_rp = std::min(last_rp, sm.rp_norm);
      last_mu = std::min(last_mu, sm.mu);
      // delta < 0: projector metric; otherwise X + delta * max eig(X)
      for (double kappa : {0.0, 1e-8, 1e-6})
        for (double delta : {-1.0, 0.0, 1e-4})
          if (polish(s.X, e_t, kappa, delta, Xp)) return true;
      return false;
    });
    res.iterations += iters2;
    if (stalled) {
      found = false;
      why = "no progress towards the interior";
    }
    if (!found) {
      res.message = "margin " + std::to_string(e_found) + " found but no certificate: " + why;
      return res;
    }
    res.margin = e_t;
    finish_feasible(res, Xp, e_t);
    return res;
  }

 private:
  struct State {
    Blocks X, Z;
    VectorXd y;
    double e = 0.0;
  };

  struct Summary {
    double rp_norm, pinf, dinf, gap, mu, dobj;
  };

  State start() const {
    const std::size_t nb = sizes_.size();
    State st;
    st.X.resize(nb);
    st.Z.resize(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      const auto n = static_cast<Eigen::Index>(sizes_[k]);
      st.X[k] = (k + 1 < nb ? 0.5 : 0.5 * trace_bound_) * MatrixXd::Identity(n, n);
      st.Z[k] = MatrixXd::Identity(n, n);
    }
    st.y = VectorXd::Zero(static_cast<Eigen::Index>(m_));
    return st;
  }

  // Primal-dual path following (HKM direction, Mehrotra predictor-corrector) for
  //   min c_e e  s.t.  A(X) + f e = beta,  X >= 0,  e free.
  // Returns true once `check` accepts an iterate; false on failure or at the
  // iteration cap, with the reason in `why`.
  template <class Check>
  bool ipm(State& st, const VectorXd& f, const VectorXd& beta, double c_e, int& iters, std::string& why,
           Check check) const {
    const std::size_t nb = sizes_.size();
    const double N = static_cast<double>(dim_x_ + 1);
    Blocks& X = st.X;
    Blocks& Z = st.Z;
    VectorXd& y = st.y;
    double& e = st.e;
    Blocks Zinv(nb);
    for (int it = 0; it < opts_.max_iter; ++it) {
      iters = it + 1;
      VectorXd rp = beta - f * e;
      for (std::size_t i = 0; i < m_; ++i) rp[static_cast<Eigen::Index>(i)] -= inner(rows_[i], X);
      Blocks Rd(nb);
      for (std::size_t k = 0; k < nb; ++k) Rd[k] = -Z[k];
      for (std::size_t i = 0; i < m_; ++i) add_scaled(rows_[i], -y[static_cast<Eigen::Index>(i)], Rd);
      const double rf = c_e - f.dot(y);
      Summary sm;
      sm.mu = dot(X, Z) / N;
      sm.rp_norm = rp.norm();
      sm.pinf = sm.rp_norm / (1.0 + beta.norm());
      sm.dinf = norm(Rd) + std::abs(rf);
      const double pobj = c_e * e;
      sm.dobj = beta.dot(y);
      sm.gap = std::abs(pobj - sm.dobj) / (1.0 + std::abs(pobj) + std::abs(sm.dobj));
      if (opts_.verbose)
        std::fprintf(stderr, "it %3d  e %+.6e  dobj %+.6e  pinf %.2e  dinf %.2e  gap %.2e  mu %.2e\n", it, e,
                     sm.dobj, sm.pinf, sm.dinf, sm.gap, sm.mu);
      if (!std::isfinite(sm.pinf) || !std::isfinite(sm.dinf) || !std::isfinite(sm.mu)) {
        why = "numerical breakdown";
        return false;
      }
      if (check(static_cast<const State&>(st), static_cast<const Summary&>(sm))) return true;

      for (std::size_t k = 0; k < nb; ++k) {
        Eigen::LLT<MatrixXd> llt(Z[k]);
        if (llt.info() != Eigen::Success) {
          why = "dual iterate lost positive definiteness";
          return false;
        }
        Zinv[k] = llt.solve(MatrixXd::Identity(Z[k].rows(), Z[k].cols()));
        symmetrize(Zinv[k]);
      }
      MatrixXd M = schur(X, Zinv);
      Eigen::LLT<MatrixXd> chol(M);
      if (chol.info() != Eigen::Success) {
        M.diagonal().array() += 1e-14 * M.diagonal().cwiseAbs().maxCoeff();
        chol.compute(M);
        if (chol.info() != Eigen::Success) {
          why = "Schur complement is not positive definite";
          return false;
        }
      }
      const VectorXd Minv_f = chol.solve(f);
      const double fMf = f.dot(Minv_f);

      Blocks XRZ(nb);
      for (std::size_t k = 0; k < nb; ++k) XRZ[k] = X[k] * Rd[k] * Zinv[k];

      auto direction = [&](double sigma_mu, const Blocks* corr, Blocks& dX, VectorXd& dy, double& de, Blocks& dZ) {
        Blocks Hc(nb);
        for (std::size_t k = 0; k < nb; ++k) {
          Hc[k] = sigma_mu * Zinv[k] - X[k] - XRZ[k];
          if (corr) Hc[k] -= (*corr)[k];
          symmetrize(Hc[k]);
        }
        VectorXd g = rp;
        for (std::size_t i = 0; i < m_; ++i) g[static_cast<Eigen::Index>(i)] -= inner(rows_[i], Hc);
        const VectorXd Minv_g = chol.solve(g);
        de = fMf > 0 ? (f.dot(Minv_g) - rf) / fMf : 0.0;
        dy = Minv_g - de * Minv_f;
        dZ = Rd;
        for (std::size_t i = 0; i < m_; ++i) add_scaled(rows_[i], -dy[static_cast<Eigen::Index>(i)], dZ);
        dX.resize(nb);
        for (std::size_t k = 0; k < nb; ++k) {
          dX[k] = sigma_mu * Zinv[k] - X[k] - X[k] * dZ[k] * Zinv[k];
          if (corr) dX[k] -= (*corr)[k];
          symmetrize(dX[k]);
        }
        // refine against the primal linearization A(dX) + f de = rp
        for (int pass = 0; pass < 2; ++pass) {
          VectorXd rr = rp - f * de;
          for (std::size_t i = 0; i < m_; ++i) rr[static_cast<Eigen::Index>(i)] -= inner(rows_[i], dX);
          const VectorXd Minv_r = chol.solve(rr);
          const double dde = fMf > 0 ? f.dot(Minv_r) / fMf : 0.0;
          const VectorXd ddy = Minv_r - dde * Minv_f;
          Blocks S(nb);
          for (std::size_t k = 0; k < nb; ++k) S[k] = MatrixXd::Zero(X[k].rows(), X[k].cols());
          for (std::size_t i = 0; i < m_; ++i) add_scaled(rows_[i], ddy[static_cast<Eigen::Index>(i)], S);
          for (std::size_t k = 0; k < nb; ++k) {
            MatrixXd t = X[k] * S[k] * Zinv[k];
            symmetrize(t);
            dX[k] += t;
            dZ[k] -= S[k];
          }
          dy += ddy;
          de += dde;
        }
      };

      const double gamma = 0.95;
      Blocks dXa, dZa;
      VectorXd dya;
      double dea = 0.0;
      direction(0.0, nullptr, dXa, dya, dea, dZa);
      double ap = 1.0, ad = 1.0;
      for (std::size_t k = 0; k < nb; ++k) {
        ap = std::min(ap, max_step(X[k], dXa[k], 1.0));
        ad = std::min(ad, max_step(Z[k], dZa[k], 1.0));
      }
      double mu_aff = 0.0;
      for (std::size_t k = 0; k < nb; ++k) mu_aff += (X[k] + ap * dXa[k]).cwiseProduct(Z[k] + ad * dZa[k]).sum();
      mu_aff /= N;
      const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / sm.mu, 3.0), 0.0, 1.0);

      Blocks corr(nb);
      for (std::size_t k = 0; k < nb; ++k) corr[k] = dXa[k] * dZa[k] * Zinv[k];
      Blocks dX, dZ;
      VectorXd dy;
      double de = 0.0;
      direction(sigma * sm.mu, &corr, dX, dy, de, dZ);
      ap = 1.0;
      ad = 1.0;
      for (std::size_t k = 0; k < nb; ++k) {
        ap = std::min(ap, max_step(X[k], dX[k], 1.0 / gamma));
        ad = std::min(ad, max_step(Z[k], dZ[k], 1.0 / gamma));
      }
      ap = std::min(1.0, gamma * ap);
      ad = std::min(1.0, gamma * ad);
      if (ap < 1e-12 && ad < 1e-12) {
        why = "step length collapsed";
        return false;
      }
      for (std::size_t k = 0; k < nb; ++k) {
        X[k] += ap * dX[k];
        Z[k] += ad * dZ[k];
      }
      e += ap * de;
      y += ad * dy;
    }
    why = "iteration limit reached";
    return false;
  }

  static void finish(Part& part) {
    std::vector<std::uint32_t> s;
    for (const auto& e : part.entries) {
      s.push_back(e.p);
      s.push_back(e.q);
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    part.support = s;
    const auto c = static_cast<Eigen::Index>(s.size());
    part.sub = MatrixXd::Zero(c, c);
    auto pos = [&](std::uint32_t v) {
      return static_cast<Eigen::Index>(std::lower_bound(s.begin(), s.end(), v) - s.begin());
    };
    for (const auto& e : part.entries) {
      part.sub(pos(e.p), pos(e.q)) += e.v;
      if (e.p != e.q) part.sub(pos(e.q), pos(e.p)) += e.v;
    }
  }

  // M_ik = sum over blocks of tr(A_i X A_k Z^{-1})
  MatrixXd schur(const Blocks& X, const Blocks& Zinv) const {
    const auto m = static_cast<Eigen::Index>(m_);
    MatrixXd M = MatrixXd::Zero(m, m);
    for (std::size_t k = 0; k < sizes_.size(); ++k) {
      const auto& touch = touching_[k];
      for (std::size_t a = 0; a < touch.size(); ++a) {
        const Part& pa = rows_[touch[a].row].parts[touch[a].part];
        const auto c = static_cast<Eigen::Index>(pa.support.size());
        const auto n = X[k].rows();
        MatrixXd U(n, c), V(c, n);
        for (Eigen::Index t = 0; t < c; ++t) {
          U.col(t) = X[k].col(pa.support[static_cast<std::size_t>(t)]);
          V.row(t) = Zinv[k].row(pa.support[static_cast<std::size_t>(t)]);
        }
        const MatrixXd G = U * pa.sub * V;  // X A_i Z^{-1}
        for (std::size_t b = a; b < touch.size(); ++b) {
          const Part& pb = rows_[touch[b].row].parts[touch[b].part];
          double acc = 0.0;
          for (const auto& e : pb.entries)
            acc += e.p == e.q ? e.v * G(e.p, e.p) : e.v * (G(e.p, e.q) + G(e.q, e.p));
          M(touch[a].row, touch[b].row) += acc;
          if (b != a) M(touch[b].row, touch[a].row) += acc;
        }
      }
    }
    return M;
  }

  // Move X onto A(X) = e b / |b|. Eigen-directions of X below kappa times its
  // largest eigenvalue are dropped (they belong to a face every solution lies
  // on); the rest is corrected by X (sum w_i A_i) X, the least change in the
  // X-weighted norm, which keeps the correction inside the kept range.
  // With `weighted` false the metric is the Frobenius norm on the kept range
  // (correction P (sum w_i A_i) P, P the orthogonal projector), which is better
  // conditioned when X spans many orders of magnitude.
  bool polish(const Blocks& X, double e, double kappa, double delta, Blocks& out) const {
    const bool weighted = delta >= 0;
    const std::size_t m = m_ - 1;
    const std::size_t nb = X.size();
    Blocks Xr(nb), G(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(X[k]);
      VectorXd lam = es.eigenvalues();
      const double cut = kappa * std::max(lam.maxCoeff(), 0.0);
      VectorXd keep = VectorXd::Ones(lam.size());
      for (Eigen::Index t = 0; t < lam.size(); ++t)
        if (k + 1 < nb && lam[t] < cut) lam[t] = keep[t] = 0.0;
      Xr[k] = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
      if (weighted) {
        VectorXd gl = lam.array() + delta * std::max(lam.maxCoeff(), 0.0);
        for (Eigen::Index t = 0; t < lam.size(); ++t)
          if (keep[t] == 0.0) gl[t] = 0.0;
        G[k] = es.eigenvectors() * gl.asDiagonal() * es.eigenvectors().transpose();
      } else {
        G[k] = es.eigenvectors() * keep.asDiagonal() * es.eigenvectors().transpose();
      }
    }
    if (m == 0) {
      out = Xr;
      return true;
    }
    const MatrixXd W = schur(G, G).topLeftCorner(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    Eigen::LDLT<MatrixXd> ldlt(W);
    if (ldlt.info() != Eigen::Success) return false;
    out = Xr;
    const double target = 1e-2 * opts_.tol * e;
    double rn = 0.0;
    for (int pass = 0; pass < 6; ++pass) {
      VectorXd r(static_cast<Eigen::Index>(m));
      for (std::size_t i = 0; i < m; ++i)
        r[static_cast<Eigen::Index>(i)] = -e * f_[static_cast<Eigen::Index>(i)] - inner(rows_[i], out);
      rn = r.norm();
      if (rn <= target) break;
      const VectorXd w = ldlt.solve(r);
      if (!w.allFinite()) return false;
      Blocks S(nb);
      for (std::size_t k = 0; k < nb; ++k) S[k] = MatrixXd::Zero(out[k].rows(), out[k].cols());
      for (std::size_t i = 0; i < m; ++i) add_scaled(rows_[i], w[static_cast<Eigen::Index>(i)], S);
      for (std::size_t k = 0; k < nb; ++k) {
        out[k] += G[k] * S[k] * G[k];
        symmetrize(out[k]);
      }
    }
    if (!(rn <= target)) return false;
    for (std::size_t k = 0; k + 1 < nb; ++k) {
      const VectorXd lam = Eigen::SelfAdjointEigenSolver<MatrixXd>(out[k], Eigen::EigenvaluesOnly).eigenvalues();
      if (lam.minCoeff() < -opts_.tol * std::max(lam.maxCoeff(), 1e-300)) return false;
    }
    return true;
  }

  void finish_feasible(SolveResult& res, const Blocks& X, double e) const {
    res.verdict = Verdict::feasible;
    res.message = "certificate found";
    res.blocks.clear();
    // A(X) = e * b / |b|  =>  A(X |b| / e) = b
    const double scale = bnorm_ / e;
    for (std::size_t k = 0; k + 1 < sizes_.size(); ++k) {
      MatrixXd B = X[k] * scale;
      symmetrize(B);
      res.blocks.push_back(std::move(B));
    }
  }

  struct Touch {
    std::uint32_t row;
    std::uint32_t part;
  };

  SolveOptions opts_;
  std::vector<std::size_t> sizes_;
  std::size_t m_ = 0;
  std::size_t dim_x_ = 0;
  std::vector<Row> rows_;
  std::vector<std::vector<Touch>> touching_;
  VectorXd f_, beta_;
  double bnorm_ = 0.0;
  double trace_bound_ = 1.0;
};

}  // namespace

SolveResult solve(const SDPProblem& p, const SolveOptions& opts) {
  SolveResult res;
  if (!p.inconsistent.empty()) {
    res.verdict = Verdict::infeasible;
    res.message = "constraints are inconsistent: " + p.inconsistent.front().str();
    return res;
  }
  for (const auto& c : p.constraints)
    for (const auto& t : c.terms)
      if (t.block >= p.block_sizes.size() || t.i > t.j || t.j >= p.block_sizes[t.block])
        throw DimensionError("constraint references an entry outside its block");
  bool zero_rhs = true;
  for (const auto& c : p.constraints) zero_rhs = zero_rhs && c.rhs == 0.0;
  if (zero_rhs) {
    res.verdict = Verdict::feasible;
    res.message = "zero right-hand side: X = 0";
    for (std::size_t s : p.block_sizes)
      res.blocks.push_back(MatrixXd::Zero(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)));
    return res;
  }
  return Solver(p, opts).run();
}

}  // namespace pdelyap

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "pdelyap/sdp.hpp"

namespace pdelyap {

namespace {

RatMatrix expand(const BlockInfo& info, const Eigen::MatrixXd& X) {
  RatMatrix P = rat_zeros(info.basis.size(), info.basis.size());
  for (std::size_t i = 0; i < info.kept.size(); ++i)
    for (std::size_t j = 0; j < info.kept.size(); ++j) {
      const double v = X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      P[info.kept[i]][info.kept[j]] = Rational(v);
    }
  // keep P exactly symmetric whatever the float round-off
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) P[i][j] = P[j][i];
  return P;
}

RKernelOp lyapunov_operator(const StabilityCertificate& c, const PDESystem& sys) {
  RKernelOp K = RKernelOp::zero(sys.n);
  for (std::size_t k = 0; k < c.blocks.size(); ++k)
    if (c.blocks[k].role == BlockRole::lyapunov) K += phi_kernels({c.blocks[k].basis, c.matrices[k]}, sys.a, sys.b);
  for (std::size_t i = 0; i < sys.n; ++i) K.M(i, i) += RPoly(c.eps);
  return K;
}

// -(H1 + H2(theta,s)^T) for the derivative of the functional built from K
RMatPoly derivative_target(const RKernelOp& K, const PDESystem& sys, const Rational& eps) {
  const BoundaryKernels bk = build_kernels(sys.B, sys.n, sys.a, sys.b);
  RKernelOp V = weight_right(K, sys.A0);
  for (std::size_t i = 0; i < sys.n; ++i) V.M(i, i) += RPoly(eps);
  RTwoKernel H = transform_L3(V, bk);
  if (!sys.A1.is_zero()) H += transform_L2(weight_right(K, sys.A1), bk);
  if (!sys.A2.is_zero()) H += transform_L1(weight_right(K, sys.A2), bk);
  return H.K1 + transpose_swap(H.K2);
}

double max_abs(const RMatPoly& p) {
  double m = 0.0;
  for (const auto& e : coefficients(p)) m = std::max(m, std::abs(e.value.get_d()));
  return m;
}

const char* role_name(BlockRole r) { return r == BlockRole::lyapunov ? "lyapunov" : "derivative"; }
const char* g_name(GChoice g) { return g == GChoice::one ? "one" : "boundary"; }

nlohmann::json coef_list(const RMatPoly& p) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : coefficients(p)) {
    nlohmann::json exps = nlohmann::json::array();
    for (auto x : e.mono.exp) exps.push_back(static_cast<int>(x));
    out.push_back({{"row", e.row}, {"col", e.col}, {"exponents", exps}, {"value", e.value.get_str()}});
  }
  return out;
}

}  // namespace

StabilityCertificate make_certificate(const PDESystem& sys, const SDPProblem& p, const SolveResult& r,
                                      GConfig g) {
  if (r.verdict != Verdict::feasible) throw std::invalid_argument("no certificate: solve did not return feasible");
  if (r.blocks.size() != p.blocks.size()) throw DimensionError("solution does not match the problem blocks");
  StabilityCertificate c;
  c.eps = p.eps;
  c.deg = p.deg;
  c.deriv_deg = p.deriv_deg;
  c.g = g;
  c.blocks = p.blocks;
  for (std::size_t k = 0; k < p.blocks.size(); ++k) {
    if (static_cast<std::size_t>(r.blocks[k].rows()) != p.blocks[k].kept.size())
      throw DimensionError("solution block size does not match the problem");
    c.matrices.push_back(expand(p.blocks[k], r.blocks[k]));
  }
  c.lyapunov = lyapunov_operator(c, sys);
  return c;
}

VerifyReport verify_certificate(const StabilityCertificate& c, const PDESystem& sys, double tol) {
  VerifyReport rep;
  try {
    sys.validate();
    if (c.blocks.size() != c.matrices.size()) throw DimensionError("certificate blocks and matrices differ in number");
    const RKernelOp K = lyapunov_operator(c, sys);
    const RMatPoly target = derivative_target(K, sys, c.eps);
    RMatPoly phi_q(sys.n, sys.n);
    for (std::size_t k = 0; k < c.blocks.size(); ++k)
      if (c.blocks[k].role == BlockRole::derivative)
        phi_q += phi_kernels({c.blocks[k].basis, c.matrices[k]}, sys.a, sys.b).N1;
    const RMatPoly diff = target + phi_q;

    rep.residual_scale = std::max({max_abs(target), max_abs(phi_q), 1e-300});
    for (const auto& e : coefficients(diff)) {
      const double r = std::abs(e.value.get_d()) / rep.residual_scale;
      if (r > rep.max_residual) {
        rep.max_residual = r;
        rep.worst = {e.row, e.col, e.mono};
      }
    }
    if (target.is_zero() && phi_q.is_zero()) rep.residual_scale = 0.0;

    for (const auto& P : c.matrices) {
      const auto m = static_cast<Eigen::Index>(P.size());
      Eigen::MatrixXd D(m, m);
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
          D(i, j) = P[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].get_d();
      double rel = 0.0;
      if (m > 0) {
        const Eigen::VectorXd lam = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(D, Eigen::EigenvaluesOnly).eigenvalues();
        const double top = std::max(std::abs(lam.maxCoeff()), std::abs(lam.minCoeff()));
        rel = top > 0 ? lam.minCoeff() / top : 0.0;
      }
      rep.min_eigenvalues.push_back(rel);
    }

    const bool residual_ok = rep.max_residual <= 10 * tol;
    const bool psd_ok = std::all_of(rep.min_eigenvalues.begin(), rep.min_eigenvalues.end(),
                                    [&](double v) { return v >= -10 * tol; });
    rep.pass = residual_ok && psd_ok;
    if (rep.pass) {
      rep.message = "PASS";
    } else if (!residual_ok) {
      rep.message = "FAIL: coefficient mismatch " + std::to_string(rep.max_residual) + " at " + rep.worst.str();
    } else {
      rep.message = "FAIL: a block is not positive semidefinite";
    }
  } catch (const std::exception& e) {
    rep.pass = false;
    rep.message = std::string("FAIL: ") + e.what();
  }
  return rep;
}

std::string certificate_json(const StabilityCertificate& c, const VerifyReport& r) {
  nlohmann::json j;
  j["eps"] = c.eps.get_str();
  j["deg"] = c.deg;
  j["deriv_deg"] = c.deriv_deg;
  j["g"] = to_string(c.g);
  nlohmann::json blocks = nlohmann::json::array();
  for (std::size_t k = 0; k < c.blocks.size(); ++k) {
    const BlockInfo& b = c.blocks[k];
    nlohmann::json m = nlohmann::json::array();
    for (const auto& row : c.matrices[k]) {
      nlohmann::json jr = nlohmann::json::array();
      for (const auto& v : row) jr.push_back(v.get_d());
      m.push_back(jr);
    }
    blocks.push_back({{"role", role_name(b.role)},
                      {"g", g_name(b.basis.g)},
                      {"d1", b.basis.d1},
                      {"d2", b.basis.d2},
                      {"lower_zero_at_a", b.basis.lower_zero_at_a},
                      {"upper_zero_at_b", b.basis.upper_zero_at_b},
                      {"kept", b.kept},
                      {"matrix", m}});
  }
  j["blocks"] = blocks;
  j["kernels"] = {{"M", coef_list(c.lyapunov.M)}, {"N1", coef_list(c.lyapunov.N1)}, {"N2", coef_list(c.lyapunov.N2)}};
  j["variables"] = {"s", "theta", "eta", "zeta", "nu"};
  j["verification"] = {{"pass", r.pass},
                       {"max_residual", r.max_residual},
                       {"residual_scale", r.residual_scale},
                       {"worst", r.worst.str()},
                       {"min_eigenvalues", r.min_eigenvalues},
                       {"message", r.message}};
  return j.dump(2);
}

}  // namespace pdelyap

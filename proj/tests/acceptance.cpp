// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [--expect-fail 9,...] [--only 1,2,...]
// Exit 0 iff the set of failing criteria equals the expected set.

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "audit.hpp"
#include "pdelyap/errors.hpp"
#include "pdelyap/oracle.hpp"

using namespace pdelyap;
using namespace pdelyap::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

// Bench rows are shared by criteria 4 to 11; compute each at most once.
std::map<std::string, BenchRow> rows;
const BenchRow& row(const std::string& name) {
  auto it = rows.find(name);
  if (it == rows.end()) {
    it = rows.emplace(name, bench_file(problem_path(name))).first;
    std::cout << "  [" << name << "] " << it->second.verdict << " in " << num(it->second.seconds, 4) << " s\n";
    for (const auto& l : it->second.log) std::cout << "    " << l << "\n";
  }
  return it->second;
}

Outcome lemmas() {
  const auto t0 = Clock::now();
  const auto res = run_lemma_suite(50, 20240601, 3, 6);
  bool ok = res.size() == 3;
  std::string d;
  for (const auto& r : res) {
    ok = ok && r.trials == 50 && r.passed == r.trials;
    d += "L" + std::to_string(r.lemma) + " " + std::to_string(r.passed) + "/" + std::to_string(r.trials) + ", ";
  }
  const double t = since(t0);
  ok = ok && t < 60.0;
  return {ok, d + "exact zero residuals required, " + num(t, 3) + " s (limit 60 s)"};
}

Outcome boundary() {
  std::mt19937_64 rng(31337);
  int good = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const Rational a = trial % 2 ? Rational(0) : Rational(-1, 2), b = trial % 2 ? Rational(1) : Rational(3, 2);
    const BoundaryMatrix B = random_boundary(rng, n, a, b);
    const BoundaryKernels k = build_kernels(B, n, a, b);
    std::vector<RPoly> raw(n);
    for (auto& p : raw) p = random_polynomial(rng, 0b1, 6);
    const auto x = project_admissible(B, k, raw);
    bool ok = true;
    for (const auto& r : boundary_residual(B, x, a, b)) ok = ok && sgn(r) == 0;
    std::vector<RPoly> xs(n), xss(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = derivative(x[i], Var::s);
      xss[i] = derivative(xs[i], Var::s);
    }
    ok = ok && reconstruct_x(k, xss) == x && reconstruct_xs(k, xss) == xs;
    good += ok;
  }
  bool periodic = false;
  try {
    build_kernels(BoundaryMatrix{{{1, -1, 0, 0}, {0, 0, 1, -1}}}, 1, 0, 1);
  } catch (const SingularB2&) {
    periodic = true;
  }
  return {good == 100 && periodic, std::to_string(good) + "/100 states exact, periodic conditions " +
                                       (periodic ? "rejected as singular" : "NOT rejected")};
}

Outcome positivity() {
  std::mt19937_64 rng(4242);
  int nonneg = 0, total = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const PhiBasis basis{1 + static_cast<std::size_t>(trial % 2), trial % 3 == 0 ? 0 : 1, trial % 2,
                         trial % 4 < 2 ? GChoice::one : GChoice::boundary};
    const std::size_t m = basis.size(), r = 1 + rng() % m;
    RatMatrix G = rat_zeros(r, m);
    for (auto& rowv : G)
      for (auto& v : rowv) v = Rational(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 3));
    RatMatrix P = rat_zeros(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < r; ++k) P[i][j] += G[k][i] * G[k][j];
    const RKernelOp K = phi_kernels(PhiParam{basis, P}, 0, 1);
    for (int k = 0; k < 20; ++k) {
      std::vector<RPoly> x(basis.n);
      for (auto& p : x) p = random_polynomial(rng, 0b1, 4);
      ++total;
      nonneg += sgn(inner_product(x, K, x, 0, 1)) >= 0;
    }
  }
  const RKernelOp I3 = phi_kernels(PhiParam{{1, 0, 0, GChoice::one}, rat_identity(3)}, 0, 1);
  const Rational v = inner_product({constant(1)}, I3, {constant(1)}, 0, 1);
  return {nonneg == total && total == 1000 && v == Rational(5, 3),
          std::to_string(nonneg) + "/" + std::to_string(total) + " nonnegative, P = I3 gives " + v.get_str()};
}

std::string describe(const BenchRow& r) {
  std::string s = r.verdict;
  if (r.certified) s += ", certified " + r.label + " = " + num(*r.certified, 8);
  if (r.reference) s += ", reference " + num(*r.reference);
  if (r.relative_gap) s += ", gap " + num(100 * *r.relative_gap, 3) + "%";
  s += ", d = " + std::to_string(r.deg) + ", " + num(r.seconds, 4) + " s";
  return s;
}

Outcome within(const std::string& name, double gap) {
  const BenchRow& r = row(name);
  const bool ok = r.verdict == "certified-stable" && r.relative_gap && *r.relative_gap <= gap;
  return {ok, describe(r) + " (limit " + num(100 * gap) + "%)"};
}

Outcome example1() {
  const BenchRow& r = row("ex1");
  const bool ok = r.verdict == "certified-stable" && r.certified && *r.certified >= 9.82 && *r.certified <= 9.8696 &&
                  r.relative_gap && *r.relative_gap <= 0.005 && r.deg == 1 && r.seconds <= 300;
  return {ok, describe(r) + " (need [9.82, 9.8696], gap <= 0.5%, <= 300 s)"};
}

Outcome reaches(const std::string& name, double target) {
  const BenchRow& r = row(name);
  const bool ok = r.verdict == "certified-stable" && r.certified && *r.certified >= target * (1 - 1e-12) && r.deg <= 2;
  return {ok, describe(r)};
}

Outcome example6() {
  const BenchRow& r = row("ex6");
  return {r.verdict == "certified-stable", describe(r)};
}

Outcome scaling() {
  bool ok = true;
  std::string d;
  for (const char* name : {"ex7_n1", "ex7_n2", "ex7_n5"}) {
    try {
      const BenchRow& r = row(name);
      ok = ok && r.deg == 1;
      d += std::string(name) + " " + num(r.seconds, 4) + " s (" + r.verdict + "), ";
    } catch (const std::exception& e) {
      ok = false;
      d += std::string(name) + " error: " + e.what() + ", ";
    }
  }
  return {ok, d + "times logged, not asserted"};
}

Outcome audit() {
  bool ok = true;
  std::string d;
  for (const char* name : {"ex1", "ex2", "ex3", "ex4", "ex5", "ex6"}) {
    const BenchRow& r = row(name);
    d += std::string(name) + ": ";
    if (r.verdict != "certified-stable") {
      d += "no certified verdict to audit; ";
      continue;
    }
    if (!r.certificate) {
      ok = false;
      d += "certified but no certificate; ";
      continue;
    }
    const PDESystem sys = instantiate(load_problem(problem_path(name)), r.value);
    const VerifyReport v = verify_certificate(*r.certificate, sys, 1e-8);
    const VerifyReport m = verify_certificate(mutate(*r.certificate), sys, 1e-8);
    ok = ok && v.pass && !m.pass;
    d += std::string("recheck ") + (v.pass ? "PASS" : "FAIL") + ", mutated " + (m.pass ? "PASS (bad)" : "FAIL") + "; ";
  }
  return {ok, d};
}

Outcome sdpa() {
  bool ok = true;
  std::string d;
  SDPProblem one;
  one.block_sizes = {2};
  one.constraints.push_back({{{0, 0, 0, 1.0}, {0, 0, 1, 2.0}}, 1.0, {}});
  SDPProblem two;
  two.block_sizes = {2, 1};
  two.constraints.push_back({{{0, 0, 0, 1.0}, {0, 1, 1, -0.5}}, 0.25, {}});
  two.constraints.push_back({{{0, 0, 1, 3.0}, {1, 0, 0, 1.0}}, -1.5, {}});
  const bool g1 = export_sdpa(one) == slurp(fixture_path("toy_one_block.dat-s"));
  const bool g2 = export_sdpa(two) == slurp(fixture_path("two_blocks.dat-s"));
  ok = g1 && g2;
  d += std::string("golden 1 ") + (g1 ? "match" : "DIFFER") + ", golden 2 " + (g2 ? "match" : "DIFFER");
  std::mt19937_64 rng(99);
  int stable = 0;
  for (int t = 0; t < 20; ++t) {
    const std::string text = export_sdpa(random_sdp(rng));
    stable += export_sdpa(parse_sdpa(text)) == text;
  }
  ok = ok && stable == 20;
  return {ok, d + ", " + std::to_string(stable) + "/20 round trips identical"};
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string expect, only;
  app.add_option("--expect-fail", expect, "comma separated criteria known to fail");
  app.add_option("--only", only, "comma separated criteria to run");
  CLI11_PARSE(app, argc, argv);
  const std::set<int> expected = parse_list(expect);
  const std::set<int> chosen = parse_list(only);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"lemma identities", lemmas},
      {"boundary reconstruction", boundary},
      {"cone positivity", positivity},
      {"example 1 bisection", example1},
      {"example 2 within 1%", [] { return within("ex2", 0.01); }},
      {"example 3 within 2%", [] { return within("ex3", 0.02); }},
      {"example 4 R = 2.93", [] { return reaches("ex4", 2.93); }},
      {"example 5 R = 21", [] { return reaches("ex5", 21); }},
      {"example 6 k = 0.1", example6},
      {"example 7 scaling", scaling},
      {"certificate audit", audit},
      {"SDPA export", sdpa},
  };

  std::set<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!chosen.empty() && !chosen.count(id)) continue;
    std::cout << "criterion " << id << ": " << criteria[i].first << "\n" << std::flush;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) failed.insert(id);
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << std::setw(2) << id << " " << criteria[i].first << ": " << o.detail
              << (!o.pass && expected.count(id) ? " [expected]" : "") << "\n"
              << std::flush;
  }

  std::set<int> want;
  for (int id : expected)
    if (chosen.empty() || chosen.count(id)) want.insert(id);
  std::cout << "summary: " << failed.size() << " failing";
  for (int id : failed) std::cout << " " << id;
  std::cout << "; expected";
  for (int id : want) std::cout << " " << id;
  std::cout << "\n";
  return failed == want ? 0 : 1;
}

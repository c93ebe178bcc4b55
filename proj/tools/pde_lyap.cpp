// pde-lyap: stability certificates for coupled linear parabolic PDEs.
// Exit codes: 0 certified-stable (or success), 1 not certified, 2 error.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pdelyap/driver.hpp"
#include "pdelyap/oracle.hpp"

using namespace pdelyap;
using nlohmann::json;

namespace {

constexpr const char* kFormat = "pde-lyap/1";
constexpr const char* kNotCertified = "not certified (inconclusive; does not imply instability)";

struct Overrides {
  std::string param;
  int deg = -1;
  int deriv_deg = -1;
  std::string eps;
  std::string g;
  double tol = -1.0;

  RunOptions options() const {
    RunOptions o;
    if (deg >= 0) o.deg = deg;
    if (deriv_deg >= 0) o.deriv_deg = deriv_deg;
    if (!eps.empty()) o.eps = parse_rational(eps);
    if (!g.empty()) o.g = parse_gconfig(g);
    if (tol > 0) o.tol = tol;
    return o;
  }

  // NAME=VAL, where NAME must be the parameter declared by the file.
  std::optional<Rational> value(const ProblemFile& f) const {
    if (param.empty()) return std::nullopt;
    const auto eq = param.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--param expects NAME=VALUE");
    const std::string name = param.substr(0, eq);
    if (!f.parameter || f.parameter->name != name)
      throw std::invalid_argument("unknown parameter '" + name + "'" +
                                  (f.parameter ? " (the file declares '" + f.parameter->name + "')" : ""));
    return parse_rational(param.substr(eq + 1));
  }
};

void add_overrides(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--param", ov.param, "parameter value, NAME=VALUE");
  cmd->add_option("--deg", ov.deg, "Lyapunov basis degree d")->check(CLI::NonNegativeNumber);
  cmd->add_option("--deriv-deg", ov.deriv_deg, "derivative-side degree d'")->check(CLI::NonNegativeNumber);
  cmd->add_option("--eps", ov.eps, "strictness margin (exact rational, must be > 0 to certify)");
  cmd->add_option("--g", ov.g, "multiplier configuration")->check(CLI::IsMember({"one", "boundary", "sum"}));
  cmd->add_option("--tol", ov.tol, "solver tolerance")->check(CLI::PositiveNumber);
}

std::string rat(const Rational& r) { return r.get_str(); }

std::string dec(const Rational& r) {
  std::ostringstream os;
  os << std::setprecision(10) << r.get_d();
  return os.str();
}

int cmd_run(const std::string& file, const Overrides& ov, bool as_json) {
  const ProblemFile f = load_problem(file);
  const RunResult r = run_problem(f, ov.value(f), ov.options());
  const std::string verdict = r.certified ? "certified-stable" : "not-certified";
  if (as_json) {
    json j;
    j["format"] = kFormat;
    j["problem"] = f.name;
    j["verdict"] = verdict;
    if (r.value) j["parameter"] = {{"name", f.parameter->name}, {"value", rat(*r.value)}};
    j["deg"] = r.deg;
    j["deriv_deg"] = r.deriv_deg;
    j["eps"] = rat(r.eps);
    j["block_sizes"] = r.block_sizes;
    j["constraints"] = r.constraints;
    j["solver"] = {{"verdict", to_string(r.solve.verdict)}, {"iterations", r.solve.iterations},
                   {"margin", r.solve.margin},          {"dual_bound", r.solve.dual_bound},
                   {"message", r.solve.message}};
    j["seconds"] = r.seconds;
    j["message"] = r.message;
    if (r.certificate) j["certificate"] = json::parse(certificate_json(*r.certificate, r.verify));
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "# " << kFormat << " run\n";
    std::cout << "problem      " << (f.name.empty() ? file : f.name) << "\n";
    if (r.value) std::cout << "parameter    " << f.parameter->name << " = " << rat(*r.value) << "\n";
    std::cout << "degrees      d = " << r.deg << ", d' = " << r.deriv_deg << "\n";
    std::cout << "eps          " << rat(r.eps) << "\n";
    std::cout << "blocks      ";
    for (auto b : r.block_sizes) std::cout << " " << b;
    std::cout << "\nconstraints  " << r.constraints << "\n";
    std::cout << "solver       " << to_string(r.solve.verdict) << " after " << r.solve.iterations
              << " iterations (" << r.solve.message << ")\n";
    if (r.solve.verdict == Verdict::feasible) std::cout << "recheck      " << r.verify.message << "\n";
    if (r.solve.verdict == Verdict::feasible && !r.certified) std::cout << "note         " << r.message << "\n";
    std::cout << "time         " << std::setprecision(4) << r.seconds << " s\n";
    std::cout << "verdict      " << (r.certified ? "certified-stable" : kNotCertified) << "\n";
  }
  return r.certified ? 0 : 1;
}

int cmd_bisect(const std::string& file, const Overrides& ov, const std::string& name, const std::string& lo,
               const std::string& hi, const std::string& res, const std::string& dir) {
  const ProblemFile f = load_problem(file);
  if (!f.parameter) throw std::invalid_argument("the problem declares no parameter");
  if (!name.empty() && name != f.parameter->name)
    throw std::invalid_argument("unknown parameter '" + name + "' (the file declares '" + f.parameter->name + "')");
  const ParameterSpec& ps = *f.parameter;
  auto pick = [](const std::string& s, const std::optional<Rational>& d, const char* what) {
    if (!s.empty()) return parse_rational(s);
    if (d) return *d;
    throw std::invalid_argument(std::string("missing --") + what);
  };
  const Rational a = pick(lo, ps.lo, "lo"), b = pick(hi, ps.hi, "hi"), r = pick(res, ps.resolution, "res");
  const BisectDirection d = dir.empty() ? ps.direction : dir == "min" ? BisectDirection::min : BisectDirection::max;
  std::cout << "# " << kFormat << " bisect\n";
  std::cout << "bisecting " << ps.name << " over [" << dec(a) << ", " << dec(b) << "], resolution " << dec(r)
            << ", certifying the " << (d == BisectDirection::max ? "largest" : "smallest") << " value\n";
  const BisectionResult out = bisect(f, a, b, r, d, ov.options());
  for (const Probe& p : out.log)
    std::cout << "  " << ps.name << " = " << std::left << std::setw(14) << dec(p.value) << std::setw(16)
              << (p.certified ? "certified" : "not certified") << to_string(p.verdict) << ", " << p.iterations
              << " iterations, " << std::setprecision(4) << p.seconds << " s\n";
  std::cout << "certified    " << ps.name << " = " << dec(out.certified_value) << " (" << rat(out.certified_value)
            << ")\n";
  std::cout << "first failed " << ps.name << " = " << dec(out.first_uncertified) << "\n";
  std::cout << "recheck      " << out.final_verify.message << "\n";
  if (out.indeterminate_seen) std::cout << "note         some probes were indeterminate and counted as not certified\n";
  std::cout << "time         " << std::setprecision(4) << out.seconds << " s\n";
  return out.final_verify.pass ? 0 : 1;
}

int cmd_bench(const std::string& suite, bool as_json) {
  int threads = 1;
  if (const char* t = std::getenv("PDE_LYAP_THREADS")) threads = std::max(1, std::atoi(t));
  const auto rows = run_benchmark(suite, threads);
  if (as_json)
    std::cout << bench_json(rows);
  else
    std::cout << "# " << kFormat << " bench\n" << bench_table(rows);
  return 0;
}

int cmd_lemmas(int trials, std::uint64_t seed, int degree, int state_degree) {
  const auto results = run_lemma_suite(trials, seed, degree, state_degree);
  bool ok = true;
  std::cout << "# " << kFormat << " verify-lemmas\n";
  std::cout << std::left << std::setw(8) << "lemma" << std::setw(10) << "passed" << std::setw(10) << "trials"
            << std::setw(12) << "time [s]" << "result\n";
  for (const auto& r : results) {
    const bool pass = r.passed == r.trials;
    ok = ok && pass;
    std::cout << std::left << std::setw(8) << ("L" + std::to_string(r.lemma)) << std::setw(10) << r.passed
              << std::setw(10) << r.trials << std::setw(12) << std::setprecision(3) << r.seconds
              << (pass ? "PASS" : "FAIL (worst residual " + r.worst_residual.get_str() + ")") << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_export(const std::string& file, const std::string& out, const Overrides& ov) {
  const ProblemFile f = load_problem(file);
  std::optional<Rational> v = ov.value(f);
  if (!v && f.parameter) v = f.parameter->value;
  const RunOptions o = ov.options();
  AssembleOptions ao;
  ao.deg = o.deg.value_or(f.deg);
  ao.deriv_deg = o.deriv_deg.value_or(f.deriv_deg);
  ao.eps = o.eps ? o.eps : f.eps;
  ao.g = o.g.value_or(f.g);
  const SDPProblem p = assemble(instantiate(f, v), ao);
  std::ofstream os(out, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + out);
  os << export_sdpa(p);
  if (!os) throw std::runtime_error("error writing " + out);
  std::cout << "wrote " << out << ": " << p.constraints.size() << " constraints, " << p.block_sizes.size()
            << " blocks\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov stability certificates for coupled linear PDEs"};
  app.require_subcommand(1);

  Overrides run_ov;
  std::string run_file;
  bool run_json = false;
  auto* run = app.add_subcommand("run", "assemble, solve and verify one problem");
  run->add_option("FILE", run_file, "problem file")->required()->check(CLI::ExistingFile);
  add_overrides(run, run_ov);
  run->add_flag("--json", run_json, "print the result and certificate as JSON");

  Overrides bis_ov;
  std::string bis_file, bis_name, bis_lo, bis_hi, bis_res, bis_dir;
  auto* bis = app.add_subcommand("bisect", "bisect a parameter on the certified boundary");
  bis->add_option("FILE", bis_file, "problem file")->required()->check(CLI::ExistingFile);
  bis->add_option("--param", bis_name, "parameter name");
  bis->add_option("--lo", bis_lo, "bracket start (default from the file)");
  bis->add_option("--hi", bis_hi, "bracket end (default from the file)");
  bis->add_option("--res", bis_res, "resolution (default from the file)");
  bis->add_option("--direction", bis_dir, "certify the largest (max) or smallest (min) value")
      ->check(CLI::IsMember({"max", "min"}));
  bis->add_option("--deg", bis_ov.deg, "Lyapunov basis degree d")->check(CLI::NonNegativeNumber);
  bis->add_option("--deriv-deg", bis_ov.deriv_deg, "derivative-side degree d'")->check(CLI::NonNegativeNumber);
  bis->add_option("--eps", bis_ov.eps, "strictness margin");
  bis->add_option("--g", bis_ov.g, "multiplier configuration")->check(CLI::IsMember({"one", "boundary", "sum"}));
  bis->add_option("--tol", bis_ov.tol, "solver tolerance")->check(CLI::PositiveNumber);

  std::string suite;
  bool bench_as_json = false;
  auto* bench = app.add_subcommand("bench", "run the bundled examples (PDE_LYAP_THREADS caps concurrency)");
  bench->add_option("SUITE", suite, "ex1 .. ex7 or all")->required();
  bench->add_flag("--json", bench_as_json, "print JSON instead of a table");

  int trials = 50, degree = 3, state_degree = 6;
  std::uint64_t seed = 1;
  auto* lem = app.add_subcommand("verify-lemmas", "randomized exact check of the x_ss transforms");
  lem->add_option("--trials", trials, "trials per transform")->check(CLI::PositiveNumber);
  lem->add_option("--seed", seed, "random seed");
  lem->add_option("--degree", degree, "maximal kernel degree")->check(CLI::NonNegativeNumber);
  lem->add_option("--state-degree", state_degree, "maximal test state degree")->check(CLI::NonNegativeNumber);

  Overrides exp_ov;
  std::string exp_file, exp_out;
  auto* exp = app.add_subcommand("export-sdpa", "write the feasibility SDP in SDPA sparse format");
  exp->add_option("FILE", exp_file, "problem file")->required()->check(CLI::ExistingFile);
  exp->add_option("OUT", exp_out, "output .dat-s file")->required();
  add_overrides(exp, exp_ov);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(run_file, run_ov, run_json);
    if (*bis) return cmd_bisect(bis_file, bis_ov, bis_name, bis_lo, bis_hi, bis_res, bis_dir);
    if (*bench) return cmd_bench(suite, bench_as_json);
    if (*lem) return cmd_lemmas(trials, seed, degree, state_degree);
    if (*exp) return cmd_export(exp_file, exp_out, exp_ov);
  } catch (const std::exception& e) {
    std::cerr << "pde-lyap: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

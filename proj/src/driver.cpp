#include "pdelyap/driver.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#ifndef PDELYAP_PROBLEM_DIR
#define PDELYAP_PROBLEM_DIR "data/problems"
#endif

namespace pdelyap {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

Rational exact_decimal(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return parse_rational(std::string(buf, r.ptr));
}

}  // namespace

RunResult run_problem(const ProblemFile& f, const std::optional<Rational>& value, const RunOptions& o) {
  const auto t0 = Clock::now();
  RunResult res;
  res.value = value;
  if (!res.value && f.parameter) res.value = f.parameter->value;
  const PDESystem sys = instantiate(f, res.value);
  AssembleOptions ao;
  ao.deg = o.deg.value_or(f.deg);
  ao.deriv_deg = o.deriv_deg.value_or(f.deriv_deg);
  ao.eps = o.eps ? o.eps : f.eps;
  ao.g = o.g.value_or(f.g);
  const double tol = o.tol.value_or(f.tol);

  const SDPProblem p = assemble(sys, ao);
  res.deg = p.deg;
  res.deriv_deg = p.deriv_deg;
  res.eps = p.eps;
  res.block_sizes = p.block_sizes;
  res.constraints = p.constraints.size();
  SolveOptions so;
  so.tol = tol;
  res.solve = solve(p, so);
  if (res.solve.verdict == Verdict::feasible) {
    res.certificate = make_certificate(sys, p, res.solve, ao.g);
    res.verify = verify_certificate(*res.certificate, sys, tol);
    res.certified = res.verify.pass && p.eps > 0;
    if (!res.verify.pass)
      res.message = "solver returned a candidate that failed the exact recheck: " + res.verify.message;
    else if (!(p.eps > 0))
      res.message = "certificate found with eps = 0, which does not prove stability";
    else
      res.message = "certificate verified";
  } else {
    res.message = res.solve.message;
  }
  res.seconds = since(t0);
  return res;
}

BisectionResult bisect(const ProblemFile& f, const Rational& lo, const Rational& hi, const Rational& resolution,
                       BisectDirection direction, const RunOptions& o) {
  if (!f.parameter) throw std::invalid_argument("the problem declares no parameter to bisect over");
  if (!(lo < hi)) throw std::invalid_argument("empty bracket: need lo < hi");
  if (!(resolution > 0)) throw std::invalid_argument("resolution must be positive");
  const auto t0 = Clock::now();
  BisectionResult out;
  out.parameter = f.parameter->name;
  out.direction = direction;
  const double tol = o.tol.value_or(f.tol);

  std::optional<StabilityCertificate> best;
  auto probe = [&](const Rational& v) {
    RunResult r = run_problem(f, v, o);
    out.log.push_back({v, r.certified, r.solve.verdict, r.solve.iterations, r.seconds});
    if (r.solve.verdict == Verdict::indeterminate) out.indeterminate_seen = true;
    if (r.certified) best = std::move(r.certificate);
    return r.certified;
  };

  Rational good = direction == BisectDirection::max ? lo : hi;
  Rational bad = direction == BisectDirection::max ? hi : lo;
  const bool good_ok = probe(good);
  std::optional<StabilityCertificate> good_cert = best;
  const bool bad_ok = probe(bad);
  if (good_ok == bad_ok)
    throw std::invalid_argument(std::string("both ends of the bracket are ") +
                                (good_ok ? "certified" : "not certified") + "; widen the bracket");
  if (!good_ok)
    throw std::invalid_argument(std::string("the certified end is ") + (direction == BisectDirection::max ? "hi" : "lo") +
                                "; use the other direction");
  best = good_cert;
  while (abs(Rational(bad - good)) > resolution) {
    Rational mid = (good + bad) / 2;
    if (probe(mid))
      good = mid;
    else
      bad = mid;
  }
  out.certified_value = good;
  out.first_uncertified = bad;
  out.final_verify = verify_certificate(*best, instantiate(f, good), tol);
  out.certificate = std::move(best);
  out.seconds = since(t0);
  return out;
}

std::string problem_dir() {
  if (const char* d = std::getenv("PDE_LYAP_PROBLEMS")) return d;
  return PDELYAP_PROBLEM_DIR;
}

std::vector<std::string> suite_files(const std::string& suite) {
  namespace fs = std::filesystem;
  std::vector<std::string> out;
  const fs::path dir(problem_dir());
  if (!fs::is_directory(dir)) throw std::runtime_error("problem directory not found: " + dir.string());
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".json") continue;
    const std::string stem = e.path().stem().string();
    if (suite == "all" || stem == suite || stem.rfind(suite + "_", 0) == 0) out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw std::invalid_argument("unknown suite '" + suite + "'");
  return out;
}

BenchRow bench_file(const std::string& path) {
  const auto t0 = Clock::now();
  const ProblemFile f = load_problem(path);
  const BenchmarkSpec bs = f.benchmark.value_or(BenchmarkSpec{});
  BenchRow row;
  row.name = f.name.empty() ? std::filesystem::path(path).stem().string() : f.name;
  row.label = bs.label;
  row.reference = bs.reference;
  row.deg = f.deg;
  auto shown = [&](const Rational& v) { return bs.reciprocal ? 1.0 / v.get_d() : v.get_d(); };
  auto describe = [&](const RunResult& r) {
    std::string s = "d=" + std::to_string(r.deg) + " d'=" + std::to_string(r.deriv_deg);
    if (r.value) s += " " + f.parameter->name + "=" + num(r.value->get_d(), 10);
    s += ": " + std::string(r.certified ? "certified" : "not certified") + " (" + to_string(r.solve.verdict) +
         ", " + std::to_string(r.solve.iterations) + " iterations, " + num(r.seconds, 3) + " s; " + r.message + ")";
    return s;
  };
  std::optional<Rational> cert_value;
  bool certified = false;

  if (bs.mode == "bisect") {
    const ParameterSpec& ps = *f.parameter;
    if (!ps.lo || !ps.hi || !ps.resolution) throw std::invalid_argument(row.name + ": bisection needs lo, hi and resolution");
    const BisectionResult b = bisect(f, *ps.lo, *ps.hi, *ps.resolution, ps.direction);
    for (const Probe& p : b.log)
      row.log.push_back("d=" + std::to_string(f.deg) + " " + ps.name + "=" + num(p.value.get_d(), 10) + ": " +
                        (p.certified ? "certified" : "not certified") + " (" + to_string(p.verdict) + ", " +
                        std::to_string(p.iterations) + " iterations, " + num(p.seconds, 3) + " s)");
    row.log.push_back("bisection result " + ps.name + "=" + num(b.certified_value.get_d(), 10) + ", recheck " +
                      b.final_verify.message);
    row.indeterminate_seen = b.indeterminate_seen;
    if (b.final_verify.pass) {
      cert_value = b.certified_value;
      row.certificate = b.certificate;
      certified = true;
    }
    if (f.fallback_deg && bs.reference) {
      const Rational ref = bs.reciprocal ? Rational(1 / exact_decimal(*bs.reference)) : exact_decimal(*bs.reference);
      const bool reached = cert_value && (ps.direction == BisectDirection::max ? *cert_value >= ref : *cert_value <= ref);
      if (!reached) {
        RunOptions o;
        o.deg = *f.fallback_deg;
        const RunResult r = run_problem(f, ref, o);
        row.log.push_back("fallback at the reference value, " + describe(r));
        if (r.certified) {
          cert_value = ref;
          row.certificate = r.certificate;
          certified = true;
          row.deg = r.deg;
        }
      }
    }
  } else {
    RunResult r = run_problem(f, std::nullopt);
    row.log.push_back(describe(r));
    if (!r.certified && f.fallback_deg) {
      RunOptions o;
      o.deg = *f.fallback_deg;
      r = run_problem(f, std::nullopt, o);
      row.log.push_back(describe(r));
      if (r.certified) row.deg = r.deg;
    }
    certified = r.certified;
    if (r.solve.verdict == Verdict::indeterminate) row.indeterminate_seen = true;
    if (certified) row.certificate = r.certificate;
    if (certified && r.value) cert_value = *r.value;
  }
  row.verdict = certified ? "certified-stable" : "not-certified";
  row.value = cert_value;
  if (cert_value) row.certified = shown(*cert_value);
  if (row.certified && row.reference && *row.reference != 0)
    row.relative_gap = std::abs(*row.certified - *row.reference) / std::abs(*row.reference);
  row.seconds = since(t0);
  return row;
}

std::vector<BenchRow> run_benchmark(const std::string& suite, int threads) {
  const std::vector<std::string> files = suite_files(suite);
  std::vector<BenchRow> rows(files.size());
  const std::size_t width = static_cast<std::size_t>(std::max(threads, 1));
  for (std::size_t start = 0; start < files.size(); start += width) {
    std::vector<std::future<BenchRow>> jobs;
    for (std::size_t k = start; k < std::min(files.size(), start + width); ++k)
      jobs.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, bench_file, files[k]));
    for (std::size_t k = 0; k < jobs.size(); ++k) rows[start + k] = jobs[k].get();
  }
  return rows;
}

std::string bench_table(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(10) << "problem" << std::setw(8) << "param" << std::setw(14) << "certified"
     << std::setw(12) << "reference" << std::setw(12) << "rel. gap" << std::setw(4) << "d" << std::setw(11)
     << "time [s]" << "verdict\n";
  for (const BenchRow& r : rows) {
    os << std::left << std::setw(10) << r.name << std::setw(8) << (r.label.empty() ? "-" : r.label) << std::setw(14)
       << (r.certified ? num(*r.certified, 8) : "-") << std::setw(12) << (r.reference ? num(*r.reference) : "-")
       << std::setw(12) << (r.relative_gap ? num(*r.relative_gap, 3) : "-") << std::setw(4) << r.deg << std::setw(11)
       << num(r.seconds, 4) << r.verdict << (r.indeterminate_seen ? " (some probes indeterminate)" : "") << "\n";
  }
  for (const BenchRow& r : rows) {
    os << "\n" << r.name << ":\n";
    for (const auto& l : r.log) os << "  " << l << "\n";
  }
  return os.str();
}

std::string bench_json(const std::vector<BenchRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const BenchRow& r : rows) {
    nlohmann::json j;
    j["problem"] = r.name;
    j["parameter"] = r.label;
    j["verdict"] = r.verdict;
    j["certified"] = r.certified ? nlohmann::json(*r.certified) : nlohmann::json(nullptr);
    j["reference"] = r.reference ? nlohmann::json(*r.reference) : nlohmann::json(nullptr);
    j["relative_gap"] = r.relative_gap ? nlohmann::json(*r.relative_gap) : nlohmann::json(nullptr);
    j["deg"] = r.deg;
    j["seconds"] = r.seconds;
    j["indeterminate_seen"] = r.indeterminate_seen;
    j["log"] = r.log;
    out.push_back(j);
  }
  return out.dump(2) + "\n";
}

}  // namespace pdelyap

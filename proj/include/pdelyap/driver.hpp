#pragma once

// Single runs, parameter bisection and the bundled benchmark suite.
// "certified" means a Lyapunov certificate was found and passed the exact
// recheck; anything else is "not certified", which says nothing about
// instability.

#include <optional>
#include <string>
#include <vector>

#include "pdelyap/problem.hpp"

namespace pdelyap {

/// Overrides for the options stored in the problem file.
struct RunOptions {
  std::optional<int> deg;
  std::optional<int> deriv_deg;
  std::optional<Rational> eps;
  std::optional<GConfig> g;
  std::optional<double> tol;
};

struct RunResult {
  bool certified = false;
  std::optional<Rational> value;  // parameter value used
  int deg = 0;
  int deriv_deg = 0;
  Rational eps;
  std::vector<std::size_t> block_sizes;
  std::size_t constraints = 0;
  SolveResult solve;
  VerifyReport verify;  // meaningful when solve.verdict is feasible
  std::optional<StabilityCertificate> certificate;
  double seconds = 0.0;
  std::string message;
};

/// Assemble, solve and verify. DegreeTooLow and input errors propagate.
RunResult run_problem(const ProblemFile& f, const std::optional<Rational>& value, const RunOptions& o = {});

struct Probe {
  Rational value;
  bool certified = false;
  Verdict verdict = Verdict::indeterminate;
  int iterations = 0;
  double seconds = 0.0;
};

struct BisectionResult {
  std::string parameter;
  BisectDirection direction = BisectDirection::max;
  Rational certified_value;   // best certified probe
  Rational first_uncertified; // nearest probe that was not certified
  std::vector<Probe> log;
  bool indeterminate_seen = false;  // some probe was iteration-capped or stalled
  VerifyReport final_verify;        // recheck of the certificate at certified_value
  std::optional<StabilityCertificate> certificate;  // found at certified_value
  double seconds = 0.0;
};

/// Bisection on the certified / not-certified boundary. For direction max
/// the certified side is lo, for min it is hi. Throws std::invalid_argument
/// on an empty bracket, non-positive resolution, or ends with equal verdicts.
BisectionResult bisect(const ProblemFile& f, const Rational& lo, const Rational& hi, const Rational& resolution,
                       BisectDirection direction, const RunOptions& o = {});

struct BenchRow {
  std::string name;
  std::string label;
  std::string verdict;  // "certified-stable" or "not-certified"
  std::optional<double> certified;  // in reported units
  std::optional<Rational> value;     // certified parameter value, file units
  std::optional<StabilityCertificate> certificate;
  std::optional<double> reference;
  std::optional<double> relative_gap;
  int deg = 0;
  double seconds = 0.0;
  bool indeterminate_seen = false;
  std::vector<std::string> log;
};

/// Problem directory: $PDE_LYAP_PROBLEMS, else the bundled data/problems.
std::string problem_dir();
/// Files for a suite name (ex1 .. ex7, or "all"), sorted.
std::vector<std::string> suite_files(const std::string& suite);
/// Runs every file of the suite, at most `threads` at a time.
std::vector<BenchRow> run_benchmark(const std::string& suite, int threads = 1);
BenchRow bench_file(const std::string& path);

std::string bench_table(const std::vector<BenchRow>& rows);
std::string bench_json(const std::vector<BenchRow>& rows);

}  // namespace pdelyap

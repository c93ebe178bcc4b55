#include <sstream>

#include "audit.hpp"
#include "doctest.h"
#include "pdelyap/errors.hpp"

using namespace pdelyap;
using pdelyap::testing::problem_path;

namespace {
const RPoly S = var(Var::s);
const RPoly LAM = var(kParamVar);

std::string minimal(const std::string& a0) {
  return "{\n  \"n\": 1,\n  \"domain\": [0, 1],\n  \"A0\": [[" + a0 +
         "]],\n  \"A2\": [[\"1\"]],\n  \"B\": [[1, 0, 0, 0], [0, 1, 0, 0]],\n"
         "  \"parameter\": {\"name\": \"lam\", \"value\": \"2\"}\n}\n";
}
}  // namespace

TEST_CASE("expressions parse to exact polynomials") {
  CHECK(parse_expression("s^2 - 1") == S * S - constant(1));
  CHECK(parse_rational("0.2") == Rational(1, 5));
  CHECK(parse_rational("1/21") == Rational(1, 21));
  CHECK(parse_rational("2.5e-3") == Rational(1, 400));
  CHECK(parse_expression("-(s+1)^2") == -((S + constant(1)) * (S + constant(1))));
  const RPoly e = parse_expression("-.5*s^3+1.3*s^2-1.5*s+.7+lam", "lam");
  const RPoly want = constant(Rational(-1, 2)) * S * S * S + constant(Rational(13, 10)) * S * S -
                     constant(Rational(3, 2)) * S + constant(Rational(7, 10)) + LAM;
  CHECK(e == want);
  CHECK(parse_expression(format_expression(e, "lam"), "lam") == e);
  CHECK(parse_expression("2*s/4") == constant(Rational(1, 2)) * S);
}

TEST_CASE("expression errors carry a position") {
  auto column = [](const std::string& text, const std::string& param = "") {
    try {
      (void)parse_expression(text, param);
    } catch (const ParseError& e) {
      return e.column();
    }
    return 0;
  };
  CHECK(column("s +* 2") == 4);
  CHECK(column("s + x") == 5);
  CHECK(column("lam * s") == 1);
  CHECK(column("(s + 1") == 7);
  CHECK(column("s / s") == 5);
  CHECK(column("s ^ -1") == 5);
  CHECK(column("1 / 0") == 5);
}

TEST_CASE("problem files round trip") {
  const ProblemFile f = parse_problem(minimal("\"lam + s^2\""));
  CHECK(f.n == 1);
  CHECK(f.A0(0, 0) == LAM + S * S);
  CHECK(f.A1.is_zero());
  CHECK(f.parameter->value == Rational(2));
  const std::string text = serialize_problem(f);
  CHECK(parse_problem(text) == f);
  CHECK(serialize_problem(parse_problem(text)) == text);

  for (const char* name : {"ex1", "ex3", "ex4", "ex5", "ex6", "ex7_n5"}) {
    const ProblemFile g = load_problem(problem_path(name));
    CHECK(parse_problem(serialize_problem(g)) == g);
  }
}

TEST_CASE("problem file errors") {
  try {
    (void)parse_problem(minimal("\"lam + q\""));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
    CHECK(std::string(e.what()).find("q") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_problem("{\"n\": 1,\n \"domain\": [0, 1] \"B\": []}"), ParseError);
  CHECK_THROWS_AS(parse_problem("{\"n\": 2, \"domain\": [0, 1], \"A0\": [[\"1\"]], \"B\": []}"), DimensionError);
  ProblemFile f = parse_problem(minimal("\"lam\""));
  f.parameter->value.reset();
  CHECK_THROWS_AS(instantiate(f, std::nullopt), std::invalid_argument);
}

TEST_CASE("parameter substitution") {
  const ProblemFile f = load_problem(problem_path("ex3"));
  const PDESystem sys = instantiate(f, Rational(4));
  CHECK(sys.A0(0, 0) == constant(Rational(-1, 2)) * S * S * S + constant(Rational(13, 10)) * S * S -
                            constant(Rational(3, 2)) * S + constant(Rational(47, 10)));
  CHECK(sys.A2(0, 0) == S * S * S - S * S + constant(2));
}

TEST_CASE("run verdicts") {
  const ProblemFile f = load_problem(problem_path("ex1"));
  const RunResult ok = run_problem(f, Rational(9));
  CHECK(ok.certified);
  CHECK(ok.verify.pass);
  REQUIRE(ok.certificate);
  const RunResult no = run_problem(f, Rational(11));
  CHECK_FALSE(no.certified);
  RunOptions zero;
  zero.eps = Rational(0);
  CHECK_FALSE(run_problem(f, Rational(9), zero).certified);
}

TEST_CASE("bisection") {
  const ProblemFile f = load_problem(problem_path("ex1"));
  CHECK_THROWS_AS(bisect(f, Rational(5), Rational(5), Rational(1, 1000), BisectDirection::max), std::invalid_argument);
  CHECK_THROWS_AS(bisect(f, Rational(1), Rational(2), Rational(1, 1000), BisectDirection::max), std::invalid_argument);
  CHECK_THROWS_AS(bisect(f, Rational(1), Rational(20), Rational(0), BisectDirection::max), std::invalid_argument);

  const BisectionResult r = bisect(f, Rational(1), Rational(20), Rational(1, 10), BisectDirection::max);
  CHECK(r.first_uncertified - r.certified_value <= Rational(1, 10));
  CHECK(r.final_verify.pass);
  CHECK(r.certified_value > Rational(97, 10));
  CHECK(r.certified_value < Rational(9870, 1000));
  for (const Probe& a : r.log)
    for (const Probe& b : r.log)
      if (a.certified && !b.certified) CHECK(a.value < b.value);
}

TEST_CASE("benchmark suites") {
  CHECK(suite_files("ex7").size() == 3);
  CHECK(suite_files("all").size() == 9);
  CHECK_THROWS_AS(suite_files("ex9"), std::invalid_argument);
  const BenchRow row = bench_file(problem_path("ex2"));
  CHECK(row.verdict == "certified-stable");
  REQUIRE(row.certified);
  REQUIRE(row.relative_gap);
  CHECK(*row.relative_gap < 0.01);
  CHECK(bench_table({row}).find("ex2") != std::string::npos);
}

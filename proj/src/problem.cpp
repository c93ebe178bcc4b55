#include "pdelyap/problem.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pdelyap {

namespace {

using nlohmann::json;

// Terms are in graded-lex order, so a constant term comes first.
Rational constant_of(const RPoly& p) {
  if (p.is_zero() || p.terms().front().mono.degree() != 0) return 0;
  return p.terms().front().coef;
}

class ExprParser {
 public:
  ExprParser(const std::string& text, const std::string& param) : t_(text), param_(param) {}

  RPoly parse() {
    RPoly p = expr();
    skip();
    if (i_ < t_.size()) fail("unexpected '" + std::string(1, t_[i_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, 1, static_cast<int>(std::min(i_, t_.size())) + 1);
  }
  void skip() {
    while (i_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < t_.size() && t_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  RPoly expr() {
    RPoly p = term();
    for (;;) {
      if (eat('+'))
        p += term();
      else if (eat('-'))
        p -= term();
      else
        return p;
    }
  }

  RPoly term() {
    RPoly p = unary();
    for (;;) {
      if (eat('*')) {
        p = p * unary();
      } else if (eat('/')) {
        skip();
        const std::size_t at = i_;
        const RPoly d = unary();
        if (d.var_mask() != 0 || d.is_zero()) {
          i_ = at;
          fail("divisor must be a nonzero constant");
        }
        p = p * RPoly(1 / constant_of(d));
      } else {
        return p;
      }
    }
  }

  RPoly unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  RPoly power() {
    RPoly base = atom();
    if (!eat('^')) return base;
    skip();
    const std::size_t start = i_;
    while (i_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[i_]))) ++i_;
    if (start == i_) fail("expected a non-negative integer exponent");
    int e = 0;
    const auto r = std::from_chars(t_.data() + start, t_.data() + i_, e);
    if (r.ec != std::errc() || e > 64) {
      i_ = start;
      fail("exponent too large");
    }
    RPoly out(1);
    for (int k = 0; k < e; ++k) out = out * base;
    return out;
  }

  RPoly atom() {
    skip();
    if (i_ >= t_.size()) fail("unexpected end of expression");
    const char c = t_[i_];
    if (c == '(') {
      ++i_;
      RPoly p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return RPoly(number());
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = i_;
      while (i_ < t_.size() && (std::isalnum(static_cast<unsigned char>(t_[i_])) || t_[i_] == '_')) ++i_;
      const std::string id = t_.substr(start, i_ - start);
      if (id == "s") return var(Var::s);
      if (!param_.empty() && id == param_) return var(kParamVar);
      i_ = start;
      fail("unknown symbol '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Rational number() {
    const std::size_t start = i_;
    std::string digits;
    int scale = 0;
    while (i_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[i_]))) digits += t_[i_++];
    if (i_ < t_.size() && t_[i_] == '.') {
      ++i_;
      while (i_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[i_]))) {
        digits += t_[i_++];
        --scale;
      }
    }
    if (digits.empty()) {
      i_ = start;
      fail("malformed number");
    }
    if (i_ < t_.size() && (t_[i_] == 'e' || t_[i_] == 'E')) {
      std::size_t j = i_ + 1;
      bool neg = false;
      if (j < t_.size() && (t_[j] == '+' || t_[j] == '-')) neg = t_[j++] == '-';
      const std::size_t es = j;
      while (j < t_.size() && std::isdigit(static_cast<unsigned char>(t_[j]))) ++j;
      if (es == j) {
        i_ = j;
        fail("malformed exponent");
      }
      int e = 0;
      const auto r = std::from_chars(t_.data() + es, t_.data() + j, e);
      if (r.ec != std::errc() || e > 4000) {
        i_ = es;
        fail("exponent too large");
      }
      scale += neg ? -e : e;
      i_ = j;
    }
    mpz_class num(digits), ten = 1;
    for (int k = 0; k < std::abs(scale); ++k) ten *= 10;
    Rational q = scale >= 0 ? Rational(num * ten) : Rational(num, ten);
    q.canonicalize();
    return q;
  }

  const std::string& t_;
  const std::string& param_;
  std::size_t i_ = 0;
};

// 1-based line and column of byte offset `pos`.
std::pair<int, int> line_col(const std::string& text, std::size_t pos) {
  int line = 1, col = 1;
  for (std::size_t k = 0; k < pos && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, 1, 1); }

  // Map an expression error to its position in the file.
  RPoly expression(const json& v, const std::string& where, const std::string& param) const {
    const std::string s = scalar_text(v, where);
    try {
      return parse_expression(s, param);
    } catch (const ParseError& e) {
      const std::size_t at = text_.find('"' + s + '"');
      auto [line, col] = at == std::string::npos ? std::pair{1, 1} : line_col(text_, at + 1);
      throw ParseError(where + ": " + strip_position(e.what()), line, col + e.column() - 1);
    }
  }

  Rational rational(const json& v, const std::string& where) const {
    const RPoly p = expression(v, where, "");
    if (p.var_mask() != 0) fail(where + ": expected a constant");
    return constant_of(p);
  }

  static std::string scalar_text(const json& v, const std::string& where) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_float()) {
      char buf[64];
      const auto r = std::to_chars(buf, buf + sizeof buf, v.get<double>());
      return std::string(buf, r.ptr);
    }
    throw ParseError(where + ": expected a number or an expression string", 1, 1);
  }

 private:
  static std::string strip_position(const std::string& w) {
    const auto at = w.rfind(" at line ");
    return at == std::string::npos ? w : w.substr(0, at);
  }
  const std::string& text_;
};

const json& need(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'", 1, 1);
  return j.at(key);
}

std::string rat_text(const Rational& q) { return q.get_str(); }

}  // namespace

RPoly parse_expression(const std::string& text, const std::string& param) {
  return ExprParser(text, param).parse();
}

Rational parse_rational(const std::string& text) {
  const RPoly p = parse_expression(text);
  if (p.var_mask() != 0) throw ParseError("expected a constant", 1, 1);
  return constant_of(p);
}

std::string format_expression(const RPoly& p, const std::string& param) {
  if (p.is_zero()) return "0";
  std::string out;
  const auto& terms = p.terms();
  for (std::size_t k = terms.size(); k-- > 0;) {
    const auto& t = terms[k];
    Rational c = t.coef;
    const bool neg = sgn(c) < 0;
    if (neg) c = -c;
    out += out.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
    std::vector<std::string> factors;
    const bool has_vars = t.mono.degree() > 0;
    if (!has_vars || c != 1) factors.push_back(rat_text(c));
    for (int v = 0; v < kNumVars; ++v) {
      const int e = t.mono.exp[v];
      if (e == 0) continue;
      std::string name = static_cast<Var>(v) == Var::s ? "s" : static_cast<Var>(v) == kParamVar ? param : "";
      if (name.empty()) throw std::invalid_argument("expression uses a variable other than s and the parameter");
      factors.push_back(e == 1 ? name : name + "^" + std::to_string(e));
    }
    for (std::size_t f = 0; f < factors.size(); ++f) out += (f ? "*" : "") + factors[f];
  }
  return out;
}

ProblemFile parse_problem(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string what = e.what();
    if (auto at = what.find("syntax error"); at != std::string::npos) what = what.substr(at);
    throw ParseError(what, line, col);
  }
  if (!j.is_object()) throw ParseError("problem file must be a JSON object", 1, 1);
  const Reader rd(text);
  ProblemFile f;
  try {
    f.name = j.value("name", "");
    f.description = j.value("description", "");
    const json& n = need(j, "n");
    if (!n.is_number_integer() || n.get<long long>() < 1) throw ParseError("'n' must be a positive integer", 1, 1);
    f.n = n.get<std::size_t>();
    const json& dom = need(j, "domain");
    if (!dom.is_array() || dom.size() != 2) throw ParseError("'domain' must be [a, b]", 1, 1);
    f.a = rd.rational(dom[0], "domain[0]");
    f.b = rd.rational(dom[1], "domain[1]");

    if (j.contains("parameter")) {
      const json& pj = j.at("parameter");
      ParameterSpec ps;
      ps.name = need(pj, "name").get<std::string>();
      if (ps.name.empty() || ps.name == "s" || !(std::isalpha(static_cast<unsigned char>(ps.name[0])) || ps.name[0] == '_'))
        throw ParseError("invalid parameter name '" + ps.name + "'", 1, 1);
      for (char c : ps.name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
          throw ParseError("invalid parameter name '" + ps.name + "'", 1, 1);
      if (pj.contains("value")) ps.value = rd.rational(pj.at("value"), "parameter.value");
      if (pj.contains("lo")) ps.lo = rd.rational(pj.at("lo"), "parameter.lo");
      if (pj.contains("hi")) ps.hi = rd.rational(pj.at("hi"), "parameter.hi");
      if (pj.contains("resolution")) ps.resolution = rd.rational(pj.at("resolution"), "parameter.resolution");
      const std::string dir = pj.value("direction", "max");
      if (dir != "max" && dir != "min") throw ParseError("parameter.direction must be max or min", 1, 1);
      ps.direction = dir == "max" ? BisectDirection::max : BisectDirection::min;
      f.parameter = ps;
    }
    const std::string param = f.parameter ? f.parameter->name : "";

    auto matrix = [&](const char* key) {
      RMatPoly m(f.n, f.n);
      if (!j.contains(key)) return m;  // absent means zero
      const json& mj = j.at(key);
      if (!mj.is_array() || mj.size() != f.n) throw DimensionError(std::string(key) + " must have n rows");
      for (std::size_t r = 0; r < f.n; ++r) {
        if (!mj[r].is_array() || mj[r].size() != f.n) throw DimensionError(std::string(key) + " must have n columns");
        for (std::size_t c = 0; c < f.n; ++c)
          m(r, c) = rd.expression(mj[r][c], std::string(key) + "[" + std::to_string(r) + "][" + std::to_string(c) + "]",
                                  param);
      }
      return m;
    };
    f.A0 = matrix("A0");
    f.A1 = matrix("A1");
    f.A2 = matrix("A2");

    const json& bj = need(j, "B");
    if (!bj.is_array() || bj.size() != 2 * f.n) throw DimensionError("B must have 2n rows");
    f.B = rat_zeros(2 * f.n, 4 * f.n);
    for (std::size_t r = 0; r < 2 * f.n; ++r) {
      if (!bj[r].is_array() || bj[r].size() != 4 * f.n) throw DimensionError("B must have 4n columns");
      for (std::size_t c = 0; c < 4 * f.n; ++c)
        f.B[r][c] = rd.rational(bj[r][c], "B[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }

    if (j.contains("options")) {
      const json& o = j.at("options");
      f.deg = o.value("deg", 1);
      if (o.contains("fallback_deg")) f.fallback_deg = o.at("fallback_deg").get<int>();
      f.deriv_deg = o.value("deriv_deg", -1);
      if (o.contains("eps")) f.eps = rd.rational(o.at("eps"), "options.eps");
      f.g = parse_gconfig(o.value("g", "sum"));
      f.tol = o.value("tol", 1e-8);
    }
    if (j.contains("benchmark")) {
      const json& bm = j.at("benchmark");
      BenchmarkSpec bs;
      bs.mode = bm.value("mode", "run");
      if (bs.mode != "run" && bs.mode != "bisect") throw ParseError("benchmark.mode must be run or bisect", 1, 1);
      if (bm.contains("reference")) bs.reference = bm.at("reference").get<double>();
      bs.reciprocal = bm.value("reciprocal", false);
      bs.label = bm.value("label", param);
      f.benchmark = bs;
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid field type: ") + e.what(), 1, 1);
  } catch (const std::invalid_argument& e) {
    if (dynamic_cast<const DimensionError*>(&e)) throw;
    throw ParseError(e.what(), 1, 1);
  }
  if (!f.parameter) {
    for (const RMatPoly* A : {&f.A0, &f.A1, &f.A2})
      if (A->var_mask() & ~1u) throw ParseError("expression uses a parameter but none is declared", 1, 1);
  }
  return f;
}

std::string serialize_problem(const ProblemFile& f) {
  json j;
  j["name"] = f.name;
  j["description"] = f.description;
  j["n"] = f.n;
  j["domain"] = {rat_text(f.a), rat_text(f.b)};
  const std::string param = f.parameter ? f.parameter->name : "";
  auto matrix = [&](const RMatPoly& m) {
    json out = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(format_expression(m(r, c), param));
      out.push_back(row);
    }
    return out;
  };
  j["A0"] = matrix(f.A0);
  j["A1"] = matrix(f.A1);
  j["A2"] = matrix(f.A2);
  json B = json::array();
  for (const auto& row : f.B) {
    json r = json::array();
    for (const auto& v : row) r.push_back(rat_text(v));
    B.push_back(r);
  }
  j["B"] = B;
  if (f.parameter) {
    const ParameterSpec& p = *f.parameter;
    json pj;
    pj["name"] = p.name;
    if (p.value) pj["value"] = rat_text(*p.value);
    if (p.lo) pj["lo"] = rat_text(*p.lo);
    if (p.hi) pj["hi"] = rat_text(*p.hi);
    if (p.resolution) pj["resolution"] = rat_text(*p.resolution);
    pj["direction"] = p.direction == BisectDirection::max ? "max" : "min";
    j["parameter"] = pj;
  }
  json o;
  o["deg"] = f.deg;
  if (f.fallback_deg) o["fallback_deg"] = *f.fallback_deg;
  o["deriv_deg"] = f.deriv_deg;
  if (f.eps) o["eps"] = rat_text(*f.eps);
  o["g"] = to_string(f.g);
  o["tol"] = f.tol;
  j["options"] = o;
  if (f.benchmark) {
    json bm;
    bm["mode"] = f.benchmark->mode;
    if (f.benchmark->reference) bm["reference"] = *f.benchmark->reference;
    bm["reciprocal"] = f.benchmark->reciprocal;
    bm["label"] = f.benchmark->label;
    j["benchmark"] = bm;
  }
  return j.dump(2) + "\n";
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

PDESystem instantiate(const ProblemFile& f, const std::optional<Rational>& value) {
  PDESystem sys;
  sys.n = f.n;
  sys.a = f.a;
  sys.b = f.b;
  std::optional<Rational> v = value;
  if (!v && f.parameter) v = f.parameter->value;
  const bool uses = ((f.A0.var_mask() | f.A1.var_mask() | f.A2.var_mask()) >> static_cast<int>(kParamVar)) & 1u;
  if (uses && !v) throw std::invalid_argument("parameter '" + f.parameter->name + "' needs a value");
  auto sub = [&](const RMatPoly& m) {
    if (!uses) return m;
    Bindings bd;
    bd[static_cast<int>(kParamVar)] = constant(*v);
    return substitute(m, bd);
  };
  sys.A0 = sub(f.A0);
  sys.A1 = sub(f.A1);
  sys.A2 = sub(f.A2);
  sys.B = BoundaryMatrix{f.B};
  return sys;
}

}  // namespace pdelyap

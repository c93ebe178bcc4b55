#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <sstream>
#include <tuple>

#include "pdelyap/sdp.hpp"

namespace pdelyap {

namespace {

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct Token {
  std::string text;
  int line, column;
};

// Whitespace and the separators { } ( ) , split tokens.
std::vector<Token> tokenize(const std::string& line, int lineno) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto sep = [](char c) { return std::isspace(static_cast<unsigned char>(c)) || c == '{' || c == '}' || c == '(' ||
                                  c == ')' || c == ','; };
  while (i < line.size()) {
    if (sep(line[i])) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && !sep(line[i])) ++i;
    out.push_back({line.substr(start, i - start), lineno, static_cast<int>(start) + 1});
  }
  return out;
}

template <class T>
T number(const Token& t, const char* what) {
  T v{};
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  if (*first == '+') ++first;
  const auto r = std::from_chars(first, last, v);
  if (r.ec != std::errc() || r.ptr != last) throw ParseError(std::string("expected ") + what, t.line, t.column);
  return v;
}

}  // namespace

std::string export_sdpa(const SDPProblem& p) {
  std::ostringstream os;
  os << "* pde-lyap feasibility problem: find X >= 0 with F_i . X = c_i, F_0 = 0\n";
  os << p.constraints.size() << " = mDIM\n";
  os << p.block_sizes.size() << " = nBLOCK\n";
  for (std::size_t k = 0; k < p.block_sizes.size(); ++k) os << (k ? " " : "") << p.block_sizes[k];
  os << (p.block_sizes.empty() ? "= bLOCKsTRUCT\n" : " = bLOCKsTRUCT\n");
  if (p.constraints.empty()) return os.str();
  for (std::size_t i = 0; i < p.constraints.size(); ++i) os << (i ? " " : "") << fmt(p.constraints[i].rhs);
  os << "\n";
  for (std::size_t i = 0; i < p.constraints.size(); ++i)
    for (const auto& t : p.constraints[i].terms)
      os << i + 1 << ' ' << t.block + 1 << ' ' << t.i + 1 << ' ' << t.j + 1 << ' '
         << fmt(t.i == t.j ? t.coef : t.coef / 2) << "\n";
  return os.str();
}

SDPProblem parse_sdpa(const std::string& text) {
  // Collect tokens after the leading comment lines, remembering positions.
  std::vector<std::vector<Token>> lines;
  {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    bool header = true;
    while (std::getline(is, line)) {
      ++lineno;
      if (header && !line.empty() && (line[0] == '"' || line[0] == '*')) continue;
      header = false;
      // trailing "= name" labels are comments
      if (auto eq = line.find('='); eq != std::string::npos) line.resize(eq);
      auto toks = tokenize(line, lineno);
      if (!toks.empty()) lines.push_back(std::move(toks));
    }
  }
  std::vector<Token> toks;
  for (auto& l : lines)
    for (auto& t : l) toks.push_back(std::move(t));
  std::size_t pos = 0;
  const int last_line = lines.empty() ? 1 : lines.back().back().line;
  auto next = [&](const char* what) -> const Token& {
    if (pos >= toks.size()) throw ParseError(std::string("unexpected end of input, expected ") + what, last_line, 1);
    return toks[pos++];
  };

  SDPProblem p;
  const Token& tm = next("mDIM");
  const long m = number<long>(tm, "mDIM");
  if (m < 0) throw ParseError("mDIM must be non-negative", tm.line, tm.column);
  const Token& tb = next("nBLOCK");
  const long nb = number<long>(tb, "nBLOCK");
  if (nb < 0) throw ParseError("nBLOCK must be non-negative", tb.line, tb.column);
  for (long k = 0; k < nb; ++k) {
    const Token& t = next("block size");
    const long s = number<long>(t, "block size");
    if (s == 0) throw ParseError("block size must be nonzero", t.line, t.column);
    p.block_sizes.push_back(static_cast<std::size_t>(s < 0 ? -s : s));  // negative: diagonal block
  }
  p.constraints.resize(static_cast<std::size_t>(m));
  for (long i = 0; i < m; ++i) p.constraints[static_cast<std::size_t>(i)].rhs = number<double>(next("c entry"), "c entry");

  std::map<std::tuple<std::size_t, std::uint32_t, std::uint32_t, std::uint32_t>, double> entries;
  while (pos < toks.size()) {
    const Token& t0 = next("matno");
    const long mat = number<long>(t0, "matno");
    const Token& t1 = next("blkno");
    const long blk = number<long>(t1, "blkno");
    const Token& t2 = next("row");
    long i = number<long>(t2, "row");
    const Token& t3 = next("column");
    long j = number<long>(t3, "column");
    const Token& t4 = next("value");
    const double v = number<double>(t4, "value");
    if (mat < 0 || mat > m) throw ParseError("matrix number out of range", t0.line, t0.column);
    if (blk < 1 || blk > nb) throw ParseError("block number out of range", t1.line, t1.column);
    const long size = static_cast<long>(p.block_sizes[static_cast<std::size_t>(blk - 1)]);
    if (i < 1 || i > size) throw ParseError("row index out of range", t2.line, t2.column);
    if (j < 1 || j > size) throw ParseError("column index out of range", t3.line, t3.column);
    if (i > j) std::swap(i, j);
    if (mat == 0) {
      if (v != 0.0) throw ParseError("nonzero F_0 is not supported", t4.line, t4.column);
      continue;
    }
    const auto key = std::make_tuple(static_cast<std::size_t>(mat - 1), static_cast<std::uint32_t>(blk - 1),
                                     static_cast<std::uint32_t>(i - 1), static_cast<std::uint32_t>(j - 1));
    if (entries.count(key)) throw ParseError("duplicate entry", t0.line, t0.column);
    entries[key] = i == j ? v : 2 * v;
  }
  for (const auto& [key, v] : entries) {
    const auto& [mat, blk, i, j] = key;
    p.constraints[mat].terms.push_back({blk, i, j, v});
  }
  return p;
}

}  // namespace pdelyap

#include "ptsat/dimacs.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace ptsat {
namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
           c == '\v';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::int64_t to_int(std::string_view tok, std::size_t line) {
  std::int64_t v = 0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw DimacsError(line, "expected an integer, got '" + std::string(tok) +
                                "'");
  return v;
}

}  // namespace

Formula parse_dimacs(std::istream& in) {
  bool have_header = false;
  std::int64_t n = 0;
  std::int64_t m = 0;
  std::vector<std::vector<Lit>> clauses;
  std::vector<Lit> current;
  std::vector<std::size_t> seen;  // last clause index (+1) each var appeared in
  std::size_t current_line = 0;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == 'c') continue;
    if (line.front() == '%') break;
    if (line.front() == 'p') {
      if (have_header) throw DimacsError(line_no, "duplicate problem line");
      const auto t = tokens(line);
      if (t.size() != 4 || t[0] != "p" || t[1] != "cnf")
        throw DimacsError(line_no, "malformed problem line, expected 'p cnf n m'");
      n = to_int(t[2], line_no);
      m = to_int(t[3], line_no);
      if (n < 0 || m < 0 || n > 0x7fffffff)
        throw DimacsError(line_no, "invalid variable or clause count");
      seen.assign(static_cast<std::size_t>(n), 0);
      have_header = true;
      continue;
    }
    if (!have_header)
      throw DimacsError(line_no, "clause data before 'p cnf' header");
    for (auto tok : tokens(line)) {
      const auto lit = to_int(tok, line_no);
      if (lit == 0) {
        if (current.empty()) throw DimacsError(line_no, "empty clause");
        clauses.push_back(std::move(current));
        current.clear();
        if (clauses.size() > static_cast<std::size_t>(m))
          throw DimacsError(line_no, "more clauses than the declared " +
                                         std::to_string(m));
        continue;
      }
      const auto var = lit < 0 ? -lit : lit;
      if (var > n) {
        throw DimacsError(line_no, "variable " + std::to_string(var) +
                                       " exceeds declared n=" +
                                       std::to_string(n));
      }
      auto& mark = seen[static_cast<std::size_t>(var - 1)];
      if (mark == clauses.size() + 1)
        throw DimacsError(line_no, "variable " + std::to_string(var) +
                                       " appears twice in one clause");
      mark = clauses.size() + 1;
      if (current.empty()) current_line = line_no;
      current.push_back(Lit::from_dimacs(lit));
    }
  }
  if (!have_header) throw DimacsError(line_no, "missing 'p cnf' header");
  // Tolerate a final clause without its terminating 0.
  if (!current.empty()) {
    clauses.push_back(std::move(current));
    if (clauses.size() > static_cast<std::size_t>(m))
      throw DimacsError(current_line, "more clauses than the declared " +
                                          std::to_string(m));
  }
  if (clauses.size() != static_cast<std::size_t>(m)) {
    throw DimacsError(line_no, "declared " + std::to_string(m) +
                                   " clauses, found " +
                                   std::to_string(clauses.size()));
  }
  try {
    return Formula(static_cast<std::uint32_t>(n), clauses);
  } catch (const FormulaError& e) {
    throw DimacsError(line_no, e.what());
  }
}

Formula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

Formula read_dimacs_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return parse_dimacs(in);
  } catch (const DimacsError& e) {
    throw DimacsError(e.line(), path.string() + ": " + e.detail());
  }
}

std::string write_dimacs(const Formula& formula) {
  std::string out = "p cnf " + std::to_string(formula.num_vars()) + " " +
                    std::to_string(formula.num_clauses()) + "\n";
  for (ClauseId c = 0; c < formula.num_clauses(); ++c) {
    for (Lit l : formula.clause(c)) {
      out += std::to_string(l.dimacs());
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

void write_dimacs_file(const Formula& formula,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << write_dimacs(formula);
}

}  // namespace ptsat

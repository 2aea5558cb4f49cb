#pragma once

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ptsat/cnf.hpp"

namespace ptsat {

// Parse error carrying the 1-based line of the offending token (0 when the
// problem is only detectable at end of input).
class DimacsError : public std::runtime_error {
 public:
  DimacsError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line),
        detail_(what) {}
  std::size_t line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

// Reads `p cnf n m` followed by zero-terminated clauses. Comment lines start
// with 'c'; a line starting with '%' ends the input (legacy SATLIB trailer).
// CRLF line endings are accepted.
Formula parse_dimacs(std::istream& in);
Formula parse_dimacs(std::string_view text);
Formula read_dimacs_file(const std::filesystem::path& path);

std::string write_dimacs(const Formula& formula);
void write_dimacs_file(const Formula& formula,
                       const std::filesystem::path& path);

}  // namespace ptsat

#pragma once

#include <vector>

#include "ptsat/cnf.hpp"

namespace testutil {

inline ptsat::Formula formula(int n, const std::vector<std::vector<int>>& clauses) {
  std::vector<std::vector<ptsat::Lit>> out;
  for (const auto& c : clauses) {
    std::vector<ptsat::Lit> lits;
    for (int l : c) lits.push_back(ptsat::Lit::from_dimacs(l));
    out.push_back(lits);
  }
  return ptsat::Formula(static_cast<std::uint32_t>(n), out);
}

inline ptsat::Assignment bits(std::vector<int> v) {
  return ptsat::Assignment(v.begin(), v.end());
}

inline ptsat::Var x(int dimacs) { return ptsat::Var::from_dimacs(dimacs); }

}  // namespace testutil

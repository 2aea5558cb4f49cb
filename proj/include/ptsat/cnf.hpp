#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptsat {

// Variables are 0-based inside the library. DIMACS (and the user-facing CLI)
// numbers them from 1; Var::from_dimacs / Var::dimacs are the only crossing
// points between the two conventions.
struct Var {
  std::uint32_t index = 0;

  static constexpr Var from_dimacs(std::int64_t v) {
    return Var{static_cast<std::uint32_t>(v - 1)};
  }
  constexpr std::int64_t dimacs() const { return std::int64_t{index} + 1; }

  friend constexpr bool operator==(Var, Var) = default;
  friend constexpr auto operator<=>(Var, Var) = default;
};

// A literal packed as 2*var + negated, so the two polarities of a variable
// are adjacent and can index occurrence lists directly.
class Lit {
 public:
  constexpr Lit() = default;
  constexpr Lit(Var v, bool positive)
      : code_(2 * v.index + (positive ? 0u : 1u)) {}

  static constexpr Lit from_code(std::uint32_t code) {
    Lit l;
    l.code_ = code;
    return l;
  }
  static constexpr Lit from_dimacs(std::int64_t signed_var) {
    return signed_var > 0 ? Lit(Var::from_dimacs(signed_var), true)
                          : Lit(Var::from_dimacs(-signed_var), false);
  }

  constexpr Var var() const { return Var{code_ >> 1}; }
  constexpr bool positive() const { return (code_ & 1u) == 0; }
  constexpr std::uint32_t code() const { return code_; }
  constexpr Lit operator~() const { return from_code(code_ ^ 1u); }
  constexpr std::int64_t dimacs() const {
    return positive() ? var().dimacs() : -var().dimacs();
  }

  friend constexpr bool operator==(Lit, Lit) = default;
  friend constexpr auto operator<=>(Lit, Lit) = default;

 private:
  std::uint32_t code_ = 0;
};

using ClauseId = std::uint32_t;

class FormulaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Immutable CNF formula with per-literal occurrence lists. Safe to share
// between threads once constructed.
class Formula {
 public:
  // Throws FormulaError when a clause is empty, references a variable
  // >= num_vars, or mentions a variable twice (duplicate or complementary),
  // or when there are no clauses at all.
  Formula(std::uint32_t num_vars, const std::vector<std::vector<Lit>>& clauses);

  std::uint32_t num_vars() const { return num_vars_; }
  std::uint32_t num_clauses() const {
    return static_cast<std::uint32_t>(offsets_.size() - 1);
  }
  std::size_t num_literals() const { return lits_.size(); }

  std::span<const Lit> clause(ClauseId c) const {
    return {lits_.data() + offsets_[c], lits_.data() + offsets_[c + 1]};
  }
  std::span<const ClauseId> occurrences(Lit l) const {
    return {occ_.data() + occ_offsets_[l.code()],
            occ_.data() + occ_offsets_[l.code() + 1]};
  }

  std::vector<std::vector<Lit>> clauses() const;

  friend bool operator==(const Formula& a, const Formula& b) {
    return a.num_vars_ == b.num_vars_ && a.lits_ == b.lits_ &&
           a.offsets_ == b.offsets_;
  }

 private:
  std::uint32_t num_vars_;
  std::vector<Lit> lits_;
  std::vector<std::uint32_t> offsets_;
  // CSR layout: occurrences of literal code l are occ_[occ_offsets_[l] ..
  // occ_offsets_[l + 1]), in increasing clause order.
  std::vector<ClauseId> occ_;
  std::vector<std::uint32_t> occ_offsets_;
};

// One bit per variable, stored as bytes for cheap random access.
using Assignment = std::vector<std::uint8_t>;

bool literal_true(const Assignment& a, Lit l);

// Number of clauses violated by `a`, by direct evaluation.
std::uint32_t count_violated(const Formula& f, const Assignment& a);

// Assignment plus incremental bookkeeping: per-clause true-literal counts and
// the violated clause set (dense array + position index for O(1) membership,
// removal and uniform sampling). Single owner; never shared between threads.
class SearchState {
 public:
  // Throws std::invalid_argument if the assignment length does not match.
  SearchState(const Formula& formula, Assignment assignment);

  const Formula& formula() const { return *formula_; }
  const Assignment& assignment() const { return assignment_; }
  std::uint32_t energy() const {
    return static_cast<std::uint32_t>(violated_.size());
  }
  bool value(Var v) const { return assignment_[v.index] != 0; }

  std::span<const ClauseId> violated() const { return violated_; }
  bool is_violated(ClauseId c) const { return violated_pos_[c] != kAbsent; }
  std::uint32_t sat_count(ClauseId c) const { return sat_count_[c]; }

  // Clauses that become violated / satisfied if v flipped. Neither mutates.
  std::uint32_t break_value(Var v) const;
  std::uint32_t make_value(Var v) const;

  void flip(Var v);

  // Equal when the assignments agree and the bookkeeping agrees clause by
  // clause. The storage order of the violated array is not compared.
  friend bool operator==(const SearchState& a, const SearchState& b);

 private:
  static constexpr std::uint32_t kAbsent = 0xffffffffu;

  void check(Var v) const;
  void add_violated(ClauseId c);
  void remove_violated(ClauseId c);

  const Formula* formula_;
  Assignment assignment_;
  std::vector<std::uint32_t> sat_count_;
  std::vector<ClauseId> violated_;
  std::vector<std::uint32_t> violated_pos_;
};

}  // namespace ptsat

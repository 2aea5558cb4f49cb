#include "ptsat/cnf.hpp"

#include <algorithm>
#include <string>

namespace ptsat {

Formula::Formula(std::uint32_t num_vars,
                 const std::vector<std::vector<Lit>>& clauses)
    : num_vars_(num_vars) {
  if (clauses.empty()) throw FormulaError("formula has no clauses");
  offsets_.reserve(clauses.size() + 1);
  offsets_.push_back(0);
  std::vector<std::uint32_t> seen(num_vars, 0);
  std::uint32_t stamp = 0;
  for (const auto& clause : clauses) {
    ++stamp;
    const auto id = std::to_string(offsets_.size());
    if (clause.empty()) throw FormulaError("clause " + id + " is empty");
    for (Lit l : clause) {
      const auto v = l.var().index;
      if (v >= num_vars) {
        throw FormulaError("clause " + id + " references variable " +
                           std::to_string(l.var().dimacs()) + " > " +
                           std::to_string(num_vars));
      }
      if (seen[v] == stamp) {
        throw FormulaError("clause " + id + " mentions variable " +
                           std::to_string(l.var().dimacs()) + " twice");
      }
      seen[v] = stamp;
      lits_.push_back(l);
    }
    offsets_.push_back(static_cast<std::uint32_t>(lits_.size()));
  }

  occ_offsets_.assign(2 * std::size_t{num_vars} + 1, 0);
  for (Lit l : lits_) ++occ_offsets_[l.code() + 1];
  for (std::size_t i = 1; i < occ_offsets_.size(); ++i)
    occ_offsets_[i] += occ_offsets_[i - 1];
  occ_.resize(lits_.size());
  std::vector<std::uint32_t> fill(occ_offsets_.begin(), occ_offsets_.end() - 1);
  for (ClauseId c = 0; c < num_clauses(); ++c)
    for (Lit l : clause(c)) occ_[fill[l.code()]++] = c;
}

std::vector<std::vector<Lit>> Formula::clauses() const {
  std::vector<std::vector<Lit>> out;
  out.reserve(num_clauses());
  for (ClauseId c = 0; c < num_clauses(); ++c) {
    auto span = clause(c);
    out.emplace_back(span.begin(), span.end());
  }
  return out;
}

bool literal_true(const Assignment& a, Lit l) {
  return (a[l.var().index] != 0) == l.positive();
}

std::uint32_t count_violated(const Formula& f, const Assignment& a) {
  std::uint32_t violated = 0;
  for (ClauseId c = 0; c < f.num_clauses(); ++c) {
    auto lits = f.clause(c);
    if (std::none_of(lits.begin(), lits.end(),
                     [&](Lit l) { return literal_true(a, l); }))
      ++violated;
  }
  return violated;
}

SearchState::SearchState(const Formula& formula, Assignment assignment)
    : formula_(&formula), assignment_(std::move(assignment)) {
  if (assignment_.size() != formula.num_vars()) {
    throw std::invalid_argument(
        "assignment has " + std::to_string(assignment_.size()) +
        " entries, formula has " + std::to_string(formula.num_vars()) +
        " variables");
  }
  for (auto& bit : assignment_) bit = bit ? 1 : 0;
  const auto m = formula.num_clauses();
  sat_count_.assign(m, 0);
  violated_pos_.assign(m, kAbsent);
  for (ClauseId c = 0; c < m; ++c) {
    for (Lit l : formula.clause(c))
      if (literal_true(assignment_, l)) ++sat_count_[c];
    if (sat_count_[c] == 0) add_violated(c);
  }
}

void SearchState::check(Var v) const {
  if (v.index >= assignment_.size()) {
    throw std::out_of_range("variable " + std::to_string(v.dimacs()) +
                            " outside 1.." +
                            std::to_string(assignment_.size()));
  }
}

void SearchState::add_violated(ClauseId c) {
  violated_pos_[c] = static_cast<std::uint32_t>(violated_.size());
  violated_.push_back(c);
}

void SearchState::remove_violated(ClauseId c) {
  const auto pos = violated_pos_[c];
  const ClauseId last = violated_.back();
  violated_[pos] = last;
  violated_pos_[last] = pos;
  violated_.pop_back();
  violated_pos_[c] = kAbsent;
}

std::uint32_t SearchState::break_value(Var v) const {
  check(v);
  const Lit true_lit(v, value(v));
  std::uint32_t breaks = 0;
  for (ClauseId c : formula_->occurrences(true_lit))
    if (sat_count_[c] == 1) ++breaks;
  return breaks;
}

std::uint32_t SearchState::make_value(Var v) const {
  check(v);
  const Lit false_lit(v, !value(v));
  std::uint32_t makes = 0;
  for (ClauseId c : formula_->occurrences(false_lit))
    if (sat_count_[c] == 0) ++makes;
  return makes;
}

void SearchState::flip(Var v) {
  check(v);
  const Lit was_true(v, value(v));
  for (ClauseId c : formula_->occurrences(was_true))
    if (--sat_count_[c] == 0) add_violated(c);
  for (ClauseId c : formula_->occurrences(~was_true))
    if (sat_count_[c]++ == 0) remove_violated(c);
  assignment_[v.index] ^= 1;
}

bool operator==(const SearchState& a, const SearchState& b) {
  if (a.formula_ != b.formula_ || a.assignment_ != b.assignment_ ||
      a.sat_count_ != b.sat_count_ || a.violated_.size() != b.violated_.size())
    return false;
  for (ClauseId c = 0; c < a.sat_count_.size(); ++c)
    if (a.is_violated(c) != b.is_violated(c)) return false;
  return true;
}

}  // namespace ptsat

#include "ptsat/generator.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "ptsat/rng.hpp"

namespace ptsat {

PlantedInstance generate_planted(const PlantedSpec& spec) {
  const auto n = spec.num_vars;
  const auto k = spec.clause_size;
  const auto m = spec.num_clauses;
  if (n == 0 || m == 0 || k == 0)
    throw std::invalid_argument("n, m and k must be positive");
  if (k > n) throw std::invalid_argument("clause size exceeds variable count");
  if (!spec.clause_type_weights.empty() &&
      spec.clause_type_weights.size() != std::size_t{k} + 1)
    throw std::invalid_argument("clause-type weight table needs k+1 entries");

  Rng rng(spec.seed);
  Assignment planted;
  if (spec.planted) {
    planted = *spec.planted;
    if (planted.size() != n)
      throw std::invalid_argument("planted assignment has wrong length");
  } else {
    planted.resize(n);
    for (auto& bit : planted) bit = static_cast<std::uint8_t>(rng.next() >> 63);
  }

  double max_weight = 0.0;
  for (std::size_t t = 1; t < spec.clause_type_weights.size(); ++t)
    max_weight = std::max(max_weight, spec.clause_type_weights[t]);
  if (!spec.clause_type_weights.empty() && !(max_weight > 0.0))
    throw std::invalid_argument("clause-type weights must have a positive entry");

  std::vector<std::vector<Lit>> clauses;
  clauses.reserve(m);
  std::set<std::vector<std::uint32_t>> seen;
  std::vector<std::uint32_t> vars(n);
  const std::uint64_t budget = 1000ull * m + 10000;
  std::uint64_t draws = 0;
  while (clauses.size() < m) {
    if (++draws > budget)
      throw GeneratorError("gave up after " + std::to_string(budget) +
                           " clause draws with " +
                           std::to_string(clauses.size()) + " of " +
                           std::to_string(m) + " clauses accepted");
    // Partial Fisher-Yates over a fresh identity permutation.
    for (std::uint32_t i = 0; i < n; ++i) vars[i] = i;
    for (std::uint32_t i = 0; i < k; ++i)
      std::swap(vars[i], vars[i + rng.below(n - i)]);
    std::vector<Lit> clause;
    clause.reserve(k);
    for (std::uint32_t i = 0; i < k; ++i)
      clause.emplace_back(Var{vars[i]}, (rng.next() >> 63) != 0);
    std::sort(clause.begin(), clause.end());

    const auto satisfied = static_cast<std::size_t>(std::count_if(
        clause.begin(), clause.end(),
        [&](Lit l) { return literal_true(planted, l); }));
    if (satisfied == 0) continue;
    if (!spec.clause_type_weights.empty() &&
        !(rng.uniform() * max_weight < spec.clause_type_weights[satisfied]))
      continue;

    std::vector<std::uint32_t> key;
    key.reserve(k);
    for (Lit l : clause) key.push_back(l.code());
    if (!seen.insert(std::move(key)).second) continue;
    clauses.push_back(std::move(clause));
  }
  return {Formula(n, clauses), std::move(planted)};
}

PlantedSpec planted_preset(std::string_view name) {
  PlantedSpec spec;
  if (name == "group-2") {
    spec.num_vars = 100, spec.num_clauses = 1000, spec.clause_size = 4;
  } else if (name == "group-3") {
    spec.num_vars = 50, spec.num_clauses = 2200, spec.clause_size = 6;
  } else if (name == "group-4") {
    spec.num_vars = 50, spec.num_clauses = 4500, spec.clause_size = 7;
  } else {
    throw std::invalid_argument("unknown generator preset '" +
                                std::string(name) + "'");
  }
  return spec;
}

std::vector<std::string> planted_preset_names() {
  return {"group-2", "group-3", "group-4"};
}

std::string planted_sidecar_json(const PlantedSpec& spec,
                                 const Assignment& planted) {
  nlohmann::ordered_json j;
  j["seed"] = spec.seed;
  j["spec"] = {{"n", spec.num_vars},
               {"m", spec.num_clauses},
               {"k", spec.clause_size}};
  std::vector<int> bits(planted.begin(), planted.end());
  j["planted_assignment"] = bits;
  return j.dump();
}

}  // namespace ptsat

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ptsat/cnf.hpp"

namespace ptsat {

struct PlantedSpec {
  std::uint32_t num_vars = 0;     // n
  std::uint32_t num_clauses = 0;  // m
  std::uint32_t clause_size = 0;  // k
  std::uint64_t seed = 0;
  // Drawn from the seed when absent.
  std::optional<Assignment> planted;
  // Optional acceptance weights indexed by the number of literals the planted
  // assignment satisfies (entry t for t = 1..k; entry 0 is ignored). A clause
  // with t true literals is kept with probability w[t] / max(w). Empty means
  // uniform rejection planting.
  std::vector<double> clause_type_weights;
};

struct PlantedInstance {
  Formula formula;
  Assignment planted;
};

class GeneratorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Clauses are built by drawing k distinct variables and uniform polarities,
// rejecting clauses the planted assignment violates and exact duplicates
// (compared as sorted literal sets). Literals within a clause are stored in
// variable order. Gives up with GeneratorError after 1000*m + 10000 draws.
PlantedInstance generate_planted(const PlantedSpec& spec);

// "group-2": 4-SAT n=100 m=1000; "group-3": 6-SAT n=50 m=2200;
// "group-4": 7-SAT n=50 m=4500. The seed is left at 0.
PlantedSpec planted_preset(std::string_view name);
std::vector<std::string> planted_preset_names();

// {"seed":..,"spec":{"n":..,"m":..,"k":..},"planted_assignment":[0,1,..]}
std::string planted_sidecar_json(const PlantedSpec& spec,
                                 const Assignment& planted);

}  // namespace ptsat

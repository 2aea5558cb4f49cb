#pragma once

#include <cstdint>
#include <string_view>

#include "ptsat/cnf.hpp"
#include "ptsat/rng.hpp"

namespace ptsat {

// Local-update kernels. A kernel maps one configuration to another by
// changing at most one variable; its noise is set by a single "temperature".
enum class KernelKind { WalkSat, MetropolisHastings };

std::string_view to_string(KernelKind kind);
KernelKind kernel_from_string(std::string_view name);

struct EpisodeOutcome {
  std::uint64_t steps = 0;  // q, in [0, Q]; < Q only when solved
  bool solved = false;
  std::uint32_t final_energy = 0;
};

// One WalkSAT move: pick a violated clause uniformly, then with probability
// `walk_probability` flip a uniformly chosen variable of it, otherwise the
// variable of minimum break value (first in clause order on ties). The coin
// is tossed even when the minimum break is 0. Requires state.energy() > 0.
//
// Draw order per call: clause index, coin, then (walk branch only) position.
Var walksat_step(SearchState& state, double walk_probability, Rng& rng);

// One Metropolis step at temperature T > 0: propose flipping a uniformly
// random variable, accept with min(1, exp(-dE / T)). Returns whether the flip
// was kept. The acceptance coin is only drawn when dE > 0.
bool mh_step(SearchState& state, double temperature, Rng& rng);

// Uniformly random assignment, one rng draw per variable (top bit).
Assignment random_assignment(std::uint32_t num_vars, Rng& rng);

// Runs kernel steps until the state is satisfied or `max_steps` steps were
// taken. For WalkSat the temperature is the walk probability.
EpisodeOutcome run_episode(SearchState& state, KernelKind kernel,
                           double temperature, std::uint64_t max_steps,
                           Rng& rng);

}  // namespace ptsat

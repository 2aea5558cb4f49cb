#include "ptsat/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ptsat {

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::WalkSat:
      return "walksat";
    case KernelKind::MetropolisHastings:
      return "mh";
  }
  return "?";
}

KernelKind kernel_from_string(std::string_view name) {
  if (name == "walksat") return KernelKind::WalkSat;
  if (name == "mh" || name == "metropolis") return KernelKind::MetropolisHastings;
  throw std::invalid_argument("unknown kernel '" + std::string(name) + "'");
}

Assignment random_assignment(std::uint32_t num_vars, Rng& rng) {
  Assignment a(num_vars);
  for (auto& bit : a) bit = static_cast<std::uint8_t>(rng.next() >> 63);
  return a;
}

Var walksat_step(SearchState& state, double walk_probability, Rng& rng) {
  const auto violated = state.violated();
  if (violated.empty())
    throw std::logic_error("walksat_step called on a satisfied state");
  const ClauseId c = violated[rng.below(violated.size())];
  const auto lits = state.formula().clause(c);

  // The sentinel exceeds any possible break value (at most m).
  std::uint32_t best_break = state.formula().num_clauses() + 1;
  Var best{};
  for (Lit l : lits) {
    const auto b = state.break_value(l.var());
    if (best_break > b) {
      best_break = b;
      best = l.var();
    }
  }
  Var chosen = best;
  if (rng.uniform() < walk_probability)
    chosen = lits[rng.below(lits.size())].var();
  state.flip(chosen);
  return chosen;
}

bool mh_step(SearchState& state, double temperature, Rng& rng) {
  const Var v{static_cast<std::uint32_t>(
      rng.below(state.formula().num_vars()))};
  const auto delta = static_cast<std::int64_t>(state.break_value(v)) -
                     static_cast<std::int64_t>(state.make_value(v));
  if (delta > 0 &&
      !(rng.uniform() < std::exp(-static_cast<double>(delta) / temperature)))
    return false;
  state.flip(v);
  return true;
}

EpisodeOutcome run_episode(SearchState& state, KernelKind kernel,
                           double temperature, std::uint64_t max_steps,
                           Rng& rng) {
  if (max_steps < 1) throw std::invalid_argument("episode budget must be >= 1");
  if (!(temperature > 0.0))
    throw std::invalid_argument("temperature must be positive");
  std::uint64_t q = 0;
  if (kernel == KernelKind::WalkSat) {
    while (state.energy() > 0 && q < max_steps) {
      walksat_step(state, temperature, rng);
      ++q;
    }
  } else {
    while (state.energy() > 0 && q < max_steps) {
      mh_step(state, temperature, rng);
      ++q;
    }
  }
  return {q, state.energy() == 0, state.energy()};
}

}  // namespace ptsat

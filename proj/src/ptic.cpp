#include "ptsat/ptic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include <json.hpp>

namespace ptsat {

TemperatureSchedule::TemperatureSchedule(std::vector<double> temps)
    : temps_(std::move(temps)) {
  if (temps_.size() < 2)
    throw std::invalid_argument("a schedule needs at least two temperatures");
  for (double t : temps_)
    if (!(t > 0.0) || !std::isfinite(t))
      throw std::invalid_argument("temperatures must be positive and finite");
  const bool descending = temps_[1] < temps_[0];
  for (std::size_t i = 1; i < temps_.size(); ++i) {
    const bool ok = descending ? temps_[i] < temps_[i - 1]
                               : temps_[i] > temps_[i - 1];
    if (!ok)
      throw std::invalid_argument(
          "temperatures must be strictly monotone and distinct");
  }
}

void TemperatureSchedule::require_probabilities() const {
  for (double t : temps_)
    if (t > 1.0)
      throw std::invalid_argument(
          "walk-probability schedules must lie in (0, 1], got " +
          std::to_string(t));
}

double exchange_probability(double energy_a, double temp_a, double energy_b,
                            double temp_b) {
  if (!(temp_a > 0.0) || !(temp_b > 0.0))
    throw std::invalid_argument("exchange temperatures must be positive");
  const double d_beta = 1.0 / temp_b - 1.0 / temp_a;
  const double d_energy = energy_b - energy_a;
  const double exponent = d_beta * d_energy;
  if (!(exponent < 0.0)) return 1.0;  // also catches 0 * inf = NaN
  return std::exp(std::max(exponent, -745.0));
}

void write_trace_jsonl(std::ostream& out,
                       const std::vector<TraceEvent>& trace) {
  for (const auto& e : trace) {
    nlohmann::ordered_json j;
    j["episode"] = e.episode;
    j["slot_energies"] = e.slot_energies;
    j["occupancy"] = e.occupancy;
    out << j.dump() << '\n';
  }
}

std::vector<TraceEvent> read_trace_jsonl(std::istream& in) {
  std::vector<TraceEvent> trace;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    TraceEvent e;
    e.episode = j.at("episode").get<std::uint64_t>();
    e.slot_energies = j.at("slot_energies").get<std::vector<std::uint32_t>>();
    e.occupancy = j.at("occupancy").get<std::vector<std::uint32_t>>();
    trace.push_back(std::move(e));
  }
  return trace;
}

ReplicaEnsemble::ReplicaEnsemble(const TemperatureSchedule& schedule,
                                 std::vector<SearchState> states) {
  if (states.size() != schedule.size())
    throw std::invalid_argument("one configuration per temperature required");
  slots_.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i)
    slots_.push_back(
        {schedule[i], std::move(states[i]), static_cast<std::uint32_t>(i)});
}

std::vector<std::uint32_t> ReplicaEnsemble::energies() const {
  std::vector<std::uint32_t> e;
  e.reserve(slots_.size());
  for (const auto& s : slots_) e.push_back(s.state.energy());
  return e;
}

std::vector<std::uint32_t> ReplicaEnsemble::occupancy() const {
  std::vector<std::uint32_t> occ(slots_.size());
  for (std::size_t i = 0; i < slots_.size(); ++i)
    occ[slots_[i].config_id] = static_cast<std::uint32_t>(i);
  return occ;
}

void ReplicaEnsemble::exchange_phase(Rng& rng, ExchangeStats& stats,
                                     std::optional<double> forced_probability) {
  const std::size_t pairs = slots_.size() - 1;
  stats.attempts.resize(pairs, 0);
  stats.accepts.resize(pairs, 0);
  for (std::size_t i = 0; i < pairs; ++i) {
    auto& a = slots_[i];
    auto& b = slots_[i + 1];
    const double p =
        forced_probability
            ? *forced_probability
            : exchange_probability(a.state.energy(), a.temperature,
                                   b.state.energy(), b.temperature);
    ++stats.attempts[i];
    if (rng.uniform() < p) {
      std::swap(a.state, b.state);
      std::swap(a.config_id, b.config_id);
      ++stats.accepts[i];
    }
  }
}

std::uint64_t slot_seed(std::uint64_t seed, std::size_t slot) {
  return derive_seed(seed, {0, slot});
}

std::uint64_t exchange_seed(std::uint64_t seed) {
  return derive_seed(seed, {1});
}

PticResult run_ptic(const Formula& formula, const PticConfig& config) {
  const auto& schedule = config.schedule;
  const std::size_t kappa = schedule.size();
  const std::uint64_t Q = config.steps_per_episode;
  if (Q < 1) throw std::invalid_argument("steps per episode must be >= 1");
  if (config.max_episodes < 1)
    throw std::invalid_argument("episode limit must be >= 1");
  if (config.kernel == KernelKind::WalkSat) schedule.require_probabilities();

  std::vector<Rng> slot_rngs;
  std::vector<SearchState> states;
  slot_rngs.reserve(kappa);
  states.reserve(kappa);
  for (std::size_t i = 0; i < kappa; ++i) {
    slot_rngs.emplace_back(slot_seed(config.seed, i));
    states.emplace_back(formula,
                        random_assignment(formula.num_vars(), slot_rngs[i]));
  }
  ReplicaEnsemble ensemble(schedule, std::move(states));
  Rng exchange_rng(exchange_seed(config.seed));

  PticResult result;
  result.budget = kappa * Q * config.max_episodes;
  result.exchanges.attempts.assign(kappa - 1, 0);
  result.exchanges.accepts.assign(kappa - 1, 0);
  result.best_energy = ensemble.slot(0).state.energy();
  result.best_assignment = ensemble.slot(0).state.assignment();
  for (std::size_t i = 1; i < kappa; ++i) {
    if (ensemble.slot(i).state.energy() < result.best_energy) {
      result.best_energy = ensemble.slot(i).state.energy();
      result.best_assignment = ensemble.slot(i).state.assignment();
    }
  }

  std::vector<EpisodeOutcome> outcomes(kappa);
  auto run_slot = [&](std::size_t i) {
    auto& slot = ensemble.slot(i);
    outcomes[i] = run_episode(slot.state, config.kernel, slot.temperature, Q,
                              slot_rngs[i]);
  };
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, config.workers), kappa));

  for (std::uint64_t s = 1; s <= config.max_episodes; ++s) {
    if (workers == 1) {
      for (std::size_t i = 0; i < kappa; ++i) run_slot(i);
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
          for (std::size_t i = w; i < kappa; i += workers) run_slot(i);
        });
    }
    result.episodes_run = s;

    if (config.record_trace)
      result.trace.push_back({s, ensemble.energies(), ensemble.occupancy()});

    for (std::size_t i = 0; i < kappa; ++i) {
      const auto& slot = ensemble.slot(i);
      if (outcomes[i].solved) {
        result.solved = true;
        result.successful_slot = i;
        result.successful_steps = outcomes[i].steps;
        result.successful_config = slot.config_id;
        result.best_energy = 0;
        result.best_assignment = slot.state.assignment();
        break;
      }
      if (slot.state.energy() < result.best_energy) {
        result.best_energy = slot.state.energy();
        result.best_assignment = slot.state.assignment();
      }
    }
    result.best_energy_history.push_back(result.best_energy);
    if (result.solved) {
      result.total_iterations = kappa * (Q * (s - 1) + *result.successful_steps);
      return result;
    }
    ensemble.exchange_phase(exchange_rng, result.exchanges,
                            config.forced_exchange_probability);
  }
  result.total_iterations = result.budget;
  return result;
}

PticResult run_standard_pt(const Formula& formula, PticConfig config) {
  config.kernel = KernelKind::MetropolisHastings;
  config.steps_per_episode = formula.num_vars();
  return run_ptic(formula, config);
}

}  // namespace ptsat

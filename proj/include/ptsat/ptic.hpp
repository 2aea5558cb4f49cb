#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "ptsat/cnf.hpp"
#include "ptsat/kernels.hpp"
#include "ptsat/rng.hpp"

namespace ptsat {

// Ordered temperatures T_1..T_kappa, one per slot. At least two entries,
// all positive and strictly monotone in a single direction.
class TemperatureSchedule {
 public:
  explicit TemperatureSchedule(std::vector<double> temps);

  std::size_t size() const { return temps_.size(); }
  double operator[](std::size_t i) const { return temps_[i]; }
  const std::vector<double>& temps() const { return temps_; }

  // WalkSAT reads temperatures as walk probabilities, so they must lie in
  // (0, 1]. Throws std::invalid_argument otherwise.
  void require_probabilities() const;

  friend bool operator==(const TemperatureSchedule&,
                         const TemperatureSchedule&) = default;

 private:
  std::vector<double> temps_;
};

// min(1, exp(dBeta * dE)) with dBeta = 1/T_b - 1/T_a and dE = E_b - E_a,
// for adjacent slots a and b. The exponent is clamped at 0 before exp.
double exchange_probability(double energy_a, double temp_a, double energy_b,
                            double temp_b);

// One row of the optional trace, recorded after the episode of each slot
// and before the exchange phase of that episode.
struct TraceEvent {
  std::uint64_t episode = 0;                // 1-based
  std::vector<std::uint32_t> slot_energies;  // indexed by slot
  std::vector<std::uint32_t> occupancy;      // configuration -> slot
};

// {"episode":..,"slot_energies":[..],"occupancy":[..]}
void write_trace_jsonl(std::ostream& out, const std::vector<TraceEvent>& trace);
std::vector<TraceEvent> read_trace_jsonl(std::istream& in);

struct ExchangeStats {
  std::vector<std::uint64_t> attempts;  // per adjacent pair (i, i+1)
  std::vector<std::uint64_t> accepts;
};

// Fixed-temperature slots with mobile configurations. Configurations keep
// the id of the slot they started in so their traversal can be followed.
class ReplicaEnsemble {
 public:
  struct Slot {
    double temperature;
    SearchState state;
    std::uint32_t config_id;
  };

  ReplicaEnsemble(const TemperatureSchedule& schedule,
                  std::vector<SearchState> states);

  std::size_t size() const { return slots_.size(); }
  Slot& slot(std::size_t i) { return slots_[i]; }
  const Slot& slot(std::size_t i) const { return slots_[i]; }

  std::vector<std::uint32_t> energies() const;
  // occupancy[config_id] = slot currently holding that configuration.
  std::vector<std::uint32_t> occupancy() const;

  // Sweeps pairs (0,1), (1,2), ... in order, each using the current (possibly
  // just swapped) energies, swapping configurations on acceptance. When
  // `forced_probability` is set it replaces the exchange rule.
  void exchange_phase(Rng& rng, ExchangeStats& stats,
                      std::optional<double> forced_probability = {});

 private:
  std::vector<Slot> slots_;
};

struct PticConfig {
  KernelKind kernel = KernelKind::WalkSat;
  TemperatureSchedule schedule{{1.0, 0.1}};
  std::uint64_t steps_per_episode = 6270;  // Q
  std::uint64_t max_episodes = 1000;       // S
  std::uint64_t seed = 0;
  bool record_trace = false;
  // Slots run their episodes on up to this many threads. Results do not
  // depend on it.
  unsigned workers = 1;
  // Test hook: constant exchange acceptance instead of the Boltzmann rule.
  std::optional<double> forced_exchange_probability;
};

struct PticResult {
  Assignment best_assignment;
  std::uint32_t best_energy = 0;
  bool solved = false;
  std::uint64_t episodes_run = 0;  // s
  std::optional<std::size_t> successful_slot;
  std::optional<std::uint64_t> successful_steps;  // q
  std::optional<std::uint32_t> successful_config;
  std::uint64_t total_iterations = 0;  // kappa*[Q(s-1)+q], or kappa*Q*S
  std::uint64_t budget = 0;            // kappa*Q*S
  ExchangeStats exchanges;
  std::vector<std::uint32_t> best_energy_history;  // E after each episode
  std::vector<TraceEvent> trace;
};

// Stream layout: slot i draws its initial configuration and all of its
// kernel randomness from derive_seed(seed, {0, i}); exchanges use
// derive_seed(seed, {1}).
std::uint64_t slot_seed(std::uint64_t seed, std::size_t slot);
std::uint64_t exchange_seed(std::uint64_t seed);

PticResult run_ptic(const Formula& formula, const PticConfig& config);

// Classic parallel tempering: Metropolis kernel, one sweep (num_vars
// proposals) per episode. Any kernel or step count in `config` is overridden.
PticResult run_standard_pt(const Formula& formula, PticConfig config);

}  // namespace ptsat

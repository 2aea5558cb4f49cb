#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "oracle.hpp"
#include "ptsat/generator.hpp"
#include "ptsat/ptic.hpp"
#include "util.hpp"

using namespace ptsat;
using testutil::bits;

TEST_CASE("schedule validation") {
  CHECK_NOTHROW(TemperatureSchedule({1.0, 0.1}));
  CHECK_NOTHROW(TemperatureSchedule({0.1, 0.5, 2.0}));
  CHECK_THROWS_AS(TemperatureSchedule({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(TemperatureSchedule({1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(TemperatureSchedule({1.0, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(TemperatureSchedule({1.0, 0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(TemperatureSchedule({1.0, 0.5, 0.7}), std::invalid_argument);
  CHECK_THROWS_AS(TemperatureSchedule({2.0, 0.5}).require_probabilities(),
                  std::invalid_argument);
}

TEST_CASE("exchange probability") {
  // Hotter slot holds the better configuration: always swap.
  CHECK(exchange_probability(3, 1.0, 5, 0.5) == 1.0);
  CHECK(exchange_probability(4, 1.0, 4, 0.5) == 1.0);
  // dBeta = 1/0.5 - 1/1 = 1, dE = 3 - 5 = -2.
  CHECK(exchange_probability(5, 1.0, 3, 0.5) == doctest::Approx(std::exp(-2.0)));
  // dBeta = 1/0.1 - 1/1 = 9, dE = -2.
  CHECK(exchange_probability(5, 1.0, 3, 0.1) ==
        doctest::Approx(1.523e-8).epsilon(1e-3));
  CHECK(exchange_probability(1e6, 1.0, 0, 1e-6) < 1e-300);
}

namespace {

// Energies 5 (slot 0) and 3 (slot 1): unit clauses all violated by zeros.
Formula unit_formula(int n) {
  std::vector<std::vector<int>> cs;
  for (int v = 1; v <= n; ++v) cs.push_back({v});
  return testutil::formula(n, cs);
}

}  // namespace

TEST_CASE("empirical exchange rate matches the rule") {
  const auto f = unit_formula(8);
  // slot 0: 5 violated, slot 1: 3 violated
  const auto a0 = bits({0, 0, 0, 0, 0, 1, 1, 1});
  const auto a1 = bits({0, 0, 0, 1, 1, 1, 1, 1});
  const TemperatureSchedule sched({1.0, 0.5});
  const double p = exchange_probability(5, 1.0, 3, 0.5);
  Rng rng(99);
  ExchangeStats stats;
  const int trials = 20000;
  for (int i = 0; i < trials; ++i) {
    ReplicaEnsemble e(sched, {SearchState(f, a0), SearchState(f, a1)});
    e.exchange_phase(rng, stats);
  }
  const double rate = double(stats.accepts[0]) / trials;
  const double sigma = std::sqrt(p * (1 - p) / trials);
  CHECK(stats.attempts[0] == trials);
  CHECK(std::abs(rate - p) < 3 * sigma);
}

TEST_CASE("exchange phase sweeps pairs in order on current energies") {
  const auto f = unit_formula(4);
  // Energies: slot0 = 1, slot1 = 2, slot2 = 4. Ladder cools from slot 0.
  const TemperatureSchedule sched({1.0, 0.5, 0.25});
  ReplicaEnsemble e(sched, {SearchState(f, bits({1, 1, 1, 0})),
                            SearchState(f, bits({1, 1, 0, 0})),
                            SearchState(f, bits({0, 0, 0, 0}))});
  Rng rng(1);
  ExchangeStats stats;
  e.exchange_phase(rng, stats, 1.0);
  // (0,1) swaps, then (1,2) swaps what just arrived in slot 1.
  CHECK(e.energies() == std::vector<std::uint32_t>{2, 4, 1});
  CHECK(e.occupancy() == std::vector<std::uint32_t>{2, 0, 1});
  CHECK(e.slot(0).temperature == 1.0);
  CHECK(e.slot(2).temperature == 0.25);
  e.exchange_phase(rng, stats, 0.0);
  CHECK(e.energies() == std::vector<std::uint32_t>{2, 4, 1});
  CHECK(stats.attempts == std::vector<std::uint64_t>{2, 2});
  CHECK(stats.accepts == std::vector<std::uint64_t>{1, 1});
}

TEST_CASE("run_ptic on the worked example") {
  const auto f = testutil::formula(4, oracle::kExample);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    PticConfig cfg;
    cfg.schedule = TemperatureSchedule({1.0, 0.1});
    cfg.steps_per_episode = 100;
    cfg.max_episodes = 50;
    cfg.seed = seed;
    const auto r = run_ptic(f, cfg);
    REQUIRE(r.solved);
    REQUIRE(r.best_energy == 0);
    REQUIRE(count_violated(f, r.best_assignment) == 0);
    REQUIRE(r.successful_slot.has_value());
    REQUIRE(*r.successful_slot < 2);
    const auto q = *r.successful_steps;
    REQUIRE(r.total_iterations == 2 * (100 * (r.episodes_run - 1) + q));
    REQUIRE(r.budget == 2 * 100 * 50);
  }
}

TEST_CASE("run_ptic exhausts the budget on an unsatisfiable formula") {
  const auto f = testutil::formula(1, {{1}, {-1}});
  PticConfig cfg;
  cfg.schedule = TemperatureSchedule({1.0, 0.5, 0.1});
  cfg.steps_per_episode = 10;
  cfg.max_episodes = 5;
  cfg.seed = 4;
  const auto r = run_ptic(f, cfg);
  CHECK_FALSE(r.solved);
  CHECK(r.total_iterations == 150);
  CHECK(r.budget == 150);
  CHECK(r.episodes_run == 5);
  CHECK(r.best_energy == 1);
  CHECK(r.exchanges.attempts == std::vector<std::uint64_t>{5, 5});
  CHECK(r.best_energy_history.size() == 5);
}

namespace {

PlantedInstance hard_instance(std::uint64_t seed) {
  return generate_planted({60, 400, 4, seed, {}, {}});
}

}  // namespace

TEST_CASE("configurations are conserved and best energy never rises") {
  const auto inst = hard_instance(3);
  PticConfig cfg;
  cfg.schedule = TemperatureSchedule({1.0, 0.6, 0.25, 0.18, 0.14, 0.12, 0.1});
  cfg.steps_per_episode = 5;
  cfg.max_episodes = 200;
  cfg.seed = 12;
  cfg.record_trace = true;
  const auto r = run_ptic(inst.formula, cfg);
  REQUIRE_FALSE(r.trace.empty());
  for (const auto& ev : r.trace) {
    std::set<std::uint32_t> slots(ev.occupancy.begin(), ev.occupancy.end());
    REQUIRE(slots.size() == 7);
    REQUIRE(*slots.rbegin() == 6);
    REQUIRE(ev.slot_energies.size() == 7);
  }
  for (std::size_t i = 1; i < r.best_energy_history.size(); ++i)
    REQUIRE(r.best_energy_history[i] <= r.best_energy_history[i - 1]);
  for (std::size_t e = 0; e < r.trace.size(); ++e) {
    const auto& ev = r.trace[e];
    const auto lo = *std::min_element(ev.slot_energies.begin(), ev.slot_energies.end());
    REQUIRE(r.best_energy_history[e] <= lo);
  }
  CHECK(count_violated(inst.formula, r.best_assignment) == r.best_energy);
}

TEST_CASE("forced zero exchange equals independent replicas") {
  const auto inst = hard_instance(5);
  const TemperatureSchedule sched({0.5, 0.3, 0.1});
  PticConfig cfg;
  cfg.schedule = sched;
  cfg.steps_per_episode = 50;
  cfg.max_episodes = 40;
  cfg.seed = 77;
  cfg.forced_exchange_probability = 0.0;
  cfg.record_trace = true;
  const auto r = run_ptic(inst.formula, cfg);

  // Reference: the same streams run as plain loops with no exchange.
  std::vector<Rng> rngs;
  std::vector<SearchState> states;
  for (std::size_t i = 0; i < 3; ++i) {
    rngs.emplace_back(slot_seed(77, i));
    states.emplace_back(inst.formula, random_assignment(60, rngs[i]));
  }
  for (std::size_t e = 0; e < r.trace.size(); ++e) {
    std::vector<bool> solved(3);
    for (std::size_t i = 0; i < 3; ++i)
      solved[i] = run_episode(states[i], KernelKind::WalkSat, sched[i], 50, rngs[i]).solved;
    for (std::size_t i = 0; i < 3; ++i)
      REQUIRE(r.trace[e].slot_energies[i] == states[i].energy());
    REQUIRE(r.trace[e].occupancy == std::vector<std::uint32_t>{0, 1, 2});
  }
  CHECK(r.exchanges.accepts == std::vector<std::uint64_t>{0, 0});
  const auto expected_attempts = r.solved ? r.episodes_run - 1 : r.episodes_run;
  CHECK(r.exchanges.attempts ==
        std::vector<std::uint64_t>{expected_attempts, expected_attempts});
}

TEST_CASE("parallel slot execution matches serial") {
  const auto inst = hard_instance(9);
  for (auto kernel : {KernelKind::WalkSat, KernelKind::MetropolisHastings}) {
    PticConfig cfg;
    cfg.kernel = kernel;
    cfg.schedule = kernel == KernelKind::WalkSat
                       ? TemperatureSchedule({1.0, 0.6, 0.25, 0.18, 0.14, 0.12, 0.1})
                       : TemperatureSchedule({2.0, 1.0, 0.5, 0.25, 0.1});
    cfg.steps_per_episode = 40;
    cfg.max_episodes = 60;
    cfg.seed = 31;
    cfg.record_trace = true;
    const auto serial = run_ptic(inst.formula, cfg);
    cfg.workers = 4;
    const auto parallel = run_ptic(inst.formula, cfg);
    CHECK(serial.total_iterations == parallel.total_iterations);
    CHECK(serial.best_assignment == parallel.best_assignment);
    CHECK(serial.exchanges.accepts == parallel.exchanges.accepts);
    REQUIRE(serial.trace.size() == parallel.trace.size());
    for (std::size_t e = 0; e < serial.trace.size(); ++e) {
      CHECK(serial.trace[e].slot_energies == parallel.trace[e].slot_energies);
      CHECK(serial.trace[e].occupancy == parallel.trace[e].occupancy);
    }
  }
}

TEST_CASE("standard parallel tempering") {
  const auto f = testutil::formula(4, oracle::kExample);
  PticConfig cfg;
  cfg.schedule = TemperatureSchedule({2.0, 0.5, 0.1});
  cfg.steps_per_episode = 999;
  cfg.max_episodes = 200;
  int solved = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    cfg.seed = seed;
    const auto r = run_standard_pt(f, cfg);
    CHECK(r.budget == 3 * 4 * 200);
    if (r.solved) {
      ++solved;
      CHECK(r.total_iterations == 3 * (4 * (r.episodes_run - 1) + *r.successful_steps));
    }
  }
  CHECK(solved >= 99);
}

TEST_CASE("trace JSONL round trip") {
  std::vector<TraceEvent> trace{{1, {3, 2, 0}, {0, 1, 2}}, {2, {1, 5, 4}, {1, 0, 2}}};
  std::stringstream ss;
  write_trace_jsonl(ss, trace);
  CHECK(ss.str().find("{\"episode\":1,\"slot_energies\":[3,2,0],\"occupancy\":[0,1,2]}") == 0);
  const auto back = read_trace_jsonl(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[1].episode == 2);
  CHECK(back[1].slot_energies == trace[1].slot_energies);
  CHECK(back[1].occupancy == trace[1].occupancy);
}

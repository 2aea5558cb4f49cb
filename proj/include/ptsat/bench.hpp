#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptsat/cnf.hpp"
#include "ptsat/generator.hpp"
#include "ptsat/metrics.hpp"
#include "ptsat/ptic.hpp"

namespace ptsat {

enum class Algorithm { WalkSat, PaWalkSat, PticWalkSat, StandardPt };

std::string_view to_string(Algorithm algorithm);
Algorithm algorithm_from_string(std::string_view name);

struct AlgorithmParams {
  double walk_probability = 0.5;
  // Iteration caps tried in order; the next one is used only when the
  // previous cap gave zero successes over all repeats.
  std::vector<std::uint64_t> walksat_caps{500000, 1000000};
  std::string schedule_id = "paper-tuned-7";
  TemperatureSchedule schedule{{1.0, 0.6, 0.25, 0.18, 0.14, 0.12, 0.1}};
  std::uint64_t steps_per_episode = 6270;  // Q
  std::uint64_t max_episodes = 1000;       // S
  std::uint64_t pa_cap = 6270000;          // per replica
  TemperatureSchedule pt_schedule{{2.0, 0.5, 0.1}};
  std::uint64_t pt_sweeps = 1000;
};

// One repeat of one algorithm on one instance.
struct RunOutcome {
  RunRecord record;
  std::uint32_t best_energy = 0;
  Assignment best_assignment;
  std::optional<std::size_t> successful_slot;
  std::vector<TraceEvent> trace;  // PTIC kernels only, when requested
};

// Counting rules: WalkSAT counts its own flips (tau = cap); PA-WalkSAT runs
// one WalkSAT per schedule entry (walk probability = temperature) and counts
// kappa * steps of the first replica to finish (tau = kappa * cap); the
// tempering algorithms use kappa * [Q (s - 1) + q] with tau = kappa * Q * S,
// where standard PT has Q = num_vars.
RunOutcome run_algorithm(const Formula& formula, Algorithm algorithm,
                         const AlgorithmParams& params, std::uint64_t seed,
                         std::size_t cap_stage = 0, bool trace = false,
                         unsigned replica_workers = 1);

struct InstanceSpec {
  std::string name;
  std::string group;
  std::filesystem::path path;           // DIMACS file, or
  std::optional<PlantedSpec> planted;   // generated on the fly
};

struct BenchConfig {
  std::vector<InstanceSpec> instances;
  std::vector<Algorithm> algorithms{Algorithm::WalkSat, Algorithm::PaWalkSat,
                                    Algorithm::PticWalkSat};
  std::size_t gamma = 10;          // repeats for every algorithm but WalkSAT
  std::size_t walksat_gamma = 10;  // WalkSAT repeats
  std::uint64_t seed = 1;
  AlgorithmParams params;
  unsigned workers = 1;
  std::filesystem::path out_dir = "bench-out";
  bool trace = false;
  std::string profile = "desk";
};

// "desk": small budgets for a workstation. "paper": the full published
// protocol (7 replicas, Q = 6270, S = 1000, WalkSAT caps 500k/1M with 5000
// repeats, PA cap 6.27M, 100 repeats).
BenchConfig bench_profile(std::string_view name);

// Overlays fields present in a JSON config document onto `base`. Relative
// instance paths are resolved against `base_dir`.
BenchConfig apply_bench_json(BenchConfig base, std::string_view json_text,
                             const std::filesystem::path& base_dir = {});

// Seed of one benchmark run; replica streams are derived from it.
std::uint64_t run_seed(std::uint64_t master, std::string_view instance,
                       Algorithm algorithm, std::size_t cap_stage,
                       std::size_t repeat);

struct BenchSummary {
  std::vector<ResultRow> rows;
  std::vector<std::string> errors;  // per-instance failures
};

// Writes into out_dir: results.csv, results.json, groups.csv, runs.jsonl
// (every repeat, for audit) and, with trace on, traces/*.jsonl. CSV and
// run rows are flushed after each instance. Output bytes depend only on the
// config, never on the worker count.
BenchSummary run_bench(const BenchConfig& config);

// Recomputes every results.csv row from runs.jsonl. Returns one message per
// mismatch; empty means the archive is consistent.
std::vector<std::string> audit_results(const std::filesystem::path& out_dir);

}  // namespace ptsat

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ptsat/ptic.hpp"

namespace ptsat {

struct RunRecord {
  bool solved = false;
  std::uint64_t iterations = 0;  // per the algorithm's counting rule
  std::uint64_t budget = 0;      // tau
};

struct RepeatSet {
  std::uint64_t tau = 0;
  std::vector<RunRecord> outcomes;

  std::size_t gamma() const { return outcomes.size(); }
  std::size_t solved() const;
};

// Repeats needed for 99% confidence given per-repeat success rate p.
// 1 when p >= 0.99; nullopt when p == 0.
std::optional<std::uint64_t> r99(double success_rate);

// ITS99 = tau * R99; nullopt marks an unsolved instance. Throws if the set is
// empty or a record's budget differs from tau.
std::optional<std::uint64_t> its99(const RepeatSet& repeats);

// kappa * [Q (s - 1) + q], requires 1 <= q <= Q and s >= 1.
std::uint64_t ptic_iterations(std::uint64_t kappa, std::uint64_t steps_per_episode,
                              std::uint64_t episodes, std::uint64_t last_steps);

// Independent replicas halted the moment one succeeds: kappa * winner_steps.
std::uint64_t parallel_baseline_iterations(std::uint64_t kappa,
                                           std::uint64_t winner_steps);

// Mean of solved/gamma over the group, in percent.
double per_problem_success_rate(const std::vector<RepeatSet>& group);
// Share of instances with at least one success, in percent.
double per_group_success_rate(const std::vector<RepeatSet>& group);

enum class ImprovementBucket { Decline, Small, Medium, Significant };

std::string_view to_string(ImprovementBucket bucket);

struct Improvement {
  double delta;  // (baseline - ptic) / ptic, as a ratio
  ImprovementBucket bucket;
};

ImprovementBucket bucket_for(double delta);
// Throws std::invalid_argument when its_ptic is 0.
Improvement improvement(double its_ptic, double its_baseline);

struct TraceSummary {
  // traversal[config][e] = slot occupied by configuration `config` during
  // the e-th trace event.
  std::vector<std::vector<std::uint32_t>> traversal;
  // energies[slot][e]
  std::vector<std::vector<std::uint32_t>> slot_energies;
  // Configuration that sat in the successful slot at the last event.
  std::uint32_t tracked_config = 0;
  std::size_t distinct_temperatures = 0;
};

// Throws std::invalid_argument on an empty trace, inconsistent row widths,
// or an occupancy row that is not a permutation.
TraceSummary trace_analytics(const std::vector<TraceEvent>& trace,
                             std::size_t successful_slot);

// Benchmark result rows.
struct ResultRow {
  std::string instance;
  std::string group;
  std::string algorithm;
  std::size_t gamma = 0;
  std::size_t solved = 0;
  std::uint64_t tau = 0;
  std::optional<std::uint64_t> its;
  std::optional<double> delta_vs_baseline;
  std::optional<ImprovementBucket> bucket;
};

inline constexpr std::string_view kResultsSchema = "ptsat-results v1";

void write_results_csv_header(std::ostream& out);
void write_result_csv(std::ostream& out, const ResultRow& row);
std::vector<ResultRow> read_results_csv(std::istream& in);
std::string result_row_json(const ResultRow& row);

}  // namespace ptsat

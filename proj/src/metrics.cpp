#include "ptsat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ptsat {

std::size_t RepeatSet::solved() const {
  return static_cast<std::size_t>(std::count_if(
      outcomes.begin(), outcomes.end(),
      [](const RunRecord& r) { return r.solved; }));
}

std::optional<std::uint64_t> r99(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("success rate must lie in [0, 1]");
  if (p == 0.0) return std::nullopt;
  if (p >= 0.99) return 1;
  return static_cast<std::uint64_t>(
      std::ceil(std::log(0.01) / std::log1p(-p)));
}

std::optional<std::uint64_t> its99(const RepeatSet& repeats) {
  if (repeats.outcomes.empty())
    throw std::invalid_argument("ITS needs at least one repeat");
  for (const auto& r : repeats.outcomes)
    if (r.budget != repeats.tau)
      throw std::invalid_argument("repeat budget differs from the set's tau");
  const auto repeats_needed =
      r99(static_cast<double>(repeats.solved()) /
          static_cast<double>(repeats.gamma()));
  if (!repeats_needed) return std::nullopt;
  return repeats.tau * *repeats_needed;
}

std::uint64_t ptic_iterations(std::uint64_t kappa,
                              std::uint64_t steps_per_episode,
                              std::uint64_t episodes,
                              std::uint64_t last_steps) {
  if (episodes < 1) throw std::invalid_argument("episode count must be >= 1");
  if (last_steps < 1 || last_steps > steps_per_episode)
    throw std::invalid_argument("need 1 <= q <= Q");
  return kappa * (steps_per_episode * (episodes - 1) + last_steps);
}

std::uint64_t parallel_baseline_iterations(std::uint64_t kappa,
                                           std::uint64_t winner_steps) {
  if (winner_steps < 1) throw std::invalid_argument("winner steps must be >= 1");
  return kappa * winner_steps;
}

namespace {

void check_group(const std::vector<RepeatSet>& group) {
  if (group.empty()) throw std::invalid_argument("empty instance group");
  for (const auto& set : group)
    if (set.gamma() == 0 || set.gamma() != group.front().gamma())
      throw std::invalid_argument("group needs a common, positive gamma");
}

}  // namespace

double per_problem_success_rate(const std::vector<RepeatSet>& group) {
  check_group(group);
  double sum = 0.0;
  for (const auto& set : group)
    sum += static_cast<double>(set.solved()) / static_cast<double>(set.gamma());
  return sum / static_cast<double>(group.size()) * 100.0;
}

double per_group_success_rate(const std::vector<RepeatSet>& group) {
  check_group(group);
  const auto hit = std::count_if(group.begin(), group.end(),
                                 [](const RepeatSet& s) { return s.solved() > 0; });
  return static_cast<double>(hit) / static_cast<double>(group.size()) * 100.0;
}

std::string_view to_string(ImprovementBucket bucket) {
  switch (bucket) {
    case ImprovementBucket::Decline:
      return "decline";
    case ImprovementBucket::Small:
      return "small";
    case ImprovementBucket::Medium:
      return "medium";
    case ImprovementBucket::Significant:
      return "significant";
  }
  return "?";
}

ImprovementBucket bucket_for(double delta) {
  if (delta < 0.0) return ImprovementBucket::Decline;
  if (delta < 0.2) return ImprovementBucket::Small;
  if (delta < 0.8) return ImprovementBucket::Medium;
  return ImprovementBucket::Significant;
}

Improvement improvement(double its_ptic, double its_baseline) {
  if (its_ptic == 0.0)
    throw std::invalid_argument("improvement undefined for zero PTIC ITS");
  const double delta = (its_baseline - its_ptic) / its_ptic;
  return {delta, bucket_for(delta)};
}

TraceSummary trace_analytics(const std::vector<TraceEvent>& trace,
                             std::size_t successful_slot) {
  if (trace.empty()) throw std::invalid_argument("empty trace");
  const std::size_t kappa = trace.front().occupancy.size();
  if (successful_slot >= kappa)
    throw std::invalid_argument("successful slot out of range");
  TraceSummary out;
  out.traversal.assign(kappa, {});
  out.slot_energies.assign(kappa, {});
  std::vector<std::uint32_t> config_in_slot(kappa);
  for (const auto& event : trace) {
    if (event.occupancy.size() != kappa || event.slot_energies.size() != kappa)
      throw std::invalid_argument("trace rows have inconsistent widths");
    std::vector<bool> hit(kappa, false);
    for (std::size_t c = 0; c < kappa; ++c) {
      const auto slot = event.occupancy[c];
      if (slot >= kappa || hit[slot])
        throw std::invalid_argument("occupancy at episode " +
                                    std::to_string(event.episode) +
                                    " is not a permutation");
      hit[slot] = true;
      config_in_slot[slot] = static_cast<std::uint32_t>(c);
      out.traversal[c].push_back(slot);
    }
    for (std::size_t s = 0; s < kappa; ++s)
      out.slot_energies[s].push_back(event.slot_energies[s]);
  }
  out.tracked_config = config_in_slot[successful_slot];
  auto visited = out.traversal[out.tracked_config];
  std::sort(visited.begin(), visited.end());
  out.distinct_temperatures = static_cast<std::size_t>(
      std::unique(visited.begin(), visited.end()) - visited.begin());
  return out;
}

namespace {

std::string format_delta(double d) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", d);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

void write_results_csv_header(std::ostream& out) {
  out << "# " << kResultsSchema << '\n'
      << "instance,group,algorithm,gamma,solved,tau,its,delta_vs_baseline,bucket\n";
}

void write_result_csv(std::ostream& out, const ResultRow& row) {
  out << row.instance << ',' << row.group << ',' << row.algorithm << ','
      << row.gamma << ',' << row.solved << ',' << row.tau << ',';
  if (row.its) out << *row.its; else out << "unsolved";
  out << ',';
  if (row.delta_vs_baseline) out << format_delta(*row.delta_vs_baseline);
  out << ',';
  if (row.bucket) out << to_string(*row.bucket);
  out << '\n';
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::vector<ResultRow> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto c = split_csv(line);
    if (c.size() != 9) throw std::runtime_error("malformed results row: " + line);
    ResultRow r;
    r.instance = c[0];
    r.group = c[1];
    r.algorithm = c[2];
    r.gamma = std::stoull(c[3]);
    r.solved = std::stoull(c[4]);
    r.tau = std::stoull(c[5]);
    if (c[6] != "unsolved") r.its = std::stoull(c[6]);
    if (!c[7].empty()) r.delta_vs_baseline = std::stod(c[7]);
    if (!c[8].empty()) r.bucket = bucket_for(*r.delta_vs_baseline);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string result_row_json(const ResultRow& row) {
  nlohmann::ordered_json j;
  j["instance"] = row.instance;
  j["group"] = row.group;
  j["algorithm"] = row.algorithm;
  j["gamma"] = row.gamma;
  j["solved"] = row.solved;
  j["tau"] = row.tau;
  j["its"] = row.its ? nlohmann::ordered_json(*row.its) : nullptr;
  j["delta_vs_baseline"] = row.delta_vs_baseline
                               ? nlohmann::ordered_json(*row.delta_vs_baseline)
                               : nullptr;
  j["bucket"] = row.bucket ? nlohmann::ordered_json(std::string(to_string(*row.bucket)))
                           : nullptr;
  return j.dump();
}

}  // namespace ptsat

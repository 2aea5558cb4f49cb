#include "ptsat/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "ptsat/dimacs.hpp"
#include "ptsat/kernels.hpp"
#include "ptsat/rng.hpp"
#include "ptsat/schedule.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace ptsat {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::WalkSat:
      return "walksat";
    case Algorithm::PaWalkSat:
      return "pa-walksat";
    case Algorithm::PticWalkSat:
      return "ptic-walksat";
    case Algorithm::StandardPt:
      return "standard-pt";
  }
  return "?";
}

Algorithm algorithm_from_string(std::string_view name) {
  for (auto a : {Algorithm::WalkSat, Algorithm::PaWalkSat,
                 Algorithm::PticWalkSat, Algorithm::StandardPt})
    if (name == to_string(a)) return a;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

namespace {

// WalkSAT from a random start, remembering the best configuration seen.
RunOutcome run_walksat(const Formula& formula, double eta, std::uint64_t cap,
                       std::uint64_t seed) {
  Rng rng(slot_seed(seed, 0));
  SearchState state(formula, random_assignment(formula.num_vars(), rng));
  RunOutcome out;
  out.best_energy = state.energy();
  out.best_assignment = state.assignment();
  std::uint64_t q = 0;
  while (state.energy() > 0 && q < cap) {
    walksat_step(state, eta, rng);
    ++q;
    if (state.energy() < out.best_energy) {
      out.best_energy = state.energy();
      out.best_assignment = state.assignment();
    }
  }
  const bool solved = state.energy() == 0;
  out.record = {solved, q, cap};
  return out;
}

RunOutcome run_pa_walksat(const Formula& formula, const AlgorithmParams& p,
                          std::uint64_t seed) {
  const auto& schedule = p.schedule;
  schedule.require_probabilities();
  const std::uint64_t kappa = schedule.size();
  RunOutcome out;
  std::optional<std::uint64_t> winner;
  for (std::size_t i = 0; i < kappa; ++i) {
    Rng rng(slot_seed(seed, i));
    SearchState state(formula, random_assignment(formula.num_vars(), rng));
    // Replicas after the current winner only matter if they finish sooner.
    const std::uint64_t limit = winner ? *winner : p.pa_cap;
    EpisodeOutcome r;
    if (state.energy() == 0) {
      r = {0, true, 0};
    } else if (limit > 0) {
      r = run_episode(state, KernelKind::WalkSat, schedule[i], limit, rng);
    } else {
      r = {0, false, state.energy()};
    }
    if (i == 0 || state.energy() < out.best_energy) {
      out.best_energy = state.energy();
      out.best_assignment = state.assignment();
    }
    if (r.solved && (!winner || r.steps < *winner)) {
      winner = r.steps;
      out.successful_slot = i;
    }
  }
  out.record.solved = winner.has_value();
  out.record.iterations = kappa * (winner ? *winner : p.pa_cap);
  out.record.budget = kappa * p.pa_cap;
  return out;
}

RunOutcome from_ptic(const PticResult& r) {
  RunOutcome out;
  out.record = {r.solved, r.total_iterations, r.budget};
  out.best_energy = r.best_energy;
  out.best_assignment = r.best_assignment;
  out.successful_slot = r.successful_slot;
  out.trace = r.trace;
  return out;
}

}  // namespace

RunOutcome run_algorithm(const Formula& formula, Algorithm algorithm,
                         const AlgorithmParams& params, std::uint64_t seed,
                         std::size_t cap_stage, bool trace,
                         unsigned replica_workers) {
  switch (algorithm) {
    case Algorithm::WalkSat:
      if (cap_stage >= params.walksat_caps.size())
        throw std::invalid_argument("no WalkSAT cap for this stage");
      return run_walksat(formula, params.walk_probability,
                         params.walksat_caps[cap_stage], seed);
    case Algorithm::PaWalkSat:
      return run_pa_walksat(formula, params, seed);
    case Algorithm::PticWalkSat: {
      PticConfig c;
      c.kernel = KernelKind::WalkSat;
      c.schedule = params.schedule;
      c.steps_per_episode = params.steps_per_episode;
      c.max_episodes = params.max_episodes;
      c.seed = seed;
      c.record_trace = trace;
      c.workers = replica_workers;
      return from_ptic(run_ptic(formula, c));
    }
    case Algorithm::StandardPt: {
      PticConfig c;
      c.schedule = params.pt_schedule;
      c.max_episodes = params.pt_sweeps;
      c.seed = seed;
      c.record_trace = trace;
      c.workers = replica_workers;
      return from_ptic(run_standard_pt(formula, c));
    }
  }
  throw std::logic_error("unhandled algorithm");
}

BenchConfig bench_profile(std::string_view name) {
  BenchConfig c;
  c.profile = std::string(name);
  if (name == "desk") {
    c.gamma = 10;
    c.walksat_gamma = 10;
    c.params.walksat_caps = {100000, 200000};
    c.params.steps_per_episode = 1000;
    c.params.max_episodes = 100;
    c.params.pa_cap = 100000;
    c.params.pt_sweeps = 1000;
  } else if (name == "paper") {
    c.gamma = 100;
    c.walksat_gamma = 5000;
    c.params.walksat_caps = {500000, 1000000};
    c.params.steps_per_episode = 6270;
    c.params.max_episodes = 1000;
    c.params.pa_cap = 6270000;
    c.params.pt_sweeps = 1000;
  } else {
    throw std::invalid_argument("unknown profile '" + std::string(name) +
                                "' (expected desk or paper)");
  }
  return c;
}

namespace {

TemperatureSchedule schedule_from_value(const json& v, std::string& id) {
  if (v.is_string()) {
    id = v.get<std::string>();
    return schedule_preset(id);
  }
  id = v.dump();
  return TemperatureSchedule(v.get<std::vector<double>>());
}

InstanceSpec instance_from_path(const fs::path& path) {
  InstanceSpec s;
  s.path = path;
  s.name = path.stem().string();
  const auto parent = path.parent_path().filename().string();
  s.group = parent.empty() ? "default" : parent;
  return s;
}

}  // namespace

BenchConfig apply_bench_json(BenchConfig c, std::string_view json_text,
                             const fs::path& base_dir) {
  const auto resolve = [&](const std::string& p) {
    const fs::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };
  const auto j = json::parse(json_text);
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  if (j.contains("instances")) {
    for (const auto& item : j["instances"]) {
      if (item.is_string()) {
        c.instances.push_back(instance_from_path(resolve(item.get<std::string>())));
      } else {
        auto s = instance_from_path(resolve(item.at("path").get<std::string>()));
        if (item.contains("name")) s.name = item["name"].get<std::string>();
        if (item.contains("group")) s.group = item["group"].get<std::string>();
        c.instances.push_back(std::move(s));
      }
    }
  }
  if (j.contains("generate")) {
    const auto& g = j["generate"];
    const auto entries = g.is_array() ? g : json::array({g});
    for (const auto& e : entries) {
      const auto preset = e.value("preset", std::string{});
      PlantedSpec base;
      if (!preset.empty()) base = planted_preset(preset);
      base.num_vars = e.value("n", base.num_vars);
      base.num_clauses = e.value("m", base.num_clauses);
      base.clause_size = e.value("k", base.clause_size);
      const auto count = e.value("count", std::size_t{1});
      const auto seed = e.value("seed", std::uint64_t{0});
      const auto group = e.value("group", preset.empty() ? std::string("generated")
                                                         : preset);
      const auto prefix = e.value("name", group);
      for (std::size_t i = 0; i < count; ++i) {
        InstanceSpec s;
        char suffix[32];
        std::snprintf(suffix, sizeof suffix, "-%03zu", i);
        s.name = prefix + suffix;
        s.group = group;
        s.planted = base;
        s.planted->seed = derive_seed(seed, {i});
        c.instances.push_back(std::move(s));
      }
    }
  }
  if (j.contains("algorithms")) {
    c.algorithms.clear();
    for (const auto& a : j["algorithms"])
      c.algorithms.push_back(algorithm_from_string(a.get<std::string>()));
  }
  c.gamma = j.value("gamma", c.gamma);
  c.walksat_gamma = j.value("walksat_gamma", c.walksat_gamma);
  c.seed = j.value("seed", c.seed);
  c.workers = j.value("workers", c.workers);
  if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
  c.trace = j.value("trace", c.trace);
  auto& p = c.params;
  p.walk_probability = j.value("walk_probability", p.walk_probability);
  if (j.contains("walksat_caps"))
    p.walksat_caps = j["walksat_caps"].get<std::vector<std::uint64_t>>();
  if (j.contains("schedule"))
    p.schedule = schedule_from_value(j["schedule"], p.schedule_id);
  p.steps_per_episode = j.value("steps_per_episode", p.steps_per_episode);
  p.max_episodes = j.value("max_episodes", p.max_episodes);
  p.pa_cap = j.value("pa_cap", p.pa_cap);
  if (j.contains("pt_schedule")) {
    std::string unused;
    p.pt_schedule = schedule_from_value(j["pt_schedule"], unused);
  }
  p.pt_sweeps = j.value("pt_sweeps", p.pt_sweeps);
  return c;
}

std::uint64_t run_seed(std::uint64_t master, std::string_view instance,
                       Algorithm algorithm, std::size_t cap_stage,
                       std::size_t repeat) {
  return derive_seed(master, {hash_name(instance),
                              static_cast<std::uint64_t>(algorithm),
                              cap_stage, repeat});
}

namespace {

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body) {
  workers = std::max(1u, workers);
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    const auto n = std::min<std::size_t>(workers, count);
    for (std::size_t w = 0; w < n; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

struct Batch {
  Algorithm algorithm;
  std::size_t stage;
  std::size_t repeats;
  std::vector<RunOutcome> outcomes;
};

void run_batches(const Formula& formula, const BenchConfig& c,
                 const std::string& instance, std::vector<Batch*> batches) {
  std::vector<std::pair<Batch*, std::size_t>> tasks;
  for (auto* b : batches) {
    b->outcomes.resize(b->repeats);
    for (std::size_t r = 0; r < b->repeats; ++r) tasks.emplace_back(b, r);
  }
  parallel_for(tasks.size(), c.workers, [&](std::size_t t) {
    auto [b, r] = tasks[t];
    const bool trace = c.trace && (b->algorithm == Algorithm::PticWalkSat ||
                                   b->algorithm == Algorithm::StandardPt);
    b->outcomes[r] = run_algorithm(
        formula, b->algorithm, c.params,
        run_seed(c.seed, instance, b->algorithm, b->stage, r), b->stage, trace);
  });
}

RepeatSet repeat_set(const Batch& b) {
  RepeatSet s;
  s.tau = b.outcomes.empty() ? 0 : b.outcomes.front().record.budget;
  for (const auto& o : b.outcomes) s.outcomes.push_back(o.record);
  return s;
}

json run_json(const std::string& instance, const Batch& b, std::size_t r) {
  const auto& o = b.outcomes[r];
  json j;
  j["instance"] = instance;
  j["algorithm"] = to_string(b.algorithm);
  j["tau"] = o.record.budget;
  j["repeat"] = r;
  j["solved"] = o.record.solved;
  j["iterations"] = o.record.iterations;
  j["budget"] = o.record.budget;
  j["best_energy"] = o.best_energy;
  return j;
}

Formula load_instance(const InstanceSpec& spec, const fs::path& out_dir) {
  if (!spec.planted) return read_dimacs_file(spec.path);
  auto inst = generate_planted(*spec.planted);
  const auto dir = out_dir / "instances";
  fs::create_directories(dir);
  write_dimacs_file(inst.formula, dir / (spec.name + ".cnf"));
  std::ofstream(dir / (spec.name + ".json"), std::ios::binary)
      << planted_sidecar_json(*spec.planted, inst.planted) << '\n';
  return std::move(inst.formula);
}

struct GroupKey {
  std::string group;
  std::string algorithm;
  auto operator<=>(const GroupKey&) const = default;
};

}  // namespace

BenchSummary run_bench(const BenchConfig& c) {
  if (c.instances.empty()) throw std::invalid_argument("no instances to run");
  if (c.gamma < 1 || c.walksat_gamma < 1)
    throw std::invalid_argument("gamma must be >= 1");
  if (c.algorithms.empty()) throw std::invalid_argument("no algorithms selected");
  if (c.params.walksat_caps.empty())
    throw std::invalid_argument("at least one WalkSAT cap is required");

  fs::create_directories(c.out_dir);
  if (c.trace) fs::create_directories(c.out_dir / "traces");
  std::ofstream csv(c.out_dir / "results.csv", std::ios::binary);
  std::ofstream runs(c.out_dir / "runs.jsonl", std::ios::binary);
  if (!csv || !runs)
    throw std::runtime_error("cannot write into " + c.out_dir.string());
  write_results_csv_header(csv);
  csv.flush();

  BenchSummary summary;
  std::map<GroupKey, std::vector<RepeatSet>> groups;

  for (const auto& spec : c.instances) {
    try {
      const Formula formula = load_instance(spec, c.out_dir);

      std::vector<Batch> batches;
      batches.reserve(c.algorithms.size() + c.params.walksat_caps.size());
      for (auto a : c.algorithms)
        batches.push_back(
            {a, 0, a == Algorithm::WalkSat ? c.walksat_gamma : c.gamma, {}});
      {
        std::vector<Batch*> first;
        for (auto& b : batches) first.push_back(&b);
        run_batches(formula, c, spec.name, first);
      }
      // Escalate WalkSAT caps while a stage found nothing.
      for (std::size_t i = 0; i < batches.size(); ++i) {
        const auto& b = batches[i];
        if (b.algorithm != Algorithm::WalkSat) continue;
        if (repeat_set(b).solved() > 0) continue;
        if (b.stage + 1 >= c.params.walksat_caps.size()) continue;
        Batch next{Algorithm::WalkSat, b.stage + 1, b.repeats, {}};
        batches.insert(batches.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                       std::move(next));
        run_batches(formula, c, spec.name, {&batches[i + 1]});
      }

      std::optional<std::uint64_t> ptic_its;
      bool have_ptic = false;
      for (const auto& b : batches) {
        if (b.algorithm == Algorithm::PticWalkSat) {
          have_ptic = true;
          ptic_its = its99(repeat_set(b));
        }
      }

      std::vector<ResultRow> rows;
      for (std::size_t i = 0; i < batches.size(); ++i) {
        const auto& b = batches[i];
        const auto set = repeat_set(b);
        ResultRow row;
        row.instance = spec.name;
        row.group = spec.group;
        row.algorithm = std::string(to_string(b.algorithm));
        row.gamma = set.gamma();
        row.solved = set.solved();
        row.tau = set.tau;
        row.its = its99(set);
        if (have_ptic && b.algorithm != Algorithm::PticWalkSat && ptic_its &&
            row.its) {
          const auto imp = improvement(static_cast<double>(*ptic_its),
                                       static_cast<double>(*row.its));
          row.delta_vs_baseline = imp.delta;
          row.bucket = imp.bucket;
        }
        rows.push_back(row);
        const bool final_stage = i + 1 == batches.size() ||
                                 batches[i + 1].algorithm != b.algorithm;
        if (final_stage) groups[{spec.group, row.algorithm}].push_back(set);
      }

      for (const auto& b : batches)
        for (std::size_t r = 0; r < b.outcomes.size(); ++r) {
          runs << run_json(spec.name, b, r).dump() << '\n';
          if (c.trace && !b.outcomes[r].trace.empty()) {
            std::ofstream t(c.out_dir / "traces" /
                                (spec.name + "." + std::string(to_string(b.algorithm)) +
                                 ".r" + std::to_string(r) + ".jsonl"),
                            std::ios::binary);
            write_trace_jsonl(t, b.outcomes[r].trace);
          }
        }
      runs.flush();
      for (const auto& row : rows) {
        write_result_csv(csv, row);
        summary.rows.push_back(row);
      }
      csv.flush();
    } catch (const std::exception& e) {
      summary.errors.push_back(spec.name + ": " + e.what());
      std::cerr << "ptsat: instance " << spec.name << " failed: " << e.what()
                << '\n';
    }
  }

  std::ofstream gcsv(c.out_dir / "groups.csv", std::ios::binary);
  gcsv << "# " << kResultsSchema << '\n'
       << "group,algorithm,instances,per_problem_success_rate,per_group_success_rate\n";
  json jgroups = json::array();
  for (const auto& [key, sets] : groups) {
    const double pp = per_problem_success_rate(sets);
    const double pg = per_group_success_rate(sets);
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.4f,%.4f", pp, pg);
    gcsv << key.group << ',' << key.algorithm << ',' << sets.size() << ','
         << buf << '\n';
    jgroups.push_back({{"group", key.group},
                       {"algorithm", key.algorithm},
                       {"instances", sets.size()},
                       {"per_problem_success_rate", pp},
                       {"per_group_success_rate", pg}});
  }

  json out;
  out["schema"] = kResultsSchema;
  out["profile"] = c.profile;
  out["seed"] = c.seed;
  json jrows = json::array();
  for (const auto& row : summary.rows) jrows.push_back(json::parse(result_row_json(row)));
  out["rows"] = std::move(jrows);
  out["groups"] = std::move(jgroups);
  out["errors"] = summary.errors;
  std::ofstream(c.out_dir / "results.json", std::ios::binary) << out.dump(2)
                                                              << '\n';
  return summary;
}

std::vector<std::string> audit_results(const fs::path& out_dir) {
  std::ifstream csv(out_dir / "results.csv", std::ios::binary);
  std::ifstream runs(out_dir / "runs.jsonl", std::ios::binary);
  if (!csv || !runs)
    throw std::runtime_error("missing results.csv or runs.jsonl in " +
                             out_dir.string());
  using Key = std::tuple<std::string, std::string, std::uint64_t>;
  std::map<Key, RepeatSet> sets;
  std::string line;
  while (std::getline(runs, line)) {
    if (line.empty()) continue;
    const auto j = json::parse(line);
    Key key{j.at("instance").get<std::string>(),
            j.at("algorithm").get<std::string>(),
            j.at("tau").get<std::uint64_t>()};
    auto& s = sets[key];
    s.tau = std::get<2>(key);
    s.outcomes.push_back({j.at("solved").get<bool>(),
                          j.at("iterations").get<std::uint64_t>(),
                          j.at("budget").get<std::uint64_t>()});
  }

  std::vector<std::string> problems;
  const auto rows = read_results_csv(csv);
  std::map<std::string, std::optional<std::uint64_t>> ptic_its;
  for (const auto& row : rows)
    if (row.algorithm == "ptic-walksat") ptic_its[row.instance] = row.its;

  for (const auto& row : rows) {
    const std::string where = row.instance + "/" + row.algorithm + "/tau=" +
                              std::to_string(row.tau);
    auto it = sets.find({row.instance, row.algorithm, row.tau});
    if (it == sets.end()) {
      problems.push_back(where + ": no archived runs");
      continue;
    }
    const auto& set = it->second;
    if (set.gamma() != row.gamma)
      problems.push_back(where + ": gamma " + std::to_string(row.gamma) +
                         " vs " + std::to_string(set.gamma()) + " archived");
    if (set.solved() != row.solved)
      problems.push_back(where + ": solved " + std::to_string(row.solved) +
                         " vs " + std::to_string(set.solved()) + " archived");
    if (its99(set) != row.its) problems.push_back(where + ": ITS mismatch");
    auto p = ptic_its.find(row.instance);
    if (row.algorithm != "ptic-walksat" && p != ptic_its.end() && p->second &&
        row.its) {
      const auto imp = improvement(static_cast<double>(*p->second),
                                   static_cast<double>(*row.its));
      if (!row.delta_vs_baseline ||
          std::abs(imp.delta - *row.delta_vs_baseline) > 5e-6)
        problems.push_back(where + ": delta mismatch");
    } else if (row.delta_vs_baseline) {
      problems.push_back(where + ": unexpected delta");
    }
  }
  return problems;
}

}  // namespace ptsat

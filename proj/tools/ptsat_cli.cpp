// ptsat: solve, benchmark, generate, tune, energy, audit, trace-stats.
//
// Exit codes: 0 success (solve: satisfied), 10 solve ran but found no
// solution, 2 usage/input error, 1 audit mismatch or internal failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptsat/bench.hpp"
#include "ptsat/dimacs.hpp"
#include "ptsat/energy_model.hpp"
#include "ptsat/generator.hpp"
#include "ptsat/metrics.hpp"
#include "ptsat/schedule.hpp"

namespace fs = std::filesystem;
using namespace ptsat;

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitUnsolved = 10;
constexpr int kExitUsage = 2;
constexpr int kExitFailure = 1;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Preset id, inline JSON array, or path to a JSON schedule file.
TemperatureSchedule parse_schedule(const std::string& text) {
  if (!text.empty() && text.front() == '[') return schedule_from_json(text);
  if (fs::exists(text)) return schedule_from_json(slurp(text));
  return schedule_preset(text);
}

struct Global {
  std::string config;
  std::string profile = "desk";
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string out_dir;
  bool trace = false;
};

// Profile defaults, then the config file, then flags and PTSAT_* variables.
BenchConfig resolve_config(const Global& g, const CLI::App& app) {
  std::string profile = g.profile;
  std::string file_text;
  if (!g.config.empty()) {
    file_text = slurp(g.config);
    const auto j = nlohmann::json::parse(file_text);
    if (j.contains("profile") && app.get_option("--profile")->count() == 0)
      profile = j["profile"].get<std::string>();
  }
  auto c = bench_profile(profile);
  if (!file_text.empty())
    c = apply_bench_json(std::move(c), file_text,
                         fs::path(g.config).parent_path());
  if (app.get_option("--seed")->count()) c.seed = g.seed;
  if (app.get_option("--workers")->count()) c.workers = g.workers;
  if (app.get_option("--out-dir")->count()) c.out_dir = g.out_dir;
  if (app.get_option("--trace")->count()) c.trace = g.trace;
  return c;
}

void print_assignment(const Assignment& a) {
  std::cout << "v";
  for (std::size_t i = 0; i < a.size(); ++i)
    std::cout << ' ' << (a[i] ? "" : "-") << (i + 1);
  std::cout << " 0\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Replica-exchange stochastic local search for SAT"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--config", g.config, "JSON config file")
      ->envname("PTSAT_CONFIG");
  app.add_option("--profile", g.profile, "Parameter profile: desk or paper")
      ->envname("PTSAT_PROFILE");
  app.add_option("--seed", g.seed, "Master seed")->envname("PTSAT_SEED");
  app.add_option("--workers", g.workers, "Worker threads")
      ->envname("PTSAT_WORKERS");
  app.add_option("--out-dir", g.out_dir, "Output directory")
      ->envname("PTSAT_OUT_DIR");
  app.add_flag("--trace", g.trace, "Write per-run PTIC traces (JSONL)")
      ->envname("PTSAT_TRACE");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve one DIMACS instance");
  std::string solve_file, solve_algorithm = "ptic-walksat", solve_schedule;
  std::optional<std::uint64_t> solve_q, solve_s, solve_cap;
  std::optional<double> solve_eta;
  bool solve_print = false;
  solve->add_option("file", solve_file, "DIMACS CNF file")->required();
  solve->add_option("-a,--algorithm", solve_algorithm,
                    "walksat | pa-walksat | ptic-walksat | standard-pt");
  solve->add_option("--schedule", solve_schedule,
                    "Preset id, JSON array, or schedule file");
  solve->add_option("-Q,--steps-per-episode", solve_q);
  solve->add_option("-S,--episodes", solve_s, "Episode (sweep) limit");
  solve->add_option("--max-iterations", solve_cap,
                    "WalkSAT / PA-WalkSAT per-replica cap");
  solve->add_option("--walk-probability", solve_eta);
  solve->add_flag("--print-assignment", solve_print);

  // bench
  auto* bench = app.add_subcommand("bench", "Run the benchmark protocol");
  std::vector<std::string> bench_files;
  bench->add_option("instances", bench_files, "Extra DIMACS files");

  // generate
  auto* gen = app.add_subcommand("generate", "Generate planted k-SAT instances");
  std::string gen_preset;
  std::optional<std::uint32_t> gen_n, gen_m, gen_k;
  std::size_t gen_count = 1;
  gen->add_option("--preset", gen_preset, "group-2 | group-3 | group-4");
  gen->add_option("-n", gen_n);
  gen->add_option("-m", gen_m);
  gen->add_option("-k", gen_k);
  gen->add_option("--count", gen_count);

  // tune
  auto* tune = app.add_subcommand("tune", "Tune a temperature schedule");
  std::vector<std::string> tune_files;
  std::string tune_initial = "inverse-linear-7", tune_out;
  std::uint64_t tune_q = 6270, tune_episodes = 100;
  std::size_t tune_repeats = 5, tune_rounds = 50;
  tune->add_option("probes", tune_files, "Probe DIMACS files")->required();
  tune->add_option("--schedule", tune_initial, "Initial schedule");
  tune->add_option("-Q,--steps-per-episode", tune_q);
  tune->add_option("--episodes", tune_episodes);
  tune->add_option("--repeats", tune_repeats);
  tune->add_option("--max-rounds", tune_rounds);
  tune->add_option("-o,--output", tune_out, "Write the schedule JSON here");

  // energy
  auto* energy = app.add_subcommand("energy", "Estimate replica-exchange energy overhead");
  std::string energy_preset_name = "pubo-paper", energy_mode;
  std::optional<std::uint64_t> energy_q;
  energy->add_option("preset", energy_preset_name, "pubo-paper | camsat-paper");
  energy->add_option("-Q,--exchange-period", energy_q);
  energy->add_option("--vpu-stat-mode", energy_mode,
                     "per-iteration | per-exchange-amortized");

  // audit
  auto* audit = app.add_subcommand("audit", "Recompute results.csv from runs.jsonl");
  std::string audit_dir;
  audit->add_option("dir", audit_dir, "Benchmark output directory");

  // trace-stats
  auto* tstats = app.add_subcommand("trace-stats", "Summarize a PTIC trace");
  std::string trace_file;
  std::optional<std::size_t> trace_slot;
  tstats->add_option("trace", trace_file, "Trace JSONL")->required();
  tstats->add_option("--slot", trace_slot,
                     "Successful slot (default: lowest zero-energy slot of the last episode)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (solve->parsed()) {
      auto c = resolve_config(g, app);
      auto& p = c.params;
      if (!solve_schedule.empty()) {
        p.schedule = parse_schedule(solve_schedule);
        p.pt_schedule = p.schedule;
      }
      if (solve_q) p.steps_per_episode = *solve_q;
      if (solve_s) {
        p.max_episodes = *solve_s;
        p.pt_sweeps = *solve_s;
      }
      if (solve_cap) {
        p.walksat_caps = {*solve_cap};
        p.pa_cap = *solve_cap;
      }
      if (solve_eta) p.walk_probability = *solve_eta;
      const auto algorithm = algorithm_from_string(solve_algorithm);
      const Formula formula = read_dimacs_file(solve_file);
      const auto out = run_algorithm(formula, algorithm, p, c.seed, 0, c.trace,
                                     c.workers);
      std::cout << "c algorithm " << solve_algorithm << "\n"
                << "c iterations " << out.record.iterations << "\n"
                << "c budget " << out.record.budget << "\n"
                << "c best_energy " << out.best_energy << "\n"
                << (out.record.solved ? "s SATISFIABLE" : "s UNKNOWN") << "\n";
      if (solve_print) print_assignment(out.best_assignment);
      if (c.trace && !out.trace.empty()) {
        const fs::path dir = c.out_dir;
        fs::create_directories(dir);
        std::ofstream t(dir / (fs::path(solve_file).stem().string() + ".trace.jsonl"));
        write_trace_jsonl(t, out.trace);
      }
      return out.record.solved ? kExitSolved : kExitUnsolved;
    }

    if (bench->parsed()) {
      auto c = resolve_config(g, app);
      for (const auto& f : bench_files) {
        InstanceSpec s;
        s.path = f;
        s.name = fs::path(f).stem().string();
        const auto parent = fs::path(f).parent_path().filename().string();
        s.group = parent.empty() ? "default" : parent;
        c.instances.push_back(std::move(s));
      }
      if (c.instances.empty()) {
        std::cerr << "ptsat bench: no instances (pass files or a config)\n";
        return kExitUsage;
      }
      const auto summary = run_bench(c);
      for (const auto& row : summary.rows) write_result_csv(std::cout, row);
      return summary.errors.empty() ? 0 : kExitFailure;
    }

    if (gen->parsed()) {
      PlantedSpec base;
      if (!gen_preset.empty()) base = planted_preset(gen_preset);
      if (gen_n) base.num_vars = *gen_n;
      if (gen_m) base.num_clauses = *gen_m;
      if (gen_k) base.clause_size = *gen_k;
      const fs::path dir = g.out_dir.empty() ? "." : g.out_dir;
      fs::create_directories(dir);
      const std::string prefix = gen_preset.empty() ? "planted" : gen_preset;
      for (std::size_t i = 0; i < gen_count; ++i) {
        auto spec = base;
        spec.seed = gen_count == 1 ? g.seed : derive_seed(g.seed, {i});
        const auto inst = generate_planted(spec);
        char name[64];
        std::snprintf(name, sizeof name, "%s-s%llu", prefix.c_str(),
                      static_cast<unsigned long long>(spec.seed));
        write_dimacs_file(inst.formula, dir / (std::string(name) + ".cnf"));
        std::ofstream(dir / (std::string(name) + ".json"), std::ios::binary)
            << planted_sidecar_json(spec, inst.planted) << '\n';
        std::cout << (dir / (std::string(name) + ".cnf")).string() << '\n';
      }
      return 0;
    }

    if (tune->parsed()) {
      std::vector<Formula> formulas;
      for (const auto& f : tune_files) formulas.push_back(read_dimacs_file(f));
      std::vector<const Formula*> probes;
      for (const auto& f : formulas) probes.push_back(&f);
      PticProbeOptions opt;
      opt.steps_per_episode = tune_q;
      opt.episodes = tune_episodes;
      opt.repeats = tune_repeats;
      opt.seed = g.seed;
      const auto result = tune_schedule(parse_schedule(tune_initial),
                                        make_ptic_probe(probes, opt),
                                        tune_rounds);
      for (const auto& step : result.history) {
        std::cerr << (step.accepted ? "accept " : "reject ")
                  << schedule_to_json(step.schedule) << " rates "
                  << nlohmann::json(step.profile.rates).dump() << " var "
                  << step.variance << '\n';
      }
      const auto text = schedule_to_json(result.schedule);
      if (!tune_out.empty()) std::ofstream(tune_out) << text << '\n';
      std::cout << text << '\n';
      return 0;
    }

    if (energy->parsed()) {
      auto params = energy_preset(energy_preset_name);
      if (energy_q) params.exchange_period = *energy_q;
      if (energy_mode == "per-iteration")
        params.vpu_stat_mode = VpuStaticMode::PerIteration;
      else if (energy_mode == "per-exchange-amortized" || energy_mode.empty())
        params.vpu_stat_mode = VpuStaticMode::PerExchangeAmortized;
      else
        throw std::invalid_argument("unknown VPU static mode '" + energy_mode + "'");
      std::cout << overhead_report_json(params, overhead(params)) << '\n';
      return 0;
    }

    if (audit->parsed()) {
      const fs::path dir = !audit_dir.empty()     ? fs::path(audit_dir)
                           : !g.out_dir.empty() ? fs::path(g.out_dir)
                                                : fs::path("bench-out");
      const auto problems = audit_results(dir);
      for (const auto& p : problems) std::cout << p << '\n';
      if (problems.empty()) std::cout << "audit ok\n";
      return problems.empty() ? 0 : kExitFailure;
    }

    if (tstats->parsed()) {
      std::ifstream in(trace_file, std::ios::binary);
      if (!in) throw std::runtime_error("cannot open " + trace_file);
      const auto trace = read_trace_jsonl(in);
      if (trace.empty()) throw std::invalid_argument("empty trace");
      std::size_t slot = 0;
      if (trace_slot) {
        slot = *trace_slot;
      } else {
        const auto& last = trace.back().slot_energies;
        for (std::size_t i = 0; i < last.size(); ++i)
          if (last[i] == 0) {
            slot = i;
            break;
          }
      }
      const auto s = trace_analytics(trace, slot);
      nlohmann::ordered_json j;
      j["episodes"] = trace.size();
      j["successful_slot"] = slot;
      j["tracked_config"] = s.tracked_config;
      j["distinct_temperatures"] = s.distinct_temperatures;
      j["traversal"] = s.traversal;
      j["slot_energies"] = s.slot_energies;
      std::cout << j.dump() << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "ptsat: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

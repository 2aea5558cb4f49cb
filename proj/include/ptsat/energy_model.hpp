#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ptsat {

// Per-iteration energy overhead of adding replica exchange to an in-memory
// SAT accelerator. All energies in pJ.
enum class Architecture { Pubo, Camsat };

// How E_VPU_stat enters the per-iteration overhead: as stated per iteration,
// or spread over the Q iterations between exchanges.
enum class VpuStaticMode { PerIteration, PerExchangeAmortized };

struct EnergyModelParams {
  Architecture architecture = Architecture::Pubo;
  double total_per_iter = 0.0;  // baseline solver energy per iteration
  // PUBO: extra crossbar energy per cost evaluation (one per exchange).
  // CAMSAT: energy of the always-on cost row, per iteration.
  double xbar = 0.0;
  double xbar_multiplier = 1.0;  // PUBO only
  double adc_dyn = 0.0;          // per conversion (one per exchange)
  double vpu_dyn = 0.0;          // per exchange
  double vpu_stat = 0.0;
  VpuStaticMode vpu_stat_mode = VpuStaticMode::PerExchangeAmortized;
  std::uint64_t exchange_period = 1000;  // Q
  // Published overhead figure for the preset, reported next to the
  // component model; not used in the component arithmetic.
  std::optional<double> reported_overhead_per_iter;
};

struct EnergyComponent {
  std::string name;
  double per_iter;
};

struct OverheadReport {
  Architecture architecture;
  double overhead_per_iter;  // sum of breakdown
  double overhead_percent;   // overhead_per_iter / total_per_iter * 100
  std::vector<EnergyComponent> breakdown;
  // The same model with the other VPU static mode.
  double alternate_mode_overhead_per_iter;
  std::optional<double> reported_overhead_per_iter;
  std::optional<double> reported_percent;
};

// Throws std::invalid_argument on Q == 0, a negative energy, or a zero total.
OverheadReport overhead(const EnergyModelParams& params);

// "pubo-paper" and "camsat-paper".
EnergyModelParams energy_preset(std::string_view name);

// ceil(log2(m)) bits, at least 1. Throws on m == 0.
unsigned adc_resolution(std::uint64_t num_clauses);

std::string_view to_string(Architecture arch);
std::string_view to_string(VpuStaticMode mode);
std::string overhead_report_json(const EnergyModelParams& params,
                                 const OverheadReport& report);

}  // namespace ptsat

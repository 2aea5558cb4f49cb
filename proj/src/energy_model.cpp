#include "ptsat/energy_model.hpp"

#include <bit>
#include <stdexcept>

#include <json.hpp>

namespace ptsat {
namespace {

std::vector<EnergyComponent> components(const EnergyModelParams& p,
                                        VpuStaticMode mode) {
  const double q = static_cast<double>(p.exchange_period);
  const double stat =
      mode == VpuStaticMode::PerIteration ? p.vpu_stat : p.vpu_stat / q;
  if (p.architecture == Architecture::Pubo) {
    return {{"xbar_cost_eval", p.xbar * p.xbar_multiplier / q},
            {"adc", p.adc_dyn / q},
            {"vpu_dyn", p.vpu_dyn / q},
            {"vpu_stat", stat}};
  }
  return {{"xbar_cost_row", p.xbar},
          {"adc", p.adc_dyn / q},
          {"vpu_dyn", p.vpu_dyn / q},
          {"vpu_stat", stat}};
}

double sum(const std::vector<EnergyComponent>& parts) {
  double s = 0.0;
  for (const auto& c : parts) s += c.per_iter;
  return s;
}

}  // namespace

OverheadReport overhead(const EnergyModelParams& p) {
  if (p.exchange_period == 0)
    throw std::invalid_argument("exchange period Q must be >= 1");
  if (p.total_per_iter == 0.0)
    throw std::invalid_argument("total energy per iteration is zero");
  for (double e : {p.total_per_iter, p.xbar, p.xbar_multiplier, p.adc_dyn,
                   p.vpu_dyn, p.vpu_stat})
    if (e < 0.0) throw std::invalid_argument("energies must be non-negative");

  OverheadReport r;
  r.architecture = p.architecture;
  r.breakdown = components(p, p.vpu_stat_mode);
  r.overhead_per_iter = sum(r.breakdown);
  r.overhead_percent = r.overhead_per_iter / p.total_per_iter * 100.0;
  const auto other = p.vpu_stat_mode == VpuStaticMode::PerIteration
                         ? VpuStaticMode::PerExchangeAmortized
                         : VpuStaticMode::PerIteration;
  r.alternate_mode_overhead_per_iter = sum(components(p, other));
  r.reported_overhead_per_iter = p.reported_overhead_per_iter;
  if (p.reported_overhead_per_iter)
    r.reported_percent = *p.reported_overhead_per_iter / p.total_per_iter * 100.0;
  return r;
}

EnergyModelParams energy_preset(std::string_view name) {
  EnergyModelParams p;
  p.adc_dyn = 1.5;
  p.vpu_dyn = 2.2;
  p.vpu_stat = 0.25;
  p.exchange_period = 1000;
  if (name == "pubo-paper") {
    p.architecture = Architecture::Pubo;
    p.total_per_iter = 1.3;
    p.xbar = 0.35;
    p.reported_overhead_per_iter = 0.0086;
  } else if (name == "camsat-paper") {
    p.architecture = Architecture::Camsat;
    p.total_per_iter = 2.6;
    p.xbar = 0.02;
    p.reported_overhead_per_iter = 0.01965;
  } else {
    throw std::invalid_argument("unknown energy preset '" + std::string(name) +
                                "'");
  }
  return p;
}

unsigned adc_resolution(std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("ADC resolution needs m >= 1");
  if (m == 1) return 1;
  return static_cast<unsigned>(std::bit_width(m - 1));
}

std::string_view to_string(Architecture arch) {
  return arch == Architecture::Pubo ? "pubo" : "camsat";
}

std::string_view to_string(VpuStaticMode mode) {
  return mode == VpuStaticMode::PerIteration ? "per-iteration"
                                             : "per-exchange-amortized";
}

std::string overhead_report_json(const EnergyModelParams& p,
                                 const OverheadReport& r) {
  nlohmann::ordered_json j;
  j["architecture"] = to_string(r.architecture);
  j["params"] = {{"total_per_iter_pj", p.total_per_iter},
                 {"xbar_pj", p.xbar},
                 {"xbar_multiplier", p.xbar_multiplier},
                 {"adc_dyn_pj", p.adc_dyn},
                 {"vpu_dyn_pj", p.vpu_dyn},
                 {"vpu_stat_pj", p.vpu_stat},
                 {"vpu_stat_mode", to_string(p.vpu_stat_mode)},
                 {"exchange_period", p.exchange_period}};
  nlohmann::ordered_json parts = nlohmann::ordered_json::object();
  for (const auto& c : r.breakdown) parts[c.name] = c.per_iter;
  j["component_model"] = {{"overhead_pj_per_iter", r.overhead_per_iter},
                          {"overhead_percent", r.overhead_percent},
                          {"breakdown_pj_per_iter", parts}};
  j["alternate_vpu_stat_mode_overhead_pj_per_iter"] =
      r.alternate_mode_overhead_per_iter;
  if (r.reported_overhead_per_iter) {
    j["reported"] = {{"overhead_pj_per_iter", *r.reported_overhead_per_iter},
                     {"overhead_percent", *r.reported_percent},
                     {"component_model_minus_reported_pj",
                      r.overhead_per_iter - *r.reported_overhead_per_iter}};
  }
  return j.dump(2);
}

}  // namespace ptsat

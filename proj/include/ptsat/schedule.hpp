#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ptsat/cnf.hpp"
#include "ptsat/kernels.hpp"
#include "ptsat/ptic.hpp"

namespace ptsat {

// Temperatures equally spaced from t_max down to t_min.
TemperatureSchedule uniform_schedule(std::size_t kappa, double t_min,
                                     double t_max);

// Inverse temperatures equally spaced from 1/t_max up to 1/t_min, listed
// from t_max down to t_min.
TemperatureSchedule inverse_linear_schedule(std::size_t kappa, double t_min,
                                            double t_max);

// "paper-tuned-7" is the tuned seven-slot walk-probability ladder
// [1.0, 0.6, 0.25, 0.18, 0.14, 0.12, 0.1]. Also accepted:
// "uniform-<k>" and "inverse-linear-<k>" over [0.1, 1.0].
TemperatureSchedule schedule_preset(std::string_view name);

std::string schedule_to_json(const TemperatureSchedule& schedule);
TemperatureSchedule schedule_from_json(std::string_view text);

struct ExchangeRateProfile {
  std::vector<double> rates;  // per adjacent pair
  std::vector<std::uint64_t> attempts;
};

ExchangeRateProfile profile_from_stats(const ExchangeStats& stats);

// Population variance.
double rate_variance(const std::vector<double>& rates);

// Thrown when a probe run produced no exchange attempts for some pair.
class InconclusiveProbe : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ExchangeProbe =
    std::function<ExchangeRateProfile(const TemperatureSchedule&)>;

struct TuneStep {
  TemperatureSchedule schedule;
  ExchangeRateProfile profile;
  double variance;
  bool accepted;
};

struct TuneResult {
  TemperatureSchedule schedule;
  std::vector<TuneStep> history;
};

// Variance-reducing ladder adjustment. Each round probes the current ladder;
// if the rate variance went up the round is rejected and the previous ladder
// returned. Otherwise the pair k with the lowest rate is tightened: for the
// first pair the inner temperature T[1] moves to the midpoint of T[0], T[1];
// for the last pair T[k] moves to the midpoint of T[k], T[k+1]; for an
// interior pair the member farther from both ends of the ladder moves to the
// pair midpoint (T[k+1] on a tie). Endpoints never change.
TuneResult tune_schedule(const TemperatureSchedule& initial,
                         const ExchangeProbe& probe,
                         std::size_t max_rounds = 50);

struct PticProbeOptions {
  KernelKind kernel = KernelKind::WalkSat;
  std::uint64_t steps_per_episode = 6270;
  std::uint64_t episodes = 100;
  std::size_t repeats = 5;
  std::uint64_t seed = 0;
};

// Aggregates exchange statistics of PTIC runs over every probe formula and
// repeat. Throws InconclusiveProbe if any pair saw no attempts.
ExchangeProbe make_ptic_probe(std::vector<const Formula*> formulas,
                              PticProbeOptions options);

}  // namespace ptsat

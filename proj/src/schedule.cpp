#include "ptsat/schedule.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

namespace ptsat {
namespace {

void check_range(std::size_t kappa, double t_min, double t_max) {
  if (kappa < 2) throw std::invalid_argument("kappa must be >= 2");
  if (!(t_min > 0.0) || !(t_min < t_max))
    throw std::invalid_argument("need 0 < t_min < t_max");
}

std::size_t parse_count(std::string_view digits, std::string_view name) {
  std::size_t k = 0;
  auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), k);
  if (ec != std::errc{} || ptr != digits.data() + digits.size())
    throw std::invalid_argument("unknown schedule preset '" +
                                std::string(name) + "'");
  return k;
}

}  // namespace

TemperatureSchedule uniform_schedule(std::size_t kappa, double t_min,
                                     double t_max) {
  check_range(kappa, t_min, t_max);
  std::vector<double> t(kappa);
  const double step = (t_max - t_min) / static_cast<double>(kappa - 1);
  for (std::size_t i = 0; i < kappa; ++i)
    t[i] = t_max - step * static_cast<double>(i);
  t.back() = t_min;
  return TemperatureSchedule(std::move(t));
}

TemperatureSchedule inverse_linear_schedule(std::size_t kappa, double t_min,
                                            double t_max) {
  check_range(kappa, t_min, t_max);
  const double beta_min = 1.0 / t_max;
  const double beta_max = 1.0 / t_min;
  const double span = static_cast<double>(kappa - 1);
  std::vector<double> t(kappa);
  for (std::size_t i = 0; i < kappa; ++i) {
    const double w = static_cast<double>(i) / span;
    t[i] = 1.0 / (beta_max * w + beta_min * (1.0 - w));
  }
  t.front() = t_max;
  t.back() = t_min;
  return TemperatureSchedule(std::move(t));
}

TemperatureSchedule schedule_preset(std::string_view name) {
  if (name == "paper-tuned-7")
    return TemperatureSchedule({1.0, 0.6, 0.25, 0.18, 0.14, 0.12, 0.1});
  constexpr std::string_view kUniform = "uniform-";
  constexpr std::string_view kInverse = "inverse-linear-";
  if (name.starts_with(kUniform))
    return uniform_schedule(parse_count(name.substr(kUniform.size()), name),
                            0.1, 1.0);
  if (name.starts_with(kInverse))
    return inverse_linear_schedule(
        parse_count(name.substr(kInverse.size()), name), 0.1, 1.0);
  throw std::invalid_argument("unknown schedule preset '" + std::string(name) +
                              "'");
}

std::string schedule_to_json(const TemperatureSchedule& schedule) {
  return nlohmann::json(schedule.temps()).dump();
}

TemperatureSchedule schedule_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  if (!j.is_array())
    throw std::invalid_argument("schedule JSON must be an array of numbers");
  return TemperatureSchedule(j.get<std::vector<double>>());
}

ExchangeRateProfile profile_from_stats(const ExchangeStats& stats) {
  ExchangeRateProfile p;
  p.attempts = stats.attempts;
  p.rates.resize(stats.attempts.size());
  for (std::size_t i = 0; i < stats.attempts.size(); ++i) {
    if (stats.attempts[i] == 0)
      throw InconclusiveProbe("no exchange attempts for pair " +
                              std::to_string(i));
    p.rates[i] = static_cast<double>(stats.accepts[i]) /
                 static_cast<double>(stats.attempts[i]);
  }
  return p;
}

double rate_variance(const std::vector<double>& rates) {
  if (rates.empty()) return 0.0;
  const double n = static_cast<double>(rates.size());
  const double mean = std::accumulate(rates.begin(), rates.end(), 0.0) / n;
  double ss = 0.0;
  for (double r : rates) ss += (r - mean) * (r - mean);
  return ss / n;
}

TuneResult tune_schedule(const TemperatureSchedule& initial,
                         const ExchangeProbe& probe, std::size_t max_rounds) {
  TuneResult result{initial, {}};
  const std::size_t kappa = initial.size();
  if (kappa < 3) return result;  // no interior temperature to move

  std::vector<double> current = initial.temps();
  double best_variance = std::numeric_limits<double>::infinity();
  for (std::size_t round = 0; round < max_rounds; ++round) {
    const TemperatureSchedule schedule(current);
    auto profile = probe(schedule);
    if (profile.rates.size() != kappa - 1)
      throw std::invalid_argument("probe returned a profile of wrong length");
    const double variance = rate_variance(profile.rates);
    if (variance > best_variance) {
      result.history.push_back({schedule, std::move(profile), variance, false});
      break;
    }
    best_variance = variance;
    result.schedule = schedule;

    const auto k = static_cast<std::size_t>(
        std::min_element(profile.rates.begin(), profile.rates.end()) -
        profile.rates.begin());
    result.history.push_back({schedule, std::move(profile), variance, true});

    std::size_t target;
    if (k == 0) {
      target = 1;
    } else if (k + 1 == kappa - 1) {
      target = k;
    } else {
      const auto depth = [&](std::size_t i) {
        return std::min(i, kappa - 1 - i);
      };
      target = depth(k) > depth(k + 1) ? k : k + 1;
    }
    std::vector<double> next = current;
    next[target] = 0.5 * (current[k] + current[k + 1]);
    // Midpoints eventually collide in floating point; stop there.
    if (next[target] == current[k] || next[target] == current[k + 1]) break;
    current = std::move(next);
  }
  return result;
}

ExchangeProbe make_ptic_probe(std::vector<const Formula*> formulas,
                              PticProbeOptions options) {
  if (formulas.empty())
    throw std::invalid_argument("tuning needs at least one probe formula");
  return [formulas = std::move(formulas),
          options](const TemperatureSchedule& schedule) {
    ExchangeStats total;
    total.attempts.assign(schedule.size() - 1, 0);
    total.accepts.assign(schedule.size() - 1, 0);
    for (std::size_t f = 0; f < formulas.size(); ++f) {
      for (std::size_t r = 0; r < options.repeats; ++r) {
        PticConfig config;
        config.kernel = options.kernel;
        config.schedule = schedule;
        config.steps_per_episode = options.steps_per_episode;
        config.max_episodes = options.episodes;
        config.seed = derive_seed(options.seed, {f, r});
        const auto run = run_ptic(*formulas[f], config);
        for (std::size_t i = 0; i < total.attempts.size(); ++i) {
          total.attempts[i] += run.exchanges.attempts[i];
          total.accepts[i] += run.exchanges.accepts[i];
        }
      }
    }
    return profile_from_stats(total);
  };
}

}  // namespace ptsat

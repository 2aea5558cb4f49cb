#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "ptsat/schedule.hpp"
#include "util.hpp"

using namespace ptsat;

namespace {

void check_temps(const TemperatureSchedule& s, std::vector<double> want,
                 double eps = 1e-4) {
  REQUIRE(s.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i)
    CHECK(s[i] == doctest::Approx(want[i]).epsilon(eps));
}

// Rates that depend only on the gap in inverse temperature.
ExchangeProbe gap_probe() {
  return [](const TemperatureSchedule& s) {
    ExchangeRateProfile p;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      p.rates.push_back(std::exp(-0.5 * std::abs(1 / s[i + 1] - 1 / s[i])));
      p.attempts.push_back(100);
    }
    return p;
  };
}

}  // namespace

TEST_CASE("uniform schedules") {
  check_temps(uniform_schedule(3, 0.1, 1.0), {1.0, 0.55, 0.1});
  check_temps(uniform_schedule(5, 0.2, 1.0), {1.0, 0.8, 0.6, 0.4, 0.2});
  CHECK(uniform_schedule(7, 0.1, 1.0).temps().back() == 0.1);
  CHECK_THROWS_AS(uniform_schedule(1, 0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(uniform_schedule(3, 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("inverse-linear schedule") {
  check_temps(inverse_linear_schedule(7, 0.1, 1.0),
              {1.0, 0.4, 0.25, 0.1818, 0.1429, 0.1176, 0.1});
  const auto s = inverse_linear_schedule(9, 0.05, 2.0);
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double gap_lo = 1 / s[i] - 1 / s[i - 1];
    const double gap_hi = 1 / s[i + 1] - 1 / s[i];
    CHECK(gap_lo == doctest::Approx(gap_hi));
  }
}

TEST_CASE("presets and JSON") {
  check_temps(schedule_preset("paper-tuned-7"),
              {1.0, 0.6, 0.25, 0.18, 0.14, 0.12, 0.1});
  CHECK(schedule_preset("uniform-3") == uniform_schedule(3, 0.1, 1.0));
  CHECK(schedule_preset("inverse-linear-4") == inverse_linear_schedule(4, 0.1, 1.0));
  CHECK_THROWS_AS(schedule_preset("uniform-"), std::invalid_argument);
  CHECK_THROWS_AS(schedule_preset("linear-3"), std::invalid_argument);
  const auto s = schedule_preset("paper-tuned-7");
  CHECK(schedule_to_json(s) == "[1.0,0.6,0.25,0.18,0.14,0.12,0.1]");
  CHECK(schedule_from_json(schedule_to_json(s)) == s);
  CHECK_THROWS(schedule_from_json("{\"t\": 1}"));
  CHECK_THROWS(schedule_from_json("[1.0]"));
}

TEST_CASE("variance is the population variance") {
  CHECK(rate_variance({0.5, 0.5, 0.5}) == 0.0);
  CHECK(rate_variance({0.2, 0.4}) == doctest::Approx(0.01));
  CHECK(rate_variance({0.1, 0.2, 0.6}) == doctest::Approx((0.04 + 0.01 + 0.09) / 3 - 0.0));
}

TEST_CASE("tuner basics") {
  SUBCASE("two slots are returned unchanged") {
    int calls = 0;
    const TemperatureSchedule s({1.0, 0.1});
    const auto r = tune_schedule(s, [&](const TemperatureSchedule& x) {
      ++calls;
      return gap_probe()(x);
    });
    CHECK(r.schedule == s);
    CHECK(calls == 0);
  }
  SUBCASE("variance never increases across accepted rounds") {
    const TemperatureSchedule s({1.0, 0.7, 0.4, 0.1});
    const auto r = tune_schedule(s, gap_probe());
    REQUIRE(!r.history.empty());
    const double v0 = r.history.front().variance;
    double last = v0;
    for (const auto& step : r.history) {
      if (!step.accepted) continue;
      CHECK(step.variance <= last);
      last = step.variance;
    }
    CHECK(rate_variance(gap_probe()(r.schedule).rates) < v0);
    CHECK(r.schedule[0] == 1.0);
    CHECK(r.schedule[3] == 0.1);
    for (std::size_t i = 1; i < r.schedule.size(); ++i)
      CHECK(r.schedule[i] < r.schedule[i - 1]);
    // The returned ladder is the last accepted one.
    for (auto it = r.history.rbegin(); it != r.history.rend(); ++it)
      if (it->accepted) {
        CHECK(it->schedule == r.schedule);
        break;
      }
  }
  SUBCASE("first adjustment follows the pair rules") {
    // Lowest rate at the last pair: T[k] moves to the midpoint of that pair.
    const TemperatureSchedule s({1.0, 0.7, 0.4, 0.1});
    const auto r = tune_schedule(s, gap_probe(), 2);
    REQUIRE(r.history.size() == 2);
    check_temps(r.history[1].schedule, {1.0, 0.7, 0.25, 0.1}, 1e-12);
  }
  SUBCASE("first pair moves T[1]") {
    ExchangeProbe probe = [](const TemperatureSchedule& s) {
      ExchangeRateProfile p;
      p.rates.assign(s.size() - 1, 0.5);
      p.rates[0] = 0.5 - 0.1 * (s[0] - s[1]);
      p.attempts.assign(s.size() - 1, 10);
      return p;
    };
    const auto r = tune_schedule(TemperatureSchedule({1.0, 0.6, 0.3, 0.1}), probe, 2);
    REQUIRE(r.history.size() == 2);
    check_temps(r.history[1].schedule, {1.0, 0.8, 0.3, 0.1}, 1e-12);
  }
  SUBCASE("interior pair moves the deeper member") {
    ExchangeProbe probe = [](const TemperatureSchedule& s) {
      ExchangeRateProfile p;
      p.rates.assign(s.size() - 1, 0.5);
      p.rates[1] = 0.1;
      p.attempts.assign(s.size() - 1, 10);
      return p;
    };
    // kappa = 6, pair (1,2): depth(1) = 1, depth(2) = 2, so T[2] moves.
    const TemperatureSchedule s({1.0, 0.8, 0.6, 0.4, 0.2, 0.1});
    const auto r = tune_schedule(s, probe, 2);
    REQUIRE(r.history.size() == 2);
    check_temps(r.history[1].schedule, {1.0, 0.8, 0.7, 0.4, 0.2, 0.1}, 1e-12);
  }
  SUBCASE("a worsening round is rejected") {
    int round = 0;
    ExchangeProbe probe = [&](const TemperatureSchedule& s) {
      ExchangeRateProfile p;
      p.rates.assign(s.size() - 1, 0.5);
      p.rates[0] = round++ == 0 ? 0.4 : 0.0;
      p.attempts.assign(s.size() - 1, 10);
      return p;
    };
    const TemperatureSchedule s({1.0, 0.5, 0.2, 0.1});
    const auto r = tune_schedule(s, probe);
    CHECK(r.schedule == s);
    REQUIRE(r.history.size() == 2);
    CHECK_FALSE(r.history[1].accepted);
  }
}

TEST_CASE("PTIC probe") {
  SUBCASE("instantly solved formula gives no exchange data") {
    const auto f = testutil::formula(4, oracle::kExample);
    auto probe = make_ptic_probe({&f}, {KernelKind::WalkSat, 6270, 10, 3, 1});
    CHECK_THROWS_AS(probe(TemperatureSchedule({1.0, 0.5, 0.1})), InconclusiveProbe);
  }
  SUBCASE("unsatisfiable formula yields full statistics") {
    const auto f = testutil::formula(2, {{1, 2}, {-1, 2}, {1, -2}, {-1, -2}});
    auto probe = make_ptic_probe({&f}, {KernelKind::WalkSat, 5, 10, 2, 1});
    const auto p = probe(TemperatureSchedule({1.0, 0.5, 0.1}));
    CHECK(p.attempts == std::vector<std::uint64_t>{20, 20});
    for (double r : p.rates) CHECK((r >= 0.0 && r <= 1.0));
  }
  CHECK_THROWS_AS(make_ptic_probe({}, {}), std::invalid_argument);
}

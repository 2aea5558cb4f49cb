#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ptsat/metrics.hpp"
#include "util.hpp"

using namespace ptsat;

namespace {

RepeatSet repeats(std::uint64_t tau, std::size_t solved, std::size_t gamma) {
  RepeatSet s{tau, {}};
  for (std::size_t i = 0; i < gamma; ++i) s.outcomes.push_back({i < solved, tau / 2, tau});
  return s;
}

// Smallest R with 1 - (1 - p)^R >= 0.99, by counting.
std::uint64_t r99_by_count(double p) {
  double miss = 1.0;
  for (std::uint64_t r = 1;; ++r) {
    miss *= 1.0 - p;
    if (1.0 - miss >= 0.99 - 1e-12) return r;
  }
}

}  // namespace

TEST_CASE("ITS examples") {
  CHECK(its99(repeats(500000, 5, 10)) == 3500000u);
  CHECK(its99(repeats(500000, 7, 10)) == 2000000u);
  CHECK(its99(repeats(1234, 100, 100)) == 1234u);
  CHECK(its99(repeats(1234, 99, 100)) == 1234u);
  CHECK_FALSE(its99(repeats(1234, 0, 100)).has_value());
  CHECK_THROWS_AS(its99(RepeatSet{10, {}}), std::invalid_argument);
  RepeatSet bad = repeats(10, 1, 2);
  bad.outcomes[1].budget = 11;
  CHECK_THROWS_AS(its99(bad), std::invalid_argument);
}

TEST_CASE("R99 agrees with direct counting and is monotone") {
  std::uint64_t last = ~0ull;
  for (int i = 1; i <= 98; ++i) {
    const double p = i / 100.0;
    const auto r = r99(p);
    REQUIRE(r.has_value());
    CHECK(*r == r99_by_count(p));
    CHECK(*r <= last);
    last = *r;
  }
  CHECK(r99(0.99) == 1u);
  CHECK(r99(1.0) == 1u);
  CHECK_FALSE(r99(0.0).has_value());
  CHECK_THROWS(r99(1.5));
}

TEST_CASE("iteration counting") {
  CHECK(ptic_iterations(7, 100, 1, 100) == 700);
  CHECK(ptic_iterations(7, 6270, 3, 500) == 91280);
  CHECK(ptic_iterations(1, 10, 2, 5) == 15);
  CHECK_THROWS(ptic_iterations(7, 100, 1, 0));
  CHECK_THROWS(ptic_iterations(7, 100, 1, 101));
  CHECK_THROWS(ptic_iterations(7, 100, 0, 1));
  CHECK(parallel_baseline_iterations(7, 1000) == 7000);
  CHECK_THROWS(parallel_baseline_iterations(7, 0));
}

TEST_CASE("success rates") {
  CHECK(per_problem_success_rate({repeats(10, 3, 10), repeats(10, 7, 10)}) ==
        doctest::Approx(50.0));
  CHECK(per_group_success_rate({repeats(10, 1, 10), repeats(10, 0, 10),
                                repeats(10, 10, 10)}) ==
        doctest::Approx(66.6667).epsilon(1e-4));
  CHECK_THROWS(per_problem_success_rate({}));
  CHECK_THROWS(per_group_success_rate({repeats(10, 1, 10), repeats(10, 1, 5)}));
}

TEST_CASE("improvement buckets") {
  CHECK(bucket_for(-0.2) == ImprovementBucket::Decline);
  CHECK(bucket_for(-1e-9) == ImprovementBucket::Decline);
  CHECK(bucket_for(0.0) == ImprovementBucket::Small);
  CHECK(bucket_for(0.19) == ImprovementBucket::Small);
  CHECK(bucket_for(0.2) == ImprovementBucket::Medium);
  CHECK(bucket_for(0.79) == ImprovementBucket::Medium);
  CHECK(bucket_for(0.8) == ImprovementBucket::Significant);
  CHECK(bucket_for(5.0) == ImprovementBucket::Significant);
  const auto imp = improvement(1000, 1500);
  CHECK(imp.delta == doctest::Approx(0.5));
  CHECK(imp.bucket == ImprovementBucket::Medium);
  CHECK(improvement(1000, 800).bucket == ImprovementBucket::Decline);
  CHECK_THROWS_AS(improvement(0, 5), std::invalid_argument);
  CHECK(to_string(ImprovementBucket::Significant) == "significant");
}

TEST_CASE("trace analytics") {
  SUBCASE("no swaps: one temperature") {
    std::vector<TraceEvent> t;
    for (std::uint64_t e = 1; e <= 5; ++e) t.push_back({e, {3, 2, 1}, {0, 1, 2}});
    const auto s = trace_analytics(t, 2);
    CHECK(s.tracked_config == 2);
    CHECK(s.distinct_temperatures == 1);
    CHECK(s.slot_energies[0] == std::vector<std::uint32_t>(5, 3));
  }
  SUBCASE("single swap") {
    std::vector<TraceEvent> t;
    for (std::uint64_t e = 1; e <= 6; ++e) {
      const bool swapped = e > 3;
      t.push_back({e, {1, 2}, swapped ? std::vector<std::uint32_t>{1, 0}
                                      : std::vector<std::uint32_t>{0, 1}});
    }
    const auto s = trace_analytics(t, 1);
    CHECK(s.tracked_config == 0);
    CHECK(s.distinct_temperatures == 2);
    CHECK(s.traversal[0] == std::vector<std::uint32_t>{0, 0, 0, 1, 1, 1});
  }
  SUBCASE("malformed occupancy") {
    std::vector<TraceEvent> t{{1, {0, 0, 0}, {0, 0, 1}}};
    CHECK_THROWS_AS(trace_analytics(t, 0), std::invalid_argument);
    std::vector<TraceEvent> w{{1, {0, 0}, {0, 1}}, {2, {0, 0, 0}, {0, 1, 2}}};
    CHECK_THROWS_AS(trace_analytics(w, 0), std::invalid_argument);
    CHECK_THROWS_AS(trace_analytics({}, 0), std::invalid_argument);
  }
  SUBCASE("always-accepting exchanges visit every temperature") {
    std::vector<std::vector<int>> units;
    for (int v = 1; v <= 7; ++v) units.push_back({v});
    const auto f = testutil::formula(7, units);
    std::vector<SearchState> states;
    for (int i = 0; i < 7; ++i) states.emplace_back(f, Assignment(7, 0));
    ReplicaEnsemble ens(TemperatureSchedule({1.0, 0.6, 0.25, 0.18, 0.14, 0.12, 0.1}),
                        std::move(states));
    Rng rng(1);
    ExchangeStats stats;
    std::vector<TraceEvent> t;
    for (std::uint64_t e = 1; e <= 14; ++e) {
      t.push_back({e, ens.energies(), ens.occupancy()});
      ens.exchange_phase(rng, stats, 1.0);
    }
    for (std::size_t slot = 0; slot < 7; ++slot)
      CHECK(trace_analytics(t, slot).distinct_temperatures == 7);
  }
}

TEST_CASE("results CSV round trip") {
  std::vector<ResultRow> rows{
      {"g3-000", "group-3", "ptic-walksat", 20, 18, 700000, 2100000, {}, {}},
      {"g3-000", "group-3", "walksat", 20, 0, 100000, {}, {}, {}},
      {"g3-000", "group-3", "pa-walksat", 20, 9, 700000, 5600000,
       1.6666666667, ImprovementBucket::Significant},
  };
  std::stringstream ss;
  write_results_csv_header(ss);
  for (const auto& r : rows) write_result_csv(ss, r);
  const auto text = ss.str();
  CHECK(text.rfind("# ptsat-results v1\n", 0) == 0);
  CHECK(text.find("g3-000,group-3,walksat,20,0,100000,unsolved,,\n") != std::string::npos);
  CHECK(text.find(",5600000,1.666667,significant\n") != std::string::npos);
  const auto back = read_results_csv(ss);
  REQUIRE(back.size() == 3);
  CHECK(back[0].its == 2100000u);
  CHECK_FALSE(back[1].its.has_value());
  CHECK(back[2].delta_vs_baseline.value() == doctest::Approx(1.666667));
  CHECK(back[2].bucket == ImprovementBucket::Significant);
  CHECK(result_row_json(rows[1]).find("\"its\":null") != std::string::npos);
}

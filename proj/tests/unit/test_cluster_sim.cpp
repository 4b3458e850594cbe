#include <doctest.h>

#include <sstream>

#include "greenpod/cluster_sim.hpp"
#include "greenpod/error.hpp"

using namespace greenpod;
using namespace greenpod::sim;

namespace {

const ModelConfig kModel = ModelConfig::defaults();

ExperimentConfig cell(CompetitionLevel level, SchemeName scheme, std::uint64_t seed = 7) {
  ExperimentConfig c;
  c.level = level;
  c.scheme = scheme;
  c.seed = seed;
  return c;
}

std::string csv_of(const std::vector<ExperimentResult>& results, bool timing = false) {
  std::ostringstream out;
  write_csv(out, results, timing);
  return out.str();
}

}  // namespace

TEST_SUITE("cluster_sim") {
  TEST_CASE("pods per scheduler") {
    CHECK(pods_per_scheduler(CompetitionLevel::kLow).total() == 4);
    CHECK(pods_per_scheduler(CompetitionLevel::kMedium).total() == 7);
    const auto high = pods_per_scheduler(CompetitionLevel::kHigh);
    CHECK(high.light == 6);
    CHECK(high.medium == 3);
    CHECK(high.complex == 2);
    CHECK(parse_level("medium") == CompetitionLevel::kMedium);
    CHECK_FALSE(parse_level("extreme").has_value());
  }

  TEST_CASE("savings arithmetic") {
    const auto s = compute_savings(0.5036, 0.3124);
    CHECK(s.savings_kj == doctest::Approx(0.1912));
    CHECK(std::abs(s.optimization_pct - 37.96) <= 0.01);
    CHECK(compute_savings(0.0, 0.0).optimization_pct == 0.0);
    CHECK(compute_savings(1.0, 1.2).optimization_pct == doctest::Approx(-20.0));
  }

  TEST_CASE("summary averages are column means") {
    std::vector<SummaryRow> high;
    const double rows[4][2] = {{0.4471, 0.3867}, {0.4257, 0.2817}, {0.4257, 0.3904}, {0.4257, 0.4050}};
    for (const auto& r : rows) {
      SummaryRow row;
      row.default_kj = r[0];
      row.topsis_kj = r[1];
      const auto s = compute_savings(r[0], r[1]);
      row.savings_kj = s.savings_kj;
      row.optimization_pct = s.optimization_pct;
      row.samples = 1;
      high.push_back(row);
    }
    const auto avg = average_rows(high, "Average (High)");
    CHECK(avg.label == "Average (High)");
    CHECK(std::abs(avg.default_kj - 0.4311) <= 1e-4);
    CHECK(std::abs(avg.topsis_kj - 0.3660) <= 1e-4);
    CHECK(std::abs(avg.optimization_pct - 15.12) <= 0.01);
    CHECK(avg.samples == 4);
    CHECK(average_rows({}, "empty").samples == 0);
  }

  TEST_CASE("baseline scoring") {
    const auto pod = kModel.make_pod(WorkloadClass::kMedium, "m");
    // node-c: 50*3.5/4 + 50*15/16
    CHECK(baseline_score(pod, kModel.nodes[2]) == doctest::Approx(43.75 + 46.875));
    CHECK(baseline_choose(pod, kModel.nodes) == 2u);
    // Equal scores go to the first node listed.
    std::vector<NodeProfile> twins = {kModel.nodes[1], kModel.nodes[1]};
    twins[1].name = "twin";
    CHECK(baseline_choose(pod, twins) == 0u);
    auto full = kModel.nodes[0];
    full.allocated_cpu = 2;
    CHECK_FALSE(baseline_choose(pod, std::vector{full}).has_value());
    CHECK_THROWS_AS(baseline_score(pod, full), Error);
  }

  TEST_CASE("runs are deterministic per seed") {
    for (auto level : kAllLevels) {
      const auto a = run_experiment(cell(level, SchemeName::kEnergyCentric, 11), kModel);
      const auto b = run_experiment(cell(level, SchemeName::kEnergyCentric, 11), kModel);
      CHECK(csv_of({a}) == csv_of({b}));
      CHECK(a.topsis.execution_s == b.topsis.execution_s);
    }
  }

  TEST_CASE("seeds change the noise") {
    const auto a = run_experiment(cell(CompetitionLevel::kHigh, SchemeName::kGeneral, 1), kModel);
    const auto b = run_experiment(cell(CompetitionLevel::kHigh, SchemeName::kGeneral, 2), kModel);
    CHECK(a.topsis.energy_kj != b.topsis.energy_kj);
  }

  TEST_CASE("control experiment is exactly zero") {
    for (auto level : kAllLevels) {
      for (auto scheme : kAllSchemes) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
          auto c = cell(level, scheme, seed);
          c.contender = Contender::kBaseline;
          const auto r = run_experiment(c, kModel);
          CHECK(r.optimization_pct == 0.0);
          CHECK(r.savings_kj == 0.0);
        }
      }
    }
  }

  TEST_CASE("every pod is accounted for and capacity holds") {
    double cluster_cpu = 0;
    double cluster_mem = 0;
    for (const auto& n : kModel.nodes) {
      cluster_cpu += n.vcpus;
      cluster_mem += n.memory_gb;
    }
    for (auto level : kAllLevels) {
      for (auto scheme : kAllSchemes) {
        const auto r = run_experiment(cell(level, scheme), kModel);
        const int total = pods_per_scheduler(level).total();
        for (const auto* o : {&r.topsis, &r.baseline}) {
          CHECK(o->placed + o->unschedulable == total);
          int allocated = 0;
          for (int a : o->allocations) allocated += a;
          CHECK(allocated == o->placed);
          CHECK(static_cast<int>(o->execution_s.size()) == o->placed);
          CHECK(o->energy_kj > 0.0);
          CHECK(o->peak_cpu <= cluster_cpu + 1e-9);
          CHECK(o->peak_memory_gb <= cluster_mem + 1e-9);
        }
      }
    }
  }

  TEST_CASE("the reservation holds capacity on its node") {
    const auto r = run_experiment(cell(CompetitionLevel::kLow, SchemeName::kGeneral), kModel);
    CHECK(r.topsis.peak_cpu >= kModel.simulation.reserved_cpu);
  }

  TEST_CASE("pods that fit nowhere are dropped and counted") {
    auto tiny = kModel;
    tiny.simulation.reserved_cpu = 0;
    tiny.simulation.reserved_memory_gb = 0;
    tiny.nodes = {kModel.nodes[0]};
    tiny.nodes[0].vcpus = 1;
    tiny.simulation.arrival_interval_s = 0;  // no releases between arrivals
    const auto r = run_experiment(cell(CompetitionLevel::kHigh, SchemeName::kEnergyCentric), tiny);
    CHECK(r.topsis.unschedulable > 0);
    CHECK(r.baseline.unschedulable == r.topsis.unschedulable);
    CHECK(r.topsis.placed + r.topsis.unschedulable == 11);
  }

  TEST_CASE("repetitions average consecutive seeds") {
    auto c = cell(CompetitionLevel::kMedium, SchemeName::kEnergyCentric, 3);
    const auto s3 = run_experiment(c, kModel);
    c.seed = 4;
    const auto s4 = run_experiment(c, kModel);
    c.seed = 3;
    c.repetitions = 2;
    const auto both = run_experiment(c, kModel);
    CHECK(both.topsis.energy_kj == doctest::Approx((s3.topsis.energy_kj + s4.topsis.energy_kj) / 2));
    CHECK(both.baseline.energy_kj == doctest::Approx((s3.baseline.energy_kj + s4.baseline.energy_kj) / 2));
    CHECK(both.topsis.placed == s3.topsis.placed + s4.topsis.placed);
  }

  TEST_CASE("invalid experiment settings") {
    auto c = cell(CompetitionLevel::kLow, SchemeName::kGeneral);
    c.repetitions = 0;
    CHECK_THROWS_AS(run_experiment(c, kModel), Error);
    c = cell(CompetitionLevel::kLow, SchemeName::kGeneral);
    c.noise_pct = 100;
    CHECK_THROWS_AS(run_experiment(c, kModel), Error);
    auto m = kModel;
    m.simulation.reserved_node = "missing";
    try {
      run_experiment(cell(CompetitionLevel::kLow, SchemeName::kGeneral), m);
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kConfigError);
    }
    const std::vector<std::uint64_t> no_seeds;
    CHECK_THROWS_AS(run_factorial(kAllLevels, kAllSchemes, no_seeds, {}, kModel), Error);
  }

  TEST_CASE("factorial order and thread independence") {
    const std::vector<std::uint64_t> seeds = {1, 2, 3};
    const auto serial = run_factorial(kAllLevels, kAllSchemes, seeds, {}, kModel, 1);
    const auto parallel = run_factorial(kAllLevels, kAllSchemes, seeds, {}, kModel, 6);
    REQUIRE(serial.size() == 36);
    CHECK(csv_of(serial) == csv_of(parallel));
    CHECK(serial[0].level == CompetitionLevel::kLow);
    CHECK(serial[0].scheme == SchemeName::kGeneral);
    CHECK(serial[1].seed == 2);
    CHECK(serial[3].scheme == SchemeName::kEnergyCentric);
    CHECK(serial[12].level == CompetitionLevel::kMedium);
  }

  TEST_CASE("summary layout") {
    const std::vector<std::uint64_t> seeds = {1, 2};
    const auto results = run_factorial(kAllLevels, kAllSchemes, seeds, {}, kModel, 2);
    const auto rows = summarize(results);
    REQUIRE(rows.size() == 16);
    CHECK(rows[0].label == "General (Balanced)");
    CHECK(rows[0].samples == 2);
    CHECK(rows[4].label == "Average (Low)");
    CHECK(rows[9].label == "Average (Medium)");
    CHECK(rows[14].label == "Average (High)");
    CHECK(rows[15].label == "Average (All)");
    CHECK(rows[15].samples == 24);
    double mean_pct = 0;
    for (const auto& r : results) mean_pct += r.optimization_pct;
    CHECK(rows[15].optimization_pct == doctest::Approx(mean_pct / results.size()));

    std::ostringstream table;
    write_summary(table, rows);
    CHECK(table.str().find("Medium Competition") != std::string::npos);
    std::ostringstream heat;
    write_heatmap(heat, rows);
    int lines = 0;
    for (char ch : heat.str()) lines += ch == '\n';
    CHECK(lines == 13);  // header + 12 cells
  }

  TEST_CASE("CSV layout") {
    const auto r = run_experiment(cell(CompetitionLevel::kMedium, SchemeName::kEnergyCentric, 42), kModel);
    const auto csv = csv_of({r});
    CHECK(csv.rfind("level,scheme,seed,default_kj,topsis_kj,savings_kj,optimization_pct,mean_sched_ms,"
                    "topsis_alloc_node-a,",
                    0) == 0);
    CHECK(csv.find("\nmedium,energy_centric,42,") != std::string::npos);
    // Timing stays out of the CSV unless requested.
    CHECK(csv.find(",,") != std::string::npos);
    CHECK(csv_of({r}, true).find(",,") == std::string::npos);
    const auto doc = to_json(r, false);
    CHECK_FALSE(doc["topsis"].contains("mean_sched_ms"));
    CHECK(doc["topsis"]["allocations"].size() == 4);
  }

  TEST_CASE("energy-centric placement favours the efficient node") {
    const auto r = run_experiment(cell(CompetitionLevel::kMedium, SchemeName::kEnergyCentric, 42), kModel);
    CHECK(r.topsis.allocations[0] > r.baseline.allocations[0]);
    CHECK(r.optimization_pct > 0.0);
  }
}

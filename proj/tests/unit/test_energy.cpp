#include <doctest.h>

#include "greenpod/config.hpp"
#include "greenpod/energy_model.hpp"
#include "greenpod/error.hpp"

using namespace greenpod;
using namespace greenpod::energy;

namespace {

const PowerParams kTypical{60, 8e6, 350, 3e6};

NodeProfile node(double vcpus, double mem, double speed, double scale) {
  NodeProfile n;
  n.name = "n";
  n.vcpus = vcpus;
  n.memory_gb = mem;
  n.speed_factor = speed;
  n.power_scale = scale;
  return n;
}

WorkloadSpec pod(double cpu, double mem, double work, WorkloadClass cls = WorkloadClass::kMedium) {
  return {"p", cls, cpu, mem, work};
}

}  // namespace

TEST_SUITE("energy") {
  TEST_CASE("blade power examples") {
    CHECK(blade_power_w({}) == doctest::Approx(14.45));
    // 14.45 + 14.16 - 0.3576 + 0.9835 + 0.093
    CHECK(blade_power_w(kTypical) == doctest::Approx(29.3289).epsilon(1e-12));
    CHECK(blade_power_w({100, 0, 0, 0}) == doctest::Approx(38.05));
  }

  TEST_CASE("job energy") {
    const double kwh = job_energy_kwh(kTypical, {1.45, 34 * 60});
    CHECK(kwh == doctest::Approx(0.0240985795).epsilon(1e-10));
    CHECK(std::abs(kwh - 0.024) <= 0.001);
    CHECK(job_energy_kwh(kTypical, {1.45, 0}) == 0.0);
    CHECK(job_energy_kwh({}, {1.0, 3600}) == doctest::Approx(0.01445));
  }

  TEST_CASE("job energy is linear in runtime and PUE") {
    const double base = job_energy_kwh(kTypical, {1.2, 1000});
    CHECK(job_energy_kwh(kTypical, {1.2, 3000}) == doctest::Approx(3 * base));
    CHECK(job_energy_kwh(kTypical, {2.4, 1000}) == doctest::Approx(2 * base));
  }

  TEST_CASE("power is clamped at zero") {
    CHECK(blade_power_w({0, 1e12, 0, 0}) == 0.0);
  }

  TEST_CASE("power monotonicity") {
    for (double u = 0; u < 100; u += 12.5) {
      CHECK(blade_power_w({u + 1, 8e6, 350, 3e6}) > blade_power_w({u, 8e6, 350, 3e6}) - 1e-12);
    }
    CHECK(blade_power_w({60, 9e6, 350, 3e6}) < blade_power_w(kTypical));
    CHECK(blade_power_w({60, 8e6, 400, 3e6}) > blade_power_w(kTypical));
    CHECK(blade_power_w({60, 8e6, 350, 4e6}) > blade_power_w(kTypical));
  }

  TEST_CASE("central difference of power in u_cpu is the CPU coefficient") {
    for (double u : {5.0, 33.0, 60.0, 95.0}) {
      const double h = 0.5;  // the model is linear, so a wide step is exact up to rounding
      const double d = (blade_power_w({u + h, 8e6, 350, 3e6}) - blade_power_w({u - h, 8e6, 350, 3e6})) /
                       (2 * h);
      CHECK(std::abs(d - 0.236) <= 1e-9);
    }
  }

  TEST_CASE("invalid inputs") {
    CHECK_THROWS_AS(blade_power_w({101, 0, 0, 0}), Error);
    CHECK_THROWS_AS(blade_power_w({-1, 0, 0, 0}), Error);
    CHECK_THROWS_AS(blade_power_w({50, -1, 0, 0}), Error);
    CHECK_THROWS_AS(job_energy_kwh(kTypical, {0.9, 10}), Error);
    CHECK_THROWS_AS(job_energy_kwh(kTypical, {1.2, -1}), Error);
  }

  TEST_CASE("execution time") {
    const EnergyModel m;
    CHECK(m.predict_exec_time_s(pod(1.0, 1, 100), node(4, 8, 1.0, 1.0)) == doctest::Approx(100));
    CHECK(m.predict_exec_time_s(pod(1.0, 1, 100), node(4, 8, 1.4, 1.0)) ==
          doctest::Approx(71.428571428571).epsilon(1e-12));
    // Only the free share of the request is usable.
    auto busy = node(2, 8, 1.0, 1.0);
    busy.allocated_cpu = 1.5;
    CHECK(m.predict_exec_time_s(pod(0.5, 1, 100), busy) == doctest::Approx(200));
  }

  TEST_CASE("complex pod execution time per category") {
    const auto cfg = ModelConfig::defaults();
    const auto m = cfg.energy_model();
    const auto p = cfg.make_pod(WorkloadClass::kComplex, "c");
    const double want[] = {666.66666666666667, 666.66666666666667, 500.0, 750.0};
    for (std::size_t i = 0; i < cfg.nodes.size(); ++i) {
      CHECK(m.predict_exec_time_s(p, cfg.nodes[i]) == doctest::Approx(want[i]).epsilon(1e-12));
    }
  }

  TEST_CASE("pod energy: medium pod on node-b") {
    const auto cfg = ModelConfig::defaults();
    const auto m = cfg.energy_model();
    const auto p = cfg.make_pod(WorkloadClass::kMedium, "m");
    // u_cpu 25%: 14.45 + 5.9 - 0.3576 + 0.9835 + 0.093 = 21.0689 W,
    // 666.67 s at power scale 0.8 -> 11.2367 kJ.
    CHECK(m.predict_pod_energy_kj(p, cfg.nodes[1]) == doctest::Approx(11.236746666666667).epsilon(1e-12));
  }

  TEST_CASE("pod energy is linear in power_scale") {
    const EnergyModel m;
    const auto p = pod(0.5, 1, 300);
    const double lo = m.predict_pod_energy_kj(p, node(2, 8, 1.0, 0.7));
    const double hi = m.predict_pod_energy_kj(p, node(2, 8, 1.0, 1.3));
    CHECK(lo / hi == doctest::Approx(0.7 / 1.3).epsilon(1e-14));
  }

  TEST_CASE("pod energy vanishes with the work") {
    const EnergyModel m;
    double prev = m.predict_pod_energy_kj(pod(0.5, 1, 1.0), node(2, 8, 1, 1));
    for (double w : {1e-2, 1e-4, 1e-8}) {
      const double e = m.predict_pod_energy_kj(pod(0.5, 1, w), node(2, 8, 1, 1));
      CHECK(e < prev);
      prev = e;
    }
    CHECK(prev < 1e-9);
  }

  TEST_CASE("pod energy falls with speed and rises with power scale") {
    const EnergyModel m;
    const auto p = pod(0.5, 1, 300);
    CHECK(m.predict_pod_energy_kj(p, node(2, 8, 1.5, 1)) < m.predict_pod_energy_kj(p, node(2, 8, 1.0, 1)));
    CHECK(m.predict_pod_energy_kj(p, node(2, 8, 1, 1.1)) > m.predict_pod_energy_kj(p, node(2, 8, 1, 1.0)));
  }

  TEST_CASE("predictions reject pods that do not fit") {
    const EnergyModel m;
    auto full = node(2, 8, 1, 1);
    full.allocated_cpu = 2;
    try {
      m.predict_pod_energy_kj(pod(0.5, 1, 10), full);
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kInfeasible);
    }
    CHECK_THROWS_AS(m.predict_exec_time_s(pod(0.5, 9, 10), node(2, 8, 1, 1)), Error);
  }
}

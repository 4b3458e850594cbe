#pragma once

// Blade-server power model with PUE-adjusted job energy, plus the per-pod
// execution-time and energy predictions used as scheduling criteria.
//
//   P = idle + a*u_cpu - b*u_mem + c*u_disk + d*u_net   [W], clamped at 0
//
// u_cpu is a percentage (0..100); the other inputs are operations per second.

#include <array>

#include "greenpod/cluster.hpp"

namespace greenpod::energy {

struct PowerParams {
  double u_cpu = 0.0;   // percent
  double u_mem = 0.0;   // memory accesses / s
  double u_disk = 0.0;  // I/O operations / s
  double u_net = 0.0;   // network operations / s

  void validate() const;
};

struct PowerCoefficients {
  double idle_w = 14.45;
  double cpu_w_per_pct = 0.236;
  double mem_w_per_access = 4.47e-8;  // subtracted
  double disk_w_per_op = 0.00281;
  double net_w_per_op = 3.1e-8;
};

struct EnergyContext {
  double pue = 1.45;
  double runtime_s = 34.0 * 60.0;

  void validate() const;
};

/// Memory / disk / network activity attributed to a workload class. u_cpu is
/// ignored here; it comes from the pod's request.
struct ClassActivity {
  std::array<PowerParams, 3> by_class{};  // indexed by WorkloadClass

  const PowerParams& operator[](WorkloadClass cls) const {
    return by_class[static_cast<std::size_t>(cls)];
  }
  PowerParams& operator[](WorkloadClass cls) { return by_class[static_cast<std::size_t>(cls)]; }

  /// Light = 0.5x, Medium = 1x, Complex = 2x the typical point
  /// (8e6 memory accesses/s, 350 I/O ops/s, 3e6 network ops/s).
  static ClassActivity defaults();
};

double blade_power_w(const PowerParams& params, const PowerCoefficients& coeffs = {});

double job_energy_kwh(const PowerParams& params, const EnergyContext& ctx,
                      const PowerCoefficients& coeffs = {});

/// Predictions for a pod placed on a node. Both throw Error(kInfeasible) when
/// the node lacks free capacity for the pod.
class EnergyModel {
 public:
  EnergyModel() : EnergyModel(PowerCoefficients{}, ClassActivity::defaults()) {}
  EnergyModel(PowerCoefficients coeffs, ClassActivity activity)
      : coeffs_(coeffs), activity_(activity) {}

  /// work_units / (min(cpu_request, free_cpu) * speed_factor)
  double predict_exec_time_s(const WorkloadSpec& pod, const NodeProfile& node) const;

  /// blade power at u_cpu = 100*cpu_request/vcpus, times power_scale and the
  /// predicted execution time, in kJ.
  double predict_pod_energy_kj(const WorkloadSpec& pod, const NodeProfile& node) const;

  const PowerCoefficients& coefficients() const { return coeffs_; }
  const ClassActivity& activity() const { return activity_; }

 private:
  PowerCoefficients coeffs_;
  ClassActivity activity_;
};

}  // namespace greenpod::energy

#include "greenpod/energy_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "greenpod/error.hpp"

namespace greenpod::energy {

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

void require_fit(const WorkloadSpec& pod, const NodeProfile& node) {
  if (!fits(pod, node)) {
    throw Error(ErrorCode::kInfeasible,
                "pod '" + pod.name + "' does not fit on node '" + node.name + "'");
  }
}

}  // namespace

void PowerParams::validate() const {
  if (!finite_nonneg(u_cpu) || u_cpu > 100.0) {
    throw Error(ErrorCode::kInvalidParams, "u_cpu must be a percentage in [0, 100]");
  }
  if (!finite_nonneg(u_mem) || !finite_nonneg(u_disk) || !finite_nonneg(u_net)) {
    throw Error(ErrorCode::kInvalidParams, "activity rates must be finite and nonnegative");
  }
}

void EnergyContext::validate() const {
  if (!std::isfinite(pue) || pue < 1.0) {
    throw Error(ErrorCode::kInvalidParams, "pue must be >= 1");
  }
  if (!finite_nonneg(runtime_s)) {
    throw Error(ErrorCode::kInvalidParams, "runtime must be finite and nonnegative");
  }
}

ClassActivity ClassActivity::defaults() {
  constexpr PowerParams typical{0.0, 8e6, 350.0, 3e6};
  ClassActivity table;
  const auto scaled = [&](double k) {
    return PowerParams{0.0, typical.u_mem * k, typical.u_disk * k, typical.u_net * k};
  };
  table[WorkloadClass::kLight] = scaled(0.5);
  table[WorkloadClass::kMedium] = scaled(1.0);
  table[WorkloadClass::kComplex] = scaled(2.0);
  return table;
}

double blade_power_w(const PowerParams& params, const PowerCoefficients& coeffs) {
  params.validate();
  const double p = coeffs.idle_w + coeffs.cpu_w_per_pct * params.u_cpu -
                   coeffs.mem_w_per_access * params.u_mem + coeffs.disk_w_per_op * params.u_disk +
                   coeffs.net_w_per_op * params.u_net;
  // The memory term is subtractive; physical power cannot go below zero.
  return std::max(0.0, p);
}

double job_energy_kwh(const PowerParams& params, const EnergyContext& ctx,
                      const PowerCoefficients& coeffs) {
  ctx.validate();
  return blade_power_w(params, coeffs) * ctx.pue * ctx.runtime_s / 3.6e6;
}

double EnergyModel::predict_exec_time_s(const WorkloadSpec& pod, const NodeProfile& node) const {
  require_fit(pod, node);
  const double cores = std::min(pod.cpu_request, node.free_cpu());
  return pod.work_units / (cores * node.speed_factor);
}

double EnergyModel::predict_pod_energy_kj(const WorkloadSpec& pod, const NodeProfile& node) const {
  const double exec_s = predict_exec_time_s(pod, node);
  PowerParams params = activity_[pod.workload_class];
  params.u_cpu = std::min(100.0, 100.0 * pod.cpu_request / node.vcpus);
  return blade_power_w(params, coeffs_) * node.power_scale * exec_s / 1000.0;
}

}  // namespace greenpod::energy

#include "greenpod/scheduling.hpp"

#include <algorithm>
#include <cmath>

#include "greenpod/error.hpp"

namespace greenpod {

std::string_view to_string(SchemeName name) {
  switch (name) {
    case SchemeName::kGeneral: return "general";
    case SchemeName::kEnergyCentric: return "energy_centric";
    case SchemeName::kPerformanceCentric: return "performance_centric";
    case SchemeName::kResourceEfficient: return "resource_efficient";
  }
  return "?";
}

std::optional<SchemeName> parse_scheme(std::string_view text) {
  if (text == "general" || text == "balanced") return SchemeName::kGeneral;
  if (text == "energy_centric" || text == "energy") return SchemeName::kEnergyCentric;
  if (text == "performance_centric" || text == "performance") {
    return SchemeName::kPerformanceCentric;
  }
  if (text == "resource_efficient" || text == "resource") return SchemeName::kResourceEfficient;
  return std::nullopt;
}

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::kInsufficientCpu: return "insufficient_cpu";
    case RejectReason::kInsufficientMemory: return "insufficient_memory";
  }
  return "?";
}

void WeightScheme::validate() const {
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorCode::kInvalidWeights,
                  std::string(to_string(name)) + " has a negative or non-finite weight");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > topsis::kWeightTolerance) {
    throw Error(ErrorCode::kInvalidWeights,
                std::string(to_string(name)) + " weights must sum to 1");
  }
}

SchemeSet SchemeSet::defaults() {
  SchemeSet set;
  set[SchemeName::kGeneral] = {SchemeName::kGeneral, {0.2, 0.2, 0.2, 0.2, 0.2}};
  set[SchemeName::kEnergyCentric] = {SchemeName::kEnergyCentric, {0.15, 0.40, 0.15, 0.15, 0.15}};
  set[SchemeName::kPerformanceCentric] = {SchemeName::kPerformanceCentric,
                                          {0.40, 0.15, 0.15, 0.15, 0.15}};
  set[SchemeName::kResourceEfficient] = {SchemeName::kResourceEfficient,
                                         {0.15, 0.20, 0.20, 0.20, 0.25}};
  return set;
}

Feasibility feasible_nodes(const WorkloadSpec& pod, std::span<const NodeProfile> nodes) {
  if (nodes.empty()) throw Error(ErrorCode::kNoNodes, "node list is empty");
  Feasibility out;
  for (const auto& node : nodes) {
    if (node.free_cpu() + kCapacityEpsilon < pod.cpu_request) {
      out.rejected.emplace(node.name, RejectReason::kInsufficientCpu);
    } else if (node.free_memory_gb() + kCapacityEpsilon < pod.memory_request_gb) {
      out.rejected.emplace(node.name, RejectReason::kInsufficientMemory);
    } else {
      out.feasible.push_back(node);
    }
  }
  return out;
}

CriteriaRow criteria_row(const WorkloadSpec& pod, const NodeProfile& node,
                         const energy::EnergyModel& model) {
  if (!fits(pod, node)) {
    throw Error(ErrorCode::kInfeasible,
                "pod '" + pod.name + "' does not fit on node '" + node.name + "'");
  }
  const double cpu_after = node.allocated_cpu + pod.cpu_request;
  const double mem_after = node.allocated_memory_gb + pod.memory_request_gb;
  const double cpu_fraction = std::min(1.0, cpu_after / node.vcpus);
  const double mem_fraction = std::min(1.0, mem_after / node.memory_gb);
  return {
      model.predict_exec_time_s(pod, node),
      model.predict_pod_energy_kj(pod, node),
      std::max(0.0, node.vcpus - cpu_after),
      std::max(0.0, node.memory_gb - mem_after),
      1.0 - std::abs(cpu_fraction - mem_fraction),
  };
}

topsis::DecisionMatrix build_matrix(const WorkloadSpec& pod, std::span<const NodeProfile> feasible,
                                    const WeightScheme& scheme, const energy::EnergyModel& model) {
  if (feasible.empty()) {
    throw Error(ErrorCode::kNoFeasibleNodes, "no feasible node for pod '" + pod.name + "'");
  }
  scheme.validate();
  std::vector<topsis::CriterionSpec> criteria;
  criteria.reserve(kCriteriaCount);
  for (std::size_t j = 0; j < kCriteriaCount; ++j) {
    criteria.push_back({std::string(kCriteriaNames[j]), kCriteriaDirections[j], scheme.weights[j]});
  }
  std::vector<std::string> ids;
  std::vector<double> values;
  ids.reserve(feasible.size());
  values.reserve(feasible.size() * kCriteriaCount);
  for (const auto& node : feasible) {
    ids.push_back(node.name);
    const auto row = criteria_row(pod, node, model);
    values.insert(values.end(), row.begin(), row.end());
  }
  return topsis::DecisionMatrix(std::move(ids), std::move(criteria), std::move(values));
}

ScheduleDecision schedule(const WorkloadSpec& pod, std::span<const NodeProfile> nodes,
                          const WeightScheme& scheme, const energy::EnergyModel& model) {
  auto filtered = feasible_nodes(pod, nodes);
  if (filtered.feasible.empty()) {
    throw Error(ErrorCode::kNoFeasibleNodes,
                "pod '" + pod.name + "' is unschedulable: every node was filtered out");
  }
  ScheduleDecision decision;
  decision.pod = pod.name;
  decision.scheme_used = scheme.name;
  decision.rank_result = topsis::rank(build_matrix(pod, filtered.feasible, scheme, model));
  decision.chosen_node = decision.rank_result.best();
  decision.filtered_out = std::move(filtered.rejected);
  return decision;
}

WeightScheme select_weights(const SchemeSet& schemes, SchemeName name, double cluster_utilization,
                            bool adaptive) {
  WeightScheme chosen = schemes[name];
  if (!adaptive) return chosen;
  const double u = std::isfinite(cluster_utilization) ? std::clamp(cluster_utilization, 0.0, 1.0) : 0.0;
  const double alpha = std::clamp((u - kAdaptiveThreshold) / (1.0 - kAdaptiveThreshold), 0.0, 1.0);
  if (alpha == 0.0) return chosen;
  const auto& target = schemes[SchemeName::kResourceEfficient].weights;
  for (std::size_t j = 0; j < kCriteriaCount; ++j) {
    chosen.weights[j] = (1.0 - alpha) * chosen.weights[j] + alpha * target[j];
  }
  return chosen;
}

double cluster_cpu_utilization(std::span<const NodeProfile> nodes) {
  double used = 0.0;
  double total = 0.0;
  for (const auto& n : nodes) {
    used += n.allocated_cpu;
    total += n.vcpus;
  }
  return total > 0.0 ? std::clamp(used / total, 0.0, 1.0) : 0.0;
}

}  // namespace greenpod

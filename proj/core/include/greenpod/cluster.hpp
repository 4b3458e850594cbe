#pragma once

// Nodes and pods shared by the energy model, scheduler, simulator and service.

#include <optional>
#include <string>
#include <string_view>

namespace greenpod {

/// A energy-efficient, B balanced, C high-performance,
/// Default hosts system components.
enum class NodeCategory { kA, kB, kC, kDefault };

enum class WorkloadClass { kLight, kMedium, kComplex };

std::string_view to_string(NodeCategory category);
std::string_view to_string(WorkloadClass cls);
std::optional<NodeCategory> parse_node_category(std::string_view text);
std::optional<WorkloadClass> parse_workload_class(std::string_view text);

/// Slack used by every capacity comparison so that accumulated fractional
/// requests (0.2 + 0.2 + ...) do not spuriously overflow a node.
inline constexpr double kCapacityEpsilon = 1e-9;

struct NodeProfile {
  std::string name;
  NodeCategory category = NodeCategory::kB;
  double vcpus = 0.0;
  double memory_gb = 0.0;
  double allocated_cpu = 0.0;
  double allocated_memory_gb = 0.0;
  double speed_factor = 1.0;  // relative execution speed, 1 = baseline
  double power_scale = 1.0;   // relative power draw, 1 = baseline

  double free_cpu() const { return vcpus - allocated_cpu; }
  double free_memory_gb() const { return memory_gb - allocated_memory_gb; }

  /// Throws Error(kInvalidParams) when an invariant is violated.
  void validate() const;
};

struct WorkloadSpec {
  std::string name;
  WorkloadClass workload_class = WorkloadClass::kMedium;
  double cpu_request = 0.0;
  double memory_request_gb = 0.0;
  double work_units = 0.0;  // core-seconds of compute at speed_factor 1

  void validate() const;
};

/// Does `pod` fit in the free capacity of `node`?
bool fits(const WorkloadSpec& pod, const NodeProfile& node);

}  // namespace greenpod

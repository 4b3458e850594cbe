#include "greenpod/cluster.hpp"

#include <cmath>

#include "greenpod/error.hpp"

namespace greenpod {

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }
bool finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

[[noreturn]] void invalid(const std::string& who, const char* what) {
  throw Error(ErrorCode::kInvalidParams, who + ": " + what);
}

}  // namespace

std::string_view to_string(NodeCategory category) {
  switch (category) {
    case NodeCategory::kA: return "A";
    case NodeCategory::kB: return "B";
    case NodeCategory::kC: return "C";
    case NodeCategory::kDefault: return "Default";
  }
  return "?";
}

std::string_view to_string(WorkloadClass cls) {
  switch (cls) {
    case WorkloadClass::kLight: return "light";
    case WorkloadClass::kMedium: return "medium";
    case WorkloadClass::kComplex: return "complex";
  }
  return "?";
}

std::optional<NodeCategory> parse_node_category(std::string_view text) {
  if (text == "A" || text == "a") return NodeCategory::kA;
  if (text == "B" || text == "b") return NodeCategory::kB;
  if (text == "C" || text == "c") return NodeCategory::kC;
  if (text == "Default" || text == "default") return NodeCategory::kDefault;
  return std::nullopt;
}

std::optional<WorkloadClass> parse_workload_class(std::string_view text) {
  if (text == "light" || text == "Light") return WorkloadClass::kLight;
  if (text == "medium" || text == "Medium") return WorkloadClass::kMedium;
  if (text == "complex" || text == "Complex") return WorkloadClass::kComplex;
  return std::nullopt;
}

void NodeProfile::validate() const {
  if (name.empty()) invalid("node", "name must not be empty");
  if (!finite_pos(vcpus)) invalid(name, "vcpus must be > 0");
  if (!finite_pos(memory_gb)) invalid(name, "memory_gb must be > 0");
  if (!finite_nonneg(allocated_cpu) || allocated_cpu > vcpus + kCapacityEpsilon) {
    invalid(name, "allocated_cpu must lie in [0, vcpus]");
  }
  if (!finite_nonneg(allocated_memory_gb) || allocated_memory_gb > memory_gb + kCapacityEpsilon) {
    invalid(name, "allocated_memory_gb must lie in [0, memory_gb]");
  }
  if (!finite_pos(speed_factor)) invalid(name, "speed_factor must be > 0");
  if (!finite_pos(power_scale)) invalid(name, "power_scale must be > 0");
}

void WorkloadSpec::validate() const {
  const std::string who = name.empty() ? std::string("pod") : name;
  if (!finite_pos(cpu_request)) invalid(who, "cpu_request must be > 0");
  if (!finite_pos(memory_request_gb)) invalid(who, "memory_request_gb must be > 0");
  if (!finite_pos(work_units)) invalid(who, "work_units must be > 0");
}

bool fits(const WorkloadSpec& pod, const NodeProfile& node) {
  return node.free_cpu() + kCapacityEpsilon >= pod.cpu_request &&
         node.free_memory_gb() + kCapacityEpsilon >= pod.memory_request_gb;
}

}  // namespace greenpod

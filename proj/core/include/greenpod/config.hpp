#pragma once

// Model constants, node catalogs, workload profiles and weight schemes, plus
// their JSON document forms. The simulator, service and CLI share one file
// format; any key left out of a file keeps its built-in default.

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "greenpod/cluster.hpp"
#include "greenpod/energy_model.hpp"
#include "greenpod/scheduling.hpp"

namespace greenpod {

struct WorkloadDefaults {
  double cpu_request = 0.0;
  double memory_request_gb = 0.0;
  double work_units = 0.0;
};

struct CategoryFactors {
  double speed_factor = 1.0;
  double power_scale = 1.0;
};

struct SimulationSettings {
  double arrival_interval_s = 1.0;
  double noise_pct = 5.0;
  /// Capacity held by system components on the named node before any
  /// experiment pod arrives.
  std::string reserved_node = "node-default";
  double reserved_cpu = 1.0;
  double reserved_memory_gb = 2.0;
};

struct ModelConfig {
  energy::PowerCoefficients power;
  energy::EnergyContext job_context;
  energy::ClassActivity activity = energy::ClassActivity::defaults();
  std::array<WorkloadDefaults, 3> workloads{};      // by WorkloadClass
  std::array<CategoryFactors, 4> categories{};      // by NodeCategory
  std::vector<NodeProfile> nodes;                   // default catalog
  SchemeSet schemes = SchemeSet::defaults();
  SimulationSettings simulation;

  static ModelConfig defaults();

  energy::EnergyModel energy_model() const { return {power, activity}; }
  const WorkloadDefaults& workload(WorkloadClass cls) const {
    return workloads[static_cast<std::size_t>(cls)];
  }
  const CategoryFactors& category(NodeCategory cat) const {
    return categories[static_cast<std::size_t>(cat)];
  }
  WorkloadSpec make_pod(WorkloadClass cls, std::string name) const;

  /// Throws Error(kConfigError) on inconsistent values.
  void validate() const;
};

nlohmann::json to_json(const ModelConfig& config);
/// Overlays `doc` on the built-in defaults.
ModelConfig model_config_from_json(const nlohmann::json& doc);
ModelConfig load_model_config(const std::filesystem::path& path);

/// Reads a whole file; throws Error(kConfigError) if it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

// Document forms. Parsing throws Error(kConfigError) for missing or mistyped
// fields and Error(kInvalidParams) for values that break an invariant.
// Unknown fields are ignored.

nlohmann::json to_json(const NodeProfile& node);
nlohmann::json to_json(const WorkloadSpec& pod);
nlohmann::json to_json(const WeightScheme& scheme);

/// speed_factor / power_scale fall back to the category defaults and the
/// allocations to zero.
NodeProfile node_from_json(const nlohmann::json& doc, const ModelConfig& config);
/// Requests and work units fall back to the class defaults.
WorkloadSpec pod_from_json(const nlohmann::json& doc, const ModelConfig& config);
/// Accepts either a bare array or {"nodes": [...]}.
std::vector<NodeProfile> nodes_from_json(const nlohmann::json& doc, const ModelConfig& config);
WeightScheme scheme_from_json(const nlohmann::json& doc, SchemeName name);

}  // namespace greenpod

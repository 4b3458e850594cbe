#pragma once

// Maps a pending pod and the cluster state onto a five-criterion decision
// matrix and picks the node with the highest TOPSIS closeness.

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "greenpod/cluster.hpp"
#include "greenpod/energy_model.hpp"
#include "greenpod/topsis.hpp"

namespace greenpod {

inline constexpr std::size_t kCriteriaCount = 5;

/// Column order of every scheduling decision matrix.
inline constexpr std::array<std::string_view, kCriteriaCount> kCriteriaNames = {
    "execution_time", "energy", "core_availability", "memory_availability", "resource_balance"};

inline constexpr std::array<topsis::Direction, kCriteriaCount> kCriteriaDirections = {
    topsis::Direction::kCost, topsis::Direction::kCost, topsis::Direction::kBenefit,
    topsis::Direction::kBenefit, topsis::Direction::kBenefit};

using CriteriaRow = std::array<double, kCriteriaCount>;

enum class SchemeName { kGeneral, kEnergyCentric, kPerformanceCentric, kResourceEfficient };

inline constexpr std::array<SchemeName, 4> kAllSchemes = {
    SchemeName::kGeneral, SchemeName::kEnergyCentric, SchemeName::kPerformanceCentric,
    SchemeName::kResourceEfficient};

/// Canonical snake_case name ("energy_centric", ...).
std::string_view to_string(SchemeName name);
/// Accepts canonical names and the short aliases general / energy /
/// performance / resource.
std::optional<SchemeName> parse_scheme(std::string_view text);

struct WeightScheme {
  SchemeName name = SchemeName::kGeneral;
  CriteriaRow weights{};

  /// Throws Error(kInvalidWeights) unless the weights are a probability vector.
  void validate() const;
};

/// The four named weight vectors in effect (loadable from configuration).
struct SchemeSet {
  std::array<WeightScheme, 4> schemes;

  const WeightScheme& operator[](SchemeName name) const {
    return schemes[static_cast<std::size_t>(name)];
  }
  WeightScheme& operator[](SchemeName name) { return schemes[static_cast<std::size_t>(name)]; }

  static SchemeSet defaults();
};

enum class RejectReason { kInsufficientCpu, kInsufficientMemory };
std::string_view to_string(RejectReason reason);

struct Feasibility {
  std::vector<NodeProfile> feasible;              // input order
  std::map<std::string, RejectReason> rejected;  // by node name
};

/// Capacity filter. CPU shortage is reported ahead of memory shortage.
/// Throws Error(kNoNodes) for an empty node list.
Feasibility feasible_nodes(const WorkloadSpec& pod, std::span<const NodeProfile> nodes);

/// (exec_time_s, energy_kj, free_cores, free_memory_gb, balance) after
/// placing `pod` on `node`. balance = 1 - |cpu_fraction - memory_fraction|.
CriteriaRow criteria_row(const WorkloadSpec& pod, const NodeProfile& node,
                         const energy::EnergyModel& model);

topsis::DecisionMatrix build_matrix(const WorkloadSpec& pod, std::span<const NodeProfile> feasible,
                                    const WeightScheme& scheme, const energy::EnergyModel& model);

struct ScheduleDecision {
  std::string pod;
  std::string chosen_node;
  topsis::RankResult rank_result;
  SchemeName scheme_used = SchemeName::kGeneral;
  std::map<std::string, RejectReason> filtered_out;
};

/// filter -> build_matrix -> rank -> best. Throws Error(kNoFeasibleNodes)
/// when every node is filtered out.
ScheduleDecision schedule(const WorkloadSpec& pod, std::span<const NodeProfile> nodes,
                          const WeightScheme& scheme, const energy::EnergyModel& model);

/// Above this utilization the adaptive rule starts blending toward
/// ResourceEfficient; it is fully blended at 1.0.
inline constexpr double kAdaptiveThreshold = 0.8;

/// Returns schemes[name] unchanged unless `adaptive` is set, in which case
/// w = (1-a)*w_name + a*w_resource_efficient with a = clamp((u-0.8)/0.2, 0, 1).
WeightScheme select_weights(const SchemeSet& schemes, SchemeName name, double cluster_utilization,
                            bool adaptive);

/// Allocated CPU over total vCPUs, in [0, 1].
double cluster_cpu_utilization(std::span<const NodeProfile> nodes);

}  // namespace greenpod

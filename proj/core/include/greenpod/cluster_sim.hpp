#pragma once

// Deterministic experiment harness: a TOPSIS scheduler and a least-requested
// baseline each place their own share of a competition level's pods on
// separate replicas of the same cluster, and their energy is compared.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "greenpod/config.hpp"
#include "greenpod/scheduling.hpp"

namespace greenpod::sim {

enum class CompetitionLevel { kLow, kMedium, kHigh };

inline constexpr std::array<CompetitionLevel, 3> kAllLevels = {
    CompetitionLevel::kLow, CompetitionLevel::kMedium, CompetitionLevel::kHigh};

std::string_view to_string(CompetitionLevel level);
std::optional<CompetitionLevel> parse_level(std::string_view text);

/// Pods each scheduler receives (half of the level's total).
struct PodCounts {
  int light = 0;
  int medium = 0;
  int complex = 0;
  int total() const { return light + medium + complex; }
};
PodCounts pods_per_scheduler(CompetitionLevel level);

/// Who competes against the baseline. kBaseline runs the control
/// experiment (baseline versus itself).
enum class Contender { kTopsis, kBaseline };

struct ExperimentConfig {
  CompetitionLevel level = CompetitionLevel::kLow;
  SchemeName scheme = SchemeName::kGeneral;
  std::uint64_t seed = 42;
  double noise_pct = 5.0;
  int repetitions = 1;  // consecutive seeds seed, seed+1, ...; totals are averaged
  bool adaptive_weights = false;
  Contender contender = Contender::kTopsis;
};

struct SchedulerOutcome {
  double energy_kj = 0.0;
  double mean_sched_ms = 0.0;
  std::vector<int> allocations;  // per catalog node
  std::vector<double> execution_s;
  int placed = 0;
  int unschedulable = 0;
  double peak_cpu = 0.0;        // cluster-wide allocated CPU high-water mark
  double peak_memory_gb = 0.0;
};

struct ExperimentResult {
  CompetitionLevel level = CompetitionLevel::kLow;
  SchemeName scheme = SchemeName::kGeneral;
  std::uint64_t seed = 0;
  std::vector<std::string> node_names;
  SchedulerOutcome topsis;
  SchedulerOutcome baseline;
  double savings_kj = 0.0;
  double optimization_pct = 0.0;
};

struct Savings {
  double savings_kj = 0.0;
  double optimization_pct = 0.0;  // 0 when default_kj is 0
};
Savings compute_savings(double default_kj, double topsis_kj);

/// Least-requested score, 50*free_cpu_after/vcpus + 50*free_mem_after/mem.
/// Throws Error(kInfeasible) if the pod does not fit.
double baseline_score(const WorkloadSpec& pod, const NodeProfile& node);
/// Highest baseline score among feasible nodes, first listed on ties.
std::optional<std::size_t> baseline_choose(const WorkloadSpec& pod,
                                           std::span<const NodeProfile> nodes);

/// Throws Error(kConfigError) for invalid settings.
ExperimentResult run_experiment(const ExperimentConfig& config, const ModelConfig& model);

/// Cartesian product in level-major, then scheme, then seed order. `jobs` > 1
/// runs cells on worker threads; output order does not depend on it.
std::vector<ExperimentResult> run_factorial(std::span<const CompetitionLevel> levels,
                                            std::span<const SchemeName> schemes,
                                            std::span<const std::uint64_t> seeds,
                                            const ExperimentConfig& base, const ModelConfig& model,
                                            int jobs = 1);

/// One row of an energy comparison table.
struct SummaryRow {
  std::string label;
  std::optional<CompetitionLevel> level;
  std::optional<SchemeName> scheme;
  double default_kj = 0.0;
  double topsis_kj = 0.0;
  double savings_kj = 0.0;
  double optimization_pct = 0.0;
  int samples = 0;
};

/// Column-wise mean of rows (the optimization column is the mean of the row
/// percentages, not the ratio of mean energies).
SummaryRow average_rows(std::span<const SummaryRow> rows, std::string label);

/// Per level: one row per scheme (seed means) followed by "Average (<Level>)";
/// then "Average (All)" over every scheme row.
std::vector<SummaryRow> summarize(std::span<const ExperimentResult> results);

void write_csv(std::ostream& out, std::span<const ExperimentResult> results, bool include_timing);
void write_summary(std::ostream& out, std::span<const SummaryRow> rows);
/// scheme,level,optimization_pct grid for external heatmap plotting.
void write_heatmap(std::ostream& out, std::span<const SummaryRow> rows);
nlohmann::json to_json(const ExperimentResult& result, bool include_timing);
nlohmann::json to_json(const SummaryRow& row);

}  // namespace greenpod::sim

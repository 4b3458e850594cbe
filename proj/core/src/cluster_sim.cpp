#include "greenpod/cluster_sim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

#include "format_util.hpp"
#include "greenpod/error.hpp"

namespace greenpod::sim {

namespace {

using detail::fixed;

// Platform-independent draws on top of mt19937_64 (whose output sequence is
// fixed by the standard, unlike the std distributions).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::size_t below(std::size_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<std::size_t>(x % bound);
  }

 private:
  std::mt19937_64 engine_;
};

struct Running {
  double end_s;
  std::size_t node;
  double cpu;
  double memory_gb;
};

struct Replica {
  std::vector<NodeProfile> nodes;
  std::vector<Running> running;  // arrival order
  SchedulerOutcome outcome;
  double sched_ms_total = 0.0;
  int decisions = 0;

  void release_until(double t) {
    auto done = [&](const Running& r) { return r.end_s <= t; };
    for (const auto& r : running) {
      if (!done(r)) continue;
      auto& n = nodes[r.node];
      n.allocated_cpu = std::max(0.0, n.allocated_cpu - r.cpu);
      n.allocated_memory_gb = std::max(0.0, n.allocated_memory_gb - r.memory_gb);
    }
    std::erase_if(running, done);
  }

  void track_peak() {
    double cpu = 0.0;
    double mem = 0.0;
    for (const auto& n : nodes) {
      cpu += n.allocated_cpu;
      mem += n.allocated_memory_gb;
    }
    outcome.peak_cpu = std::max(outcome.peak_cpu, cpu);
    outcome.peak_memory_gb = std::max(outcome.peak_memory_gb, mem);
  }
};

std::vector<NodeProfile> initial_cluster(const ModelConfig& model) {
  std::vector<NodeProfile> nodes = model.nodes;
  const auto& s = model.simulation;
  if (s.reserved_cpu > 0.0 || s.reserved_memory_gb > 0.0) {
    auto it = std::find_if(nodes.begin(), nodes.end(),
                           [&](const NodeProfile& n) { return n.name == s.reserved_node; });
    if (it == nodes.end()) {
      throw Error(ErrorCode::kConfigError,
                  "reserved node '" + s.reserved_node + "' is not in the catalog");
    }
    it->allocated_cpu += s.reserved_cpu;
    it->allocated_memory_gb += s.reserved_memory_gb;
    try {
      it->validate();
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfigError, e.what());
    }
  }
  return nodes;
}

struct Choice {
  std::optional<std::size_t> node;
  double elapsed_ms = 0.0;
};

Choice choose_topsis(const WorkloadSpec& pod, const std::vector<NodeProfile>& nodes,
                     const ExperimentConfig& config, const ModelConfig& model,
                     const energy::EnergyModel& energy) {
  const auto start = std::chrono::steady_clock::now();
  Choice c;
  const auto weights = select_weights(model.schemes, config.scheme, cluster_cpu_utilization(nodes),
                                      config.adaptive_weights);
  try {
    const auto decision = schedule(pod, nodes, weights, energy);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].name == decision.chosen_node) {
        c.node = i;
        break;
      }
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoFeasibleNodes) throw;
  }
  c.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return c;
}

Choice choose_baseline(const WorkloadSpec& pod, const std::vector<NodeProfile>& nodes) {
  const auto start = std::chrono::steady_clock::now();
  Choice c;
  c.node = baseline_choose(pod, nodes);
  c.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return c;
}

struct SingleRun {
  SchedulerOutcome topsis;
  SchedulerOutcome baseline;
};

SingleRun run_once(const ExperimentConfig& config, std::uint64_t seed, const ModelConfig& model) {
  const auto energy = model.energy_model();
  const auto counts = pods_per_scheduler(config.level);
  std::vector<WorkloadClass> sequence;
  sequence.insert(sequence.end(), counts.light, WorkloadClass::kLight);
  sequence.insert(sequence.end(), counts.medium, WorkloadClass::kMedium);
  sequence.insert(sequence.end(), counts.complex, WorkloadClass::kComplex);

  Rng rng(seed);
  for (std::size_t i = sequence.size(); i > 1; --i) {
    std::swap(sequence[i - 1], sequence[rng.below(i)]);
  }

  const auto cluster = initial_cluster(model);
  std::array<Replica, 2> replicas;  // 0 = contender, 1 = baseline
  for (auto& r : replicas) {
    r.nodes = cluster;
    r.outcome.allocations.assign(cluster.size(), 0);
    r.track_peak();
  }

  const double noise = config.noise_pct / 100.0;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const double t = static_cast<double>(i) * model.simulation.arrival_interval_s;
    // Both members of an arrival pair share their realized-noise draws.
    const double exec_noise = 1.0 + noise * (2.0 * rng.uniform01() - 1.0);
    const double energy_noise = 1.0 + noise * (2.0 * rng.uniform01() - 1.0);

    for (std::size_t side = 0; side < replicas.size(); ++side) {
      auto& rep = replicas[side];
      rep.release_until(t);
      const auto pod = model.make_pod(
          sequence[i], std::string(side == 0 ? "topsis-" : "default-") + std::to_string(i));
      const bool use_topsis = side == 0 && config.contender == Contender::kTopsis;
      const Choice choice = use_topsis ? choose_topsis(pod, rep.nodes, config, model, energy)
                                       : choose_baseline(pod, rep.nodes);
      rep.sched_ms_total += choice.elapsed_ms;
      ++rep.decisions;
      if (!choice.node) {
        ++rep.outcome.unschedulable;
        continue;
      }
      auto& node = rep.nodes[*choice.node];
      const double exec_s = energy.predict_exec_time_s(pod, node) * exec_noise;
      const double energy_kj = energy.predict_pod_energy_kj(pod, node) * energy_noise;
      node.allocated_cpu += pod.cpu_request;
      node.allocated_memory_gb += pod.memory_request_gb;
      rep.running.push_back({t + exec_s, *choice.node, pod.cpu_request, pod.memory_request_gb});
      rep.outcome.energy_kj += energy_kj;
      rep.outcome.execution_s.push_back(exec_s);
      ++rep.outcome.allocations[*choice.node];
      ++rep.outcome.placed;
      rep.track_peak();
    }
  }
  for (auto& r : replicas) {
    r.outcome.mean_sched_ms = r.decisions > 0 ? r.sched_ms_total / r.decisions : 0.0;
  }
  return {std::move(replicas[0].outcome), std::move(replicas[1].outcome)};
}

void accumulate(SchedulerOutcome& into, const SchedulerOutcome& run) {
  into.energy_kj += run.energy_kj;
  into.mean_sched_ms += run.mean_sched_ms;
  if (into.allocations.empty()) into.allocations.assign(run.allocations.size(), 0);
  for (std::size_t i = 0; i < run.allocations.size(); ++i) into.allocations[i] += run.allocations[i];
  into.execution_s.insert(into.execution_s.end(), run.execution_s.begin(), run.execution_s.end());
  into.placed += run.placed;
  into.unschedulable += run.unschedulable;
  into.peak_cpu = std::max(into.peak_cpu, run.peak_cpu);
  into.peak_memory_gb = std::max(into.peak_memory_gb, run.peak_memory_gb);
}

std::string title_case(std::string_view s) {
  std::string out(s);
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

std::string scheme_label(SchemeName name) {
  switch (name) {
    case SchemeName::kGeneral: return "General (Balanced)";
    case SchemeName::kEnergyCentric: return "Energy-centric";
    case SchemeName::kPerformanceCentric: return "Performance-centric";
    case SchemeName::kResourceEfficient: return "Resource-efficient";
  }
  return "?";
}

}  // namespace

std::string_view to_string(CompetitionLevel level) {
  switch (level) {
    case CompetitionLevel::kLow: return "low";
    case CompetitionLevel::kMedium: return "medium";
    case CompetitionLevel::kHigh: return "high";
  }
  return "?";
}

std::optional<CompetitionLevel> parse_level(std::string_view text) {
  if (text == "low" || text == "Low") return CompetitionLevel::kLow;
  if (text == "medium" || text == "Medium") return CompetitionLevel::kMedium;
  if (text == "high" || text == "High") return CompetitionLevel::kHigh;
  return std::nullopt;
}

PodCounts pods_per_scheduler(CompetitionLevel level) {
  switch (level) {
    case CompetitionLevel::kLow: return {2, 1, 1};
    case CompetitionLevel::kMedium: return {4, 2, 1};
    case CompetitionLevel::kHigh: return {6, 3, 2};
  }
  return {};
}

Savings compute_savings(double default_kj, double topsis_kj) {
  Savings s;
  s.savings_kj = default_kj - topsis_kj;
  s.optimization_pct = default_kj > 0.0 ? 100.0 * s.savings_kj / default_kj : 0.0;
  return s;
}

double baseline_score(const WorkloadSpec& pod, const NodeProfile& node) {
  if (!fits(pod, node)) {
    throw Error(ErrorCode::kInfeasible,
                "pod '" + pod.name + "' does not fit on node '" + node.name + "'");
  }
  const double free_cpu_after = std::max(0.0, node.free_cpu() - pod.cpu_request);
  const double free_mem_after = std::max(0.0, node.free_memory_gb() - pod.memory_request_gb);
  return 50.0 * free_cpu_after / node.vcpus + 50.0 * free_mem_after / node.memory_gb;
}

std::optional<std::size_t> baseline_choose(const WorkloadSpec& pod,
                                           std::span<const NodeProfile> nodes) {
  std::optional<std::size_t> best;
  double best_score = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!fits(pod, nodes[i])) continue;
    const double s = baseline_score(pod, nodes[i]);
    if (!best || s > best_score) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const ModelConfig& model) {
  if (config.repetitions < 1) {
    throw Error(ErrorCode::kConfigError, "repetitions must be >= 1");
  }
  if (!(config.noise_pct >= 0.0) || !(config.noise_pct < 100.0)) {
    throw Error(ErrorCode::kConfigError, "noise_pct must lie in [0, 100)");
  }
  ExperimentResult result;
  result.level = config.level;
  result.scheme = config.scheme;
  result.seed = config.seed;
  for (const auto& n : model.nodes) result.node_names.push_back(n.name);

  for (int r = 0; r < config.repetitions; ++r) {
    const auto run = run_once(config, config.seed + static_cast<std::uint64_t>(r), model);
    accumulate(result.topsis, run.topsis);
    accumulate(result.baseline, run.baseline);
  }
  const double reps = config.repetitions;
  for (auto* o : {&result.topsis, &result.baseline}) {
    o->energy_kj /= reps;
    o->mean_sched_ms /= reps;
  }
  const auto s = compute_savings(result.baseline.energy_kj, result.topsis.energy_kj);
  result.savings_kj = s.savings_kj;
  result.optimization_pct = s.optimization_pct;
  return result;
}

std::vector<ExperimentResult> run_factorial(std::span<const CompetitionLevel> levels,
                                            std::span<const SchemeName> schemes,
                                            std::span<const std::uint64_t> seeds,
                                            const ExperimentConfig& base, const ModelConfig& model,
                                            int jobs) {
  if (levels.empty() || schemes.empty() || seeds.empty()) {
    throw Error(ErrorCode::kConfigError, "factorial needs at least one level, scheme and seed");
  }
  std::vector<ExperimentConfig> cells;
  for (auto level : levels) {
    for (auto scheme : schemes) {
      for (auto seed : seeds) {
        ExperimentConfig c = base;
        c.level = level;
        c.scheme = scheme;
        c.seed = seed;
        cells.push_back(c);
      }
    }
  }
  std::vector<ExperimentResult> results(cells.size());
  const auto workers = static_cast<std::size_t>(std::clamp(jobs, 1, 64));
  if (workers == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) results[i] = run_experiment(cells[i], model);
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, cells.size()); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < cells.size(); i = next++) {
        try {
          results[i] = run_experiment(cells[i], model);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

SummaryRow average_rows(std::span<const SummaryRow> rows, std::string label) {
  SummaryRow avg;
  avg.label = std::move(label);
  if (rows.empty()) return avg;
  for (const auto& r : rows) {
    avg.default_kj += r.default_kj;
    avg.topsis_kj += r.topsis_kj;
    avg.savings_kj += r.savings_kj;
    avg.optimization_pct += r.optimization_pct;
    avg.samples += r.samples;
  }
  const double n = static_cast<double>(rows.size());
  avg.default_kj /= n;
  avg.topsis_kj /= n;
  avg.savings_kj /= n;
  avg.optimization_pct /= n;
  return avg;
}

std::vector<SummaryRow> summarize(std::span<const ExperimentResult> results) {
  // Preserve first-seen order of levels and schemes.
  std::vector<CompetitionLevel> levels;
  std::vector<SchemeName> schemes;
  for (const auto& r : results) {
    if (std::find(levels.begin(), levels.end(), r.level) == levels.end()) levels.push_back(r.level);
    if (std::find(schemes.begin(), schemes.end(), r.scheme) == schemes.end()) {
      schemes.push_back(r.scheme);
    }
  }
  std::vector<SummaryRow> out;
  std::vector<SummaryRow> all_cells;
  for (auto level : levels) {
    std::vector<SummaryRow> cells;
    for (auto scheme : schemes) {
      SummaryRow row;
      row.label = scheme_label(scheme);
      row.level = level;
      row.scheme = scheme;
      for (const auto& r : results) {
        if (r.level != level || r.scheme != scheme) continue;
        row.default_kj += r.baseline.energy_kj;
        row.topsis_kj += r.topsis.energy_kj;
        row.savings_kj += r.savings_kj;
        row.optimization_pct += r.optimization_pct;
        ++row.samples;
      }
      if (row.samples == 0) continue;
      const double n = row.samples;
      row.default_kj /= n;
      row.topsis_kj /= n;
      row.savings_kj /= n;
      row.optimization_pct /= n;
      cells.push_back(row);
    }
    out.insert(out.end(), cells.begin(), cells.end());
    auto avg = average_rows(cells, "Average (" + title_case(to_string(level)) + ")");
    avg.level = level;
    out.push_back(avg);
    all_cells.insert(all_cells.end(), cells.begin(), cells.end());
  }
  out.push_back(average_rows(all_cells, "Average (All)"));
  return out;
}

void write_csv(std::ostream& out, std::span<const ExperimentResult> results, bool include_timing) {
  out << "level,scheme,seed,default_kj,topsis_kj,savings_kj,optimization_pct,mean_sched_ms";
  if (!results.empty()) {
    for (const auto& n : results.front().node_names) out << ",topsis_alloc_" << n;
    for (const auto& n : results.front().node_names) out << ",default_alloc_" << n;
  }
  out << ",topsis_unschedulable,default_unschedulable\n";
  for (const auto& r : results) {
    out << to_string(r.level) << ',' << to_string(r.scheme) << ',' << r.seed << ','
        << fixed(r.baseline.energy_kj, 6) << ',' << fixed(r.topsis.energy_kj, 6) << ','
        << fixed(r.savings_kj, 6) << ',' << fixed(r.optimization_pct, 4) << ',';
    if (include_timing) out << fixed(r.topsis.mean_sched_ms, 6);
    for (int a : r.topsis.allocations) out << ',' << a;
    for (int a : r.baseline.allocations) out << ',' << a;
    out << ',' << r.topsis.unschedulable << ',' << r.baseline.unschedulable << '\n';
  }
}

void write_summary(std::ostream& out, std::span<const SummaryRow> rows) {
  char line[160];
  std::snprintf(line, sizeof(line), "%-22s %16s %12s %20s %18s\n", "Profile", "Default K8s (kJ)",
                "TOPSIS (kJ)", "Energy Savings (kJ)", "Optimization (%)");
  out << line;
  std::optional<CompetitionLevel> current;
  for (const auto& r : rows) {
    if (r.level && r.level != current) {
      current = r.level;
      out << title_case(to_string(*r.level)) << " Competition\n";
    }
    std::snprintf(line, sizeof(line), "%-22s %16s %12s %20s %18s\n", r.label.c_str(),
                  fixed(r.default_kj, 4).c_str(), fixed(r.topsis_kj, 4).c_str(),
                  fixed(r.savings_kj, 4).c_str(), fixed(r.optimization_pct, 2).c_str());
    out << line;
  }
}

void write_heatmap(std::ostream& out, std::span<const SummaryRow> rows) {
  out << "scheme,level,optimization_pct\n";
  for (const auto& r : rows) {
    if (!r.scheme || !r.level) continue;
    out << to_string(*r.scheme) << ',' << to_string(*r.level) << ','
        << fixed(r.optimization_pct, 4) << '\n';
  }
}

nlohmann::json to_json(const ExperimentResult& r, bool include_timing) {
  auto side = [&](const SchedulerOutcome& o) {
    nlohmann::json alloc = nlohmann::json::object();
    for (std::size_t i = 0; i < r.node_names.size(); ++i) alloc[r.node_names[i]] = o.allocations[i];
    nlohmann::json j{{"energy_kj", o.energy_kj},
                     {"allocations", alloc},
                     {"execution_s", o.execution_s},
                     {"placed", o.placed},
                     {"unschedulable", o.unschedulable}};
    if (include_timing) j["mean_sched_ms"] = o.mean_sched_ms;
    return j;
  };
  return {{"level", std::string(to_string(r.level))},
          {"scheme", std::string(to_string(r.scheme))},
          {"seed", r.seed},
          {"topsis", side(r.topsis)},
          {"default", side(r.baseline)},
          {"savings_kj", r.savings_kj},
          {"optimization_pct", r.optimization_pct}};
}

nlohmann::json to_json(const SummaryRow& row) {
  nlohmann::json j{{"label", row.label},
                   {"default_kj", row.default_kj},
                   {"topsis_kj", row.topsis_kj},
                   {"savings_kj", row.savings_kj},
                   {"optimization_pct", row.optimization_pct},
                   {"samples", row.samples}};
  if (row.level) j["level"] = std::string(to_string(*row.level));
  if (row.scheme) j["scheme"] = std::string(to_string(*row.scheme));
  return j;
}

}  // namespace greenpod::sim

#include "greenpod/cli.hpp"

#include <CLI11.hpp>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <pthread.h>
#include <sstream>
#include <thread>

#include "greenpod/cluster_sim.hpp"
#include "greenpod/config.hpp"
#include "greenpod/error.hpp"
#include "greenpod/extender.hpp"
#include "greenpod/impact.hpp"
#include "greenpod/version.hpp"

namespace greenpod::cli {

namespace {

using json = nlohmann::json;

// Thrown for problems the user fixes by changing the command line.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::string kSchemeNames = "general, energy_centric, performance_centric, resource_efficient";

CLI::Validator scheme_validator() {
  return CLI::Validator(
      [](std::string& s) -> std::string {
        return parse_scheme(s) ? "" : "unknown scheme '" + s + "' (valid: " + kSchemeNames + ")";
      },
      "SCHEME");
}

CLI::Validator level_validator() {
  return CLI::Validator(
      [](std::string& s) -> std::string {
        return sim::parse_level(s) ? "" : "unknown level '" + s + "' (valid: low, medium, high)";
      },
      "LEVEL");
}

struct Common {
  std::string config_path;

  ModelConfig load() const {
    if (config_path.empty()) return ModelConfig::defaults();
    return load_model_config(config_path);
  }
};

json parse_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw UsageError(path + " is empty");
  }
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::kConfigError, path + " is not valid JSON");
  return doc;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kConfigError, "cannot write " + path);
  f << content;
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

// --- rank -------------------------------------------------------------------

struct RankArgs {
  std::string nodes_path;
  std::string pod_path;
  std::string scheme = "energy_centric";
  bool adaptive = false;
  std::string out_path;
};

int cmd_rank(const Common& common, const RankArgs& a, std::ostream& out, std::ostream& err) {
  const auto model = common.load();
  const json nodes_doc = parse_json_file(a.nodes_path);
  const json* list = &nodes_doc;
  if (nodes_doc.is_object() && nodes_doc.contains("nodes")) list = &nodes_doc["nodes"];
  if (list->is_array() && list->empty()) throw UsageError(a.nodes_path + " lists no nodes");
  const auto nodes = nodes_from_json(nodes_doc, model);
  const auto pod = pod_from_json(parse_json_file(a.pod_path), model);

  const auto name = *parse_scheme(a.scheme);
  const auto weights =
      select_weights(model.schemes, name, cluster_cpu_utilization(nodes), a.adaptive);
  const auto filtered = feasible_nodes(pod, nodes);
  if (filtered.feasible.empty()) {
    err << "pod '" << pod.name << "' is unschedulable:\n";
    for (const auto& [node, reason] : filtered.rejected) err << "  " << node << ": " << to_string(reason) << '\n';
    return kExitDomain;
  }
  const auto decision = schedule(pod, nodes, weights, model.energy_model());

  out << "pod " << pod.name << " (" << to_string(pod.workload_class) << "), scheme "
      << to_string(name) << '\n';
  out << "best: " << decision.chosen_node << "\n\n";
  char line[128];
  std::snprintf(line, sizeof(line), "%-4s  %-20s  %-10s  %s\n", "rank", "node", "closeness", "score");
  out << line;
  int pos = 1;
  for (std::size_t idx : decision.rank_result.ranking) {
    const auto& s = decision.rank_result.scores[idx];
    std::snprintf(line, sizeof(line), "%-4d  %-20s  %-10.6f  %d\n", pos++, s.id.c_str(),
                  s.closeness, extender::quantize_score(s.closeness));
    out << line;
  }
  for (const auto& [node, reason] : decision.filtered_out) {
    out << "filtered: " << node << " (" << to_string(reason) << ")\n";
  }

  if (!a.out_path.empty()) {
    json doc = extender::prioritize_document(decision);
    doc["pod"] = pod.name;
    doc["rejected"] = extender::filter_document(filtered)["rejected"];
    json criteria = json::object();
    const auto& m = decision.rank_result;
    for (std::size_t i = 0; i < m.scores.size(); ++i) {
      const auto row = criteria_row(pod, filtered.feasible[i], model.energy_model());
      json r = json::object();
      for (std::size_t j = 0; j < kCriteriaCount; ++j) r[std::string(kCriteriaNames[j])] = row[j];
      criteria[m.scores[i].id] = r;
    }
    doc["criteria"] = criteria;
    write_file(a.out_path, doc.dump(2) + "\n");
  }
  return kExitOk;
}

// --- simulate / factorial ---------------------------------------------------

struct RunArgs {
  std::vector<std::string> levels;
  std::vector<std::string> schemes;
  std::uint64_t seed = 42;
  int seeds = 30;
  int reps = 1;
  std::optional<double> noise;
  bool adaptive = false;
  bool control = false;
  bool timing = false;
  int jobs = 0;
  std::string format = "table";
  std::string out_path;
  std::string summary_path;
  std::string heatmap_path;
};

sim::ExperimentConfig base_config(const RunArgs& a, const ModelConfig& model) {
  sim::ExperimentConfig c;
  c.seed = a.seed;
  c.repetitions = a.reps;
  c.noise_pct = a.noise.value_or(model.simulation.noise_pct);
  c.adaptive_weights = a.adaptive;
  c.contender = a.control ? sim::Contender::kBaseline : sim::Contender::kTopsis;
  return c;
}

void emit_outputs(const RunArgs& a, const std::vector<sim::ExperimentResult>& results,
                  std::ostream& out) {
  auto rows = sim::summarize(results);
  if (results.size() == 1) std::erase_if(rows, [](const sim::SummaryRow& r) { return !r.scheme; });
  std::ostringstream csv;
  sim::write_csv(csv, results, a.timing);
  if (!a.out_path.empty()) write_file(a.out_path, csv.str());
  if (!a.summary_path.empty()) {
    json doc = json::array();
    for (const auto& r : rows) doc.push_back(sim::to_json(r));
    write_file(a.summary_path, doc.dump(2) + "\n");
  }
  if (!a.heatmap_path.empty()) {
    std::ostringstream heat;
    sim::write_heatmap(heat, rows);
    write_file(a.heatmap_path, heat.str());
  }
  if (a.format == "csv") {
    out << csv.str();
  } else if (a.format == "json") {
    json doc = json::array();
    for (const auto& r : results) doc.push_back(sim::to_json(r, a.timing));
    out << doc.dump(2) << '\n';
  } else {
    sim::write_summary(out, rows);
  }
}

int cmd_simulate(const Common& common, const RunArgs& a, std::ostream& out) {
  const auto model = common.load();
  auto config = base_config(a, model);
  config.level = *sim::parse_level(a.levels.front());
  config.scheme = *parse_scheme(a.schemes.front());
  const auto result = sim::run_experiment(config, model);
  emit_outputs(a, {result}, out);
  if (a.format == "table") {
    auto allocs = [&](const sim::SchedulerOutcome& o) {
      std::string s;
      for (std::size_t i = 0; i < result.node_names.size(); ++i) {
        s += " " + result.node_names[i] + "=" + std::to_string(o.allocations[i]);
      }
      return s;
    };
    out << "\nallocations topsis:" << allocs(result.topsis) << '\n';
    out << "allocations default:" << allocs(result.baseline) << '\n';
    if (result.topsis.unschedulable + result.baseline.unschedulable > 0) {
      out << "unschedulable: topsis " << result.topsis.unschedulable << ", default "
          << result.baseline.unschedulable << '\n';
    }
    if (a.timing) {
      out << "mean scheduling latency (ms): topsis " << fmt("%.4f", result.topsis.mean_sched_ms)
          << ", default " << fmt("%.4f", result.baseline.mean_sched_ms) << '\n';
    }
  }
  return kExitOk;
}

int cmd_factorial(const Common& common, const RunArgs& a, std::ostream& out) {
  const auto model = common.load();
  std::vector<sim::CompetitionLevel> levels;
  for (const auto& l : a.levels) levels.push_back(*sim::parse_level(l));
  std::vector<SchemeName> schemes;
  for (const auto& s : a.schemes) schemes.push_back(*parse_scheme(s));
  if (levels.empty()) levels.assign(sim::kAllLevels.begin(), sim::kAllLevels.end());
  if (schemes.empty()) schemes.assign(kAllSchemes.begin(), kAllSchemes.end());
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < a.seeds; ++i) seeds.push_back(a.seed + static_cast<std::uint64_t>(i));
  const int jobs = a.jobs > 0 ? a.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const auto results = sim::run_factorial(levels, schemes, seeds, base_config(a, model), model, jobs);
  emit_outputs(a, results, out);
  return kExitOk;
}

// --- impact -----------------------------------------------------------------

struct ImpactArgs {
  std::string assumptions_path;
  std::optional<double> jobs_per_day, job_kwh, optimization, co2_lb_per_kwh, lb_to_kg,
      co2_kg_per_mwh, vehicle_tons, usd_per_kwh, credit_min, credit_max;
  std::optional<int> clusters, days_per_month, days_per_year;
  bool derive_co2 = false;
  std::string out_path;
  std::string csv_path;
};

int cmd_impact(const ImpactArgs& a, std::ostream& out) {
  impact::ImpactAssumptions as;
  if (!a.assumptions_path.empty()) as = impact::assumptions_from_json(parse_json_file(a.assumptions_path));
  auto set = [](auto& field, const auto& opt) {
    if (opt) field = *opt;
  };
  set(as.jobs_per_day, a.jobs_per_day);
  set(as.job_kwh, a.job_kwh);
  set(as.optimization_rate, a.optimization);
  set(as.co2_lb_per_kwh, a.co2_lb_per_kwh);
  set(as.lb_to_kg, a.lb_to_kg);
  if (a.derive_co2) as.co2_kg_per_mwh.reset();
  if (a.co2_kg_per_mwh) as.co2_kg_per_mwh = *a.co2_kg_per_mwh;
  set(as.vehicle_tons_per_year, a.vehicle_tons);
  set(as.electricity_usd_per_kwh, a.usd_per_kwh);
  set(as.credit_usd_per_ton_min, a.credit_min);
  set(as.credit_usd_per_ton_max, a.credit_max);
  set(as.clusters, a.clusters);
  set(as.days_per_month, a.days_per_month);
  set(as.days_per_year, a.days_per_year);

  const auto report = impact::compute_impact(as);
  out << impact::render_table(report);
  if (!a.out_path.empty()) write_file(a.out_path, impact::to_json(report).dump(2) + "\n");
  if (!a.csv_path.empty()) {
    std::ostringstream csv;
    impact::write_csv(csv, report);
    write_file(a.csv_path, csv.str());
  }
  return kExitOk;
}

// --- serve ------------------------------------------------------------------

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string scheme = "energy_centric";
  bool adaptive = false;
  std::string decision_log;
};

int cmd_serve(const Common& common, const ServeArgs& a, std::ostream& out, std::ostream& err) {
  auto settings_from_disk = [&] {
    extender::ServiceSettings s;
    s.model = common.load();
    s.scheme = *parse_scheme(a.scheme);
    s.adaptive_weights = a.adaptive;
    return s;
  };
  extender::ExtenderService service(settings_from_disk());

  std::ofstream log_file;
  std::ostream* log = &out;
  if (!a.decision_log.empty()) {
    log_file.open(a.decision_log, std::ios::app);
    if (!log_file) throw Error(ErrorCode::kConfigError, "cannot open " + a.decision_log);
    log = &log_file;
  }
  std::mutex log_mu;
  service.set_decision_sink([&](const json& line) {
    std::lock_guard lock(log_mu);
    *log << line.dump() << '\n' << std::flush;
  });

  // Signals go to a dedicated thread: SIGHUP reloads, SIGINT/SIGTERM stop.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGHUP);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  extender::ExtenderServer server(service);
  const int port = server.bind(a.host, a.port);
  if (port < 0) {
    err << "cannot bind " << a.host << ":" << a.port << '\n';
    return kExitDomain;
  }
  err << "greenpod " << version() << " listening on " << a.host << ":" << port << " (scheme "
      << a.scheme << ")\n";

  std::thread signals([&] {
    for (;;) {
      int sig = 0;
      if (sigwait(&set, &sig) != 0) continue;
      if (sig == SIGHUP) {
        try {
          service.reload(settings_from_disk());
          err << "configuration reloaded\n";
        } catch (const std::exception& e) {
          err << "reload failed, keeping previous configuration: " << e.what() << '\n';
        }
        continue;
      }
      server.stop();
      return;
    }
  });
  const bool ok = server.listen();
  if (signals.joinable()) {
    // listen() can also return on its own; wake the signal thread so it exits.
    pthread_kill(signals.native_handle(), SIGTERM);
    signals.join();
  }
  return ok ? kExitOk : kExitDomain;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy-aware TOPSIS node ranking, cluster simulation and impact estimates",
               "greenpod"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  Common common;
  app.add_option("--config", common.config_path, "Model constants file (JSON)")
      ->envname("GREENPOD_CONFIG")
      ->check(CLI::ExistingFile);

  RankArgs rank;
  auto* rank_cmd = app.add_subcommand("rank", "Rank nodes for one pod");
  rank_cmd->add_option("--nodes", rank.nodes_path, "Node list (JSON)")->required()->check(CLI::ExistingFile);
  rank_cmd->add_option("--pod", rank.pod_path, "Pod document (JSON)")->required()->check(CLI::ExistingFile);
  rank_cmd->add_option("--scheme", rank.scheme, "Weight scheme (" + kSchemeNames + ")")
      ->envname("GREENPOD_SCHEME")
      ->check(scheme_validator())
      ->capture_default_str();
  rank_cmd->add_flag("--adaptive", rank.adaptive, "Blend toward resource_efficient above 80% CPU use");
  rank_cmd->add_option("--out", rank.out_path, "Write the ranking and criteria as JSON");

  auto add_run_options = [](CLI::App* cmd, RunArgs& r) {
    cmd->add_option("--reps", r.reps, "Repetitions per cell (consecutive seeds, averaged)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--noise", r.noise, "Noise on execution time and energy, percent (default from config)")
        ->check(CLI::Range(0.0, 99.0));
    cmd->add_flag("--adaptive", r.adaptive, "Blend toward resource_efficient above 80% CPU use");
    cmd->add_flag("--control", r.control, "Run the default scheduler against itself");
    cmd->add_flag("--timing", r.timing, "Record scheduling latency (makes output nondeterministic)");
    cmd->add_option("--format", r.format, "Stdout format")
        ->check(CLI::IsMember({"table", "csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", r.out_path, "Write per-run CSV");
    cmd->add_option("--summary-json", r.summary_path, "Write summary rows as JSON");
    cmd->add_option("--heatmap", r.heatmap_path, "Write scheme x level optimization grid (CSV)");
  };

  RunArgs simulate;
  auto* sim_cmd = app.add_subcommand("simulate", "Run one experiment cell");
  sim_cmd->add_option("--level", simulate.levels, "Competition level (low, medium, high)")
      ->required()
      ->expected(1)
      ->check(level_validator());
  sim_cmd->add_option("--scheme", simulate.schemes, "Weight scheme (" + kSchemeNames + ")")
      ->required()
      ->expected(1)
      ->check(scheme_validator());
  sim_cmd->add_option("--seed", simulate.seed, "RNG seed")->capture_default_str();
  add_run_options(sim_cmd, simulate);

  RunArgs factorial;
  factorial.seed = 1;
  auto* fac_cmd = app.add_subcommand("factorial", "Run the level x scheme x seed grid");
  fac_cmd->add_option("--levels", factorial.levels, "Levels to run (default: all)")
      ->delimiter(',')
      ->check(level_validator());
  fac_cmd->add_option("--schemes", factorial.schemes, "Schemes to run (default: all)")
      ->delimiter(',')
      ->check(scheme_validator());
  fac_cmd->add_option("--seed-start", factorial.seed, "First seed")->capture_default_str();
  fac_cmd->add_option("--seeds", factorial.seeds, "Number of seeds per cell")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fac_cmd->add_option("--jobs", factorial.jobs, "Worker threads (default: hardware concurrency)")
      ->check(CLI::NonNegativeNumber);
  add_run_options(fac_cmd, factorial);

  ImpactArgs imp;
  auto* imp_cmd = app.add_subcommand("impact", "Scale per-job savings to cluster and fleet totals");
  imp_cmd->add_option("--assumptions", imp.assumptions_path, "Assumptions file (JSON)")
      ->check(CLI::ExistingFile);
  imp_cmd->add_option("--jobs-per-day", imp.jobs_per_day, "Jobs per day per cluster [6304]");
  imp_cmd->add_option("--job-kwh", imp.job_kwh, "Energy per job, kWh [0.024]");
  imp_cmd->add_option("--optimization", imp.optimization, "Optimization rate as a fraction [0.1938]");
  imp_cmd->add_option("--co2-lb-per-kwh", imp.co2_lb_per_kwh, "Grid emissions, lb CO2 per kWh [0.823]");
  imp_cmd->add_option("--lb-to-kg", imp.lb_to_kg, "kg per lb [0.4536]");
  imp_cmd->add_option("--co2-kg-per-mwh", imp.co2_kg_per_mwh, "Rounded grid factor, kg per MWh [373.2]");
  imp_cmd->add_flag("--derive-co2", imp.derive_co2,
                    "Use lb/kWh times kg/lb instead of the rounded kg/MWh factor");
  imp_cmd->add_option("--vehicle-tons", imp.vehicle_tons, "CO2 per vehicle per year, t [4.6]");
  imp_cmd->add_option("--usd-per-kwh", imp.usd_per_kwh, "Electricity price [0.1289]");
  imp_cmd->add_option("--credit-min", imp.credit_min, "Carbon credit low, USD per t [0.46]");
  imp_cmd->add_option("--credit-max", imp.credit_max, "Carbon credit high, USD per t [167]");
  imp_cmd->add_option("--clusters", imp.clusters, "Clusters in the fleet column [10]");
  imp_cmd->add_option("--days-per-month", imp.days_per_month, "[30]");
  imp_cmd->add_option("--days-per-year", imp.days_per_year, "[365]");
  imp_cmd->add_option("--out", imp.out_path, "Write the report as JSON");
  imp_cmd->add_option("--csv", imp.csv_path, "Write the table as CSV");

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP extender (SIGHUP reloads --config)");
  serve_cmd->add_option("--host", serve.host, "Bind address")->capture_default_str();
  serve_cmd->add_option("--port", serve.port, "Port (0 picks a free one)")
      ->envname("GREENPOD_PORT")
      ->check(CLI::Range(0, 65535))
      ->capture_default_str();
  serve_cmd->add_option("--scheme", serve.scheme, "Default scheme (" + kSchemeNames + ")")
      ->envname("GREENPOD_SCHEME")
      ->check(scheme_validator())
      ->capture_default_str();
  serve_cmd->add_flag("--adaptive", serve.adaptive, "Blend toward resource_efficient above 80% CPU use");
  serve_cmd->add_option("--decision-log", serve.decision_log,
                        "Append one JSON line per decision here (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(rank_cmd)) return cmd_rank(common, rank, out, err);
    if (app.got_subcommand(sim_cmd)) return cmd_simulate(common, simulate, out);
    if (app.got_subcommand(fac_cmd)) return cmd_factorial(common, factorial, out);
    if (app.got_subcommand(imp_cmd)) return cmd_impact(imp, out);
    if (app.got_subcommand(serve_cmd)) return cmd_serve(common, serve, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace greenpod::cli

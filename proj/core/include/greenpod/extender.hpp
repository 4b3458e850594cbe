#pragma once

// Scheduler-extender style HTTP front end. Handlers take raw request bodies
// and return (status, JSON document); cluster state travels in every request
// so the service keeps nothing between calls except its configuration.

#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "greenpod/config.hpp"
#include "greenpod/scheduling.hpp"

namespace greenpod::extender {

struct Response {
  int status = 200;
  nlohmann::json body;

  std::string text() const { return body.dump(); }
};

struct ServiceSettings {
  ModelConfig model = ModelConfig::defaults();
  SchemeName scheme = SchemeName::kEnergyCentric;
  bool adaptive_weights = false;
};

/// Called once per prioritize decision with {pod, chosen_node, scheme,
/// closeness, latency_ms}.
using DecisionSink = std::function<void(const nlohmann::json&)>;

/// Response documents built straight from library results.
nlohmann::json filter_document(const Feasibility& result);
nlohmann::json prioritize_document(const ScheduleDecision& decision);
nlohmann::json error_document(std::string_view code, std::string_view message);

/// floor(closeness * 100 + 0.5)
int quantize_score(double closeness);

class ExtenderService {
 public:
  explicit ExtenderService(ServiceSettings settings = {});

  Response handle_filter(std::string_view body) const;
  Response handle_prioritize(std::string_view body) const;
  Response handle_health() const;

  /// Swaps the whole configuration; in-flight requests finish on the old one.
  void reload(ServiceSettings settings);
  std::shared_ptr<const ServiceSettings> settings() const;

  void set_decision_sink(DecisionSink sink);

 private:
  std::shared_ptr<const ServiceSettings> snapshot() const;

  mutable std::mutex mu_;
  std::shared_ptr<const ServiceSettings> settings_;
  DecisionSink sink_;
  std::chrono::steady_clock::time_point started_;
};

/// Serves POST /api/v1/filter, POST /api/v1/prioritize and GET /healthz.
class ExtenderServer {
 public:
  explicit ExtenderServer(ExtenderService& service);
  ~ExtenderServer();
  ExtenderServer(const ExtenderServer&) = delete;
  ExtenderServer& operator=(const ExtenderServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace greenpod::extender

#include "greenpod/extender.hpp"

#include <cmath>
#include <set>
#include <variant>

#include "format_util.hpp"
#include "greenpod/error.hpp"
#include "greenpod/version.hpp"

namespace greenpod::extender {

namespace {

using json = nlohmann::json;

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigError: return 400;
    case ErrorCode::kNoFeasibleNodes: return 409;
    case ErrorCode::kNoNodes:
    case ErrorCode::kInvalidParams:
    case ErrorCode::kInvalidWeights:
    case ErrorCode::kInvalidMatrix:
    case ErrorCode::kInfeasible: return 422;
    default: return 500;
  }
}

Response fail(int status, std::string_view code, std::string_view message) {
  return {status, error_document(code, message)};
}

Response fail(const Error& e) {
  return fail(status_for(e.code()), to_string(e.code()), e.what());
}

struct ParsedRequest {
  WorkloadSpec pod;
  std::vector<NodeProfile> nodes;
  std::optional<SchemeName> scheme;
};

// Returns a response instead of a request when the body is unusable.
std::variant<ParsedRequest, Response> parse_request(std::string_view body,
                                                    const ModelConfig& model) {
  const json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) return fail(400, "malformed_body", "request body is not valid JSON");
  if (!doc.is_object()) return fail(400, "malformed_body", "request body must be an object");
  if (!doc.contains("pod")) return fail(400, "malformed_body", "missing field 'pod'");
  if (!doc.contains("nodes") || !doc["nodes"].is_array()) {
    return fail(400, "malformed_body", "field 'nodes' must be an array");
  }
  if (doc["nodes"].empty()) return fail(422, to_string(ErrorCode::kNoNodes), "node list is empty");

  ParsedRequest req;
  if (const auto it = doc.find("scheme"); it != doc.end() && !it->is_null()) {
    if (!it->is_string()) return fail(400, "malformed_body", "field 'scheme' must be a string");
    req.scheme = parse_scheme(it->get<std::string>());
    if (!req.scheme) {
      return fail(400, "unknown_scheme",
                  "unknown scheme '" + it->get<std::string>() +
                      "'; expected general, energy_centric, performance_centric or "
                      "resource_efficient");
    }
  }
  try {
    req.pod = pod_from_json(doc["pod"], model);
    req.nodes = nodes_from_json(doc["nodes"], model);
  } catch (const Error& e) {
    return fail(e);
  }
  std::set<std::string> seen;
  for (const auto& n : req.nodes) {
    if (!seen.insert(n.name).second) {
      return fail(422, "duplicate_node", "node name '" + n.name + "' appears more than once");
    }
  }
  return req;
}

}  // namespace

int quantize_score(double closeness) {
  return static_cast<int>(std::floor(closeness * 100.0 + 0.5));
}

json error_document(std::string_view code, std::string_view message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

json filter_document(const Feasibility& result) {
  json feasible = json::array();
  for (const auto& n : result.feasible) feasible.push_back(n.name);
  json rejected = json::object();
  for (const auto& [name, reason] : result.rejected) rejected[name] = to_string(reason);
  return {{"feasible", feasible}, {"rejected", rejected}};
}

json prioritize_document(const ScheduleDecision& decision) {
  const auto& rr = decision.rank_result;
  json scores = json::array();
  for (std::size_t idx : rr.ranking) {
    const auto& s = rr.scores[idx];
    scores.push_back({{"node", s.id},
                      {"score", quantize_score(s.closeness)},
                      {"closeness", detail::round_to(s.closeness, 6)}});
  }
  return {{"scheme", to_string(decision.scheme_used)},
          {"best", decision.chosen_node},
          {"scores", scores}};
}

ExtenderService::ExtenderService(ServiceSettings settings)
    : settings_(std::make_shared<const ServiceSettings>(std::move(settings))),
      started_(std::chrono::steady_clock::now()) {}

std::shared_ptr<const ServiceSettings> ExtenderService::snapshot() const {
  std::lock_guard lock(mu_);
  return settings_;
}

std::shared_ptr<const ServiceSettings> ExtenderService::settings() const { return snapshot(); }

void ExtenderService::reload(ServiceSettings settings) {
  auto next = std::make_shared<const ServiceSettings>(std::move(settings));
  std::lock_guard lock(mu_);
  settings_ = std::move(next);
}

void ExtenderService::set_decision_sink(DecisionSink sink) {
  std::lock_guard lock(mu_);
  sink_ = std::move(sink);
}

Response ExtenderService::handle_filter(std::string_view body) const {
  const auto cfg = snapshot();
  auto parsed = parse_request(body, cfg->model);
  if (auto* r = std::get_if<Response>(&parsed)) return std::move(*r);
  const auto& req = std::get<ParsedRequest>(parsed);
  try {
    return {200, filter_document(feasible_nodes(req.pod, req.nodes))};
  } catch (const Error& e) {
    return fail(e);
  }
}

Response ExtenderService::handle_prioritize(std::string_view body) const {
  const auto start = std::chrono::steady_clock::now();
  const auto cfg = snapshot();
  auto parsed = parse_request(body, cfg->model);
  if (auto* r = std::get_if<Response>(&parsed)) return std::move(*r);
  const auto& req = std::get<ParsedRequest>(parsed);

  const SchemeName name = req.scheme.value_or(cfg->scheme);
  const auto weights = select_weights(cfg->model.schemes, name,
                                      cluster_cpu_utilization(req.nodes), cfg->adaptive_weights);
  ScheduleDecision decision;
  try {
    const auto filtered = feasible_nodes(req.pod, req.nodes);
    if (filtered.feasible.empty()) {
      Response r = fail(409, to_string(ErrorCode::kNoFeasibleNodes),
                        "pod '" + req.pod.name + "' fits on none of the nodes");
      r.body["error"]["rejected"] = filter_document(filtered)["rejected"];
      return r;
    }
    decision = schedule(req.pod, req.nodes, weights, cfg->model.energy_model());
  } catch (const Error& e) {
    return fail(e);
  }
  Response out{200, prioritize_document(decision)};

  DecisionSink sink;
  {
    std::lock_guard lock(mu_);
    sink = sink_;
  }
  if (sink) {
    json closeness = json::object();
    for (const auto& s : decision.rank_result.scores) closeness[s.id] = s.closeness;
    const double latency_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    sink({{"pod", decision.pod},
          {"chosen_node", decision.chosen_node},
          {"scheme", to_string(decision.scheme_used)},
          {"closeness", closeness},
          {"latency_ms", latency_ms}});
  }
  return out;
}

Response ExtenderService::handle_health() const {
  const auto cfg = snapshot();
  const double uptime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
  return {200,
          {{"status", "ok"},
           {"version", version()},
           {"scheme", to_string(cfg->scheme)},
           {"uptime_s", uptime}}};
}

}  // namespace greenpod::extender

#include "greenpod/config.hpp"

#include <fstream>
#include <sstream>

#include "greenpod/error.hpp"

namespace greenpod {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorCode::kConfigError, what);
}

const json* find(const json& doc, const char* key) {
  if (!doc.is_object()) return nullptr;
  auto it = doc.find(key);
  return it == doc.end() || it->is_null() ? nullptr : &*it;
}

double number(const json& doc, const char* key) {
  const json* v = find(doc, key);
  if (v == nullptr) config_error(std::string("missing field '") + key + "'");
  if (!v->is_number()) config_error(std::string("field '") + key + "' must be a number");
  return v->get<double>();
}

void overlay(const json& doc, const char* key, double& target) {
  if (find(doc, key) != nullptr) target = number(doc, key);
}

void overlay(const json& doc, const char* key, std::string& target) {
  if (const json* v = find(doc, key)) {
    if (!v->is_string()) config_error(std::string("field '") + key + "' must be a string");
    target = v->get<std::string>();
  }
}

std::string text(const json& doc, const char* key) {
  const json* v = find(doc, key);
  if (v == nullptr) config_error(std::string("missing field '") + key + "'");
  if (!v->is_string()) config_error(std::string("field '") + key + "' must be a string");
  return v->get<std::string>();
}

constexpr std::array<WorkloadClass, 3> kClasses = {WorkloadClass::kLight, WorkloadClass::kMedium,
                                                   WorkloadClass::kComplex};
constexpr std::array<NodeCategory, 4> kCategories = {NodeCategory::kA, NodeCategory::kB,
                                                     NodeCategory::kC, NodeCategory::kDefault};

json scheme_weights_json(const WeightScheme& s) {
  json w = json::object();
  for (std::size_t j = 0; j < kCriteriaCount; ++j) w[std::string(kCriteriaNames[j])] = s.weights[j];
  return w;
}

}  // namespace

ModelConfig ModelConfig::defaults() {
  ModelConfig c;
  c.workloads[0] = {0.2, 0.5, 30.0};
  c.workloads[1] = {0.5, 1.0, 300.0};
  c.workloads[2] = {1.0, 2.0, 600.0};
  c.categories[0] = {0.9, 0.4};
  c.categories[1] = {0.9, 0.8};
  c.categories[2] = {1.2, 2.5};
  c.categories[3] = {0.8, 1.0};
  const auto node = [&](const char* name, NodeCategory cat, double vcpus, double mem) {
    const auto& f = c.category(cat);
    return NodeProfile{name, cat, vcpus, mem, 0.0, 0.0, f.speed_factor, f.power_scale};
  };
  c.nodes = {
      node("node-a", NodeCategory::kA, 2, 4),
      node("node-b", NodeCategory::kB, 2, 8),
      node("node-c", NodeCategory::kC, 4, 16),
      node("node-default", NodeCategory::kDefault, 2, 8),
  };
  return c;
}

WorkloadSpec ModelConfig::make_pod(WorkloadClass cls, std::string name) const {
  const auto& d = workload(cls);
  return WorkloadSpec{std::move(name), cls, d.cpu_request, d.memory_request_gb, d.work_units};
}

void ModelConfig::validate() const {
  try {
    job_context.validate();
    for (auto cls : kClasses) {
      activity[cls].validate();
      make_pod(cls, std::string(to_string(cls))).validate();
    }
    for (const auto& f : categories) {
      if (!(f.speed_factor > 0.0) || !(f.power_scale > 0.0)) {
        config_error("category speed_factor and power_scale must be > 0");
      }
    }
    for (const auto& n : nodes) n.validate();
    for (auto name : kAllSchemes) {
      if (schemes[name].name != name) config_error("scheme table out of order");
      schemes[name].validate();
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigError) throw;
    config_error(std::string("invalid configuration: ") + e.what());
  }
  if (!(simulation.arrival_interval_s >= 0.0) || !(simulation.noise_pct >= 0.0) ||
      !(simulation.noise_pct < 100.0)) {
    config_error("simulation arrival_interval_s must be >= 0 and noise_pct in [0, 100)");
  }
  if (!(simulation.reserved_cpu >= 0.0) || !(simulation.reserved_memory_gb >= 0.0)) {
    config_error("simulation reservations must be >= 0");
  }
}

json to_json(const NodeProfile& node) {
  return json{{"name", node.name},
              {"category", std::string(to_string(node.category))},
              {"vcpus", node.vcpus},
              {"memory_gb", node.memory_gb},
              {"allocated_cpu", node.allocated_cpu},
              {"allocated_memory_gb", node.allocated_memory_gb},
              {"speed_factor", node.speed_factor},
              {"power_scale", node.power_scale}};
}

json to_json(const WorkloadSpec& pod) {
  return json{{"name", pod.name},
              {"class", std::string(to_string(pod.workload_class))},
              {"cpu_request", pod.cpu_request},
              {"memory_request_gb", pod.memory_request_gb},
              {"work_units", pod.work_units}};
}

json to_json(const WeightScheme& scheme) {
  return json{{"name", std::string(to_string(scheme.name))},
              {"weights", scheme_weights_json(scheme)}};
}

json to_json(const ModelConfig& c) {
  json doc;
  doc["power"] = {{"idle_w", c.power.idle_w},
                  {"cpu_w_per_pct", c.power.cpu_w_per_pct},
                  {"mem_w_per_access", c.power.mem_w_per_access},
                  {"disk_w_per_op", c.power.disk_w_per_op},
                  {"net_w_per_op", c.power.net_w_per_op}};
  doc["job_context"] = {{"pue", c.job_context.pue}, {"runtime_s", c.job_context.runtime_s}};
  for (auto cls : kClasses) {
    const auto key = std::string(to_string(cls));
    const auto& w = c.workload(cls);
    const auto& a = c.activity[cls];
    doc["workloads"][key] = {{"cpu_request", w.cpu_request},
                             {"memory_request_gb", w.memory_request_gb},
                             {"work_units", w.work_units},
                             {"u_mem", a.u_mem},
                             {"u_disk", a.u_disk},
                             {"u_net", a.u_net}};
  }
  for (auto cat : kCategories) {
    const auto& f = c.category(cat);
    doc["categories"][std::string(to_string(cat))] = {{"speed_factor", f.speed_factor},
                                                      {"power_scale", f.power_scale}};
  }
  doc["nodes"] = json::array();
  for (const auto& n : c.nodes) doc["nodes"].push_back(to_json(n));
  for (auto name : kAllSchemes) {
    doc["schemes"][std::string(to_string(name))] = scheme_weights_json(c.schemes[name]);
  }
  doc["simulation"] = {{"arrival_interval_s", c.simulation.arrival_interval_s},
                       {"noise_pct", c.simulation.noise_pct},
                       {"reserved_node", c.simulation.reserved_node},
                       {"reserved_cpu", c.simulation.reserved_cpu},
                       {"reserved_memory_gb", c.simulation.reserved_memory_gb}};
  return doc;
}

ModelConfig model_config_from_json(const json& doc) {
  if (!doc.is_object()) config_error("configuration must be a JSON object");
  ModelConfig c = ModelConfig::defaults();
  if (const json* p = find(doc, "power")) {
    overlay(*p, "idle_w", c.power.idle_w);
    overlay(*p, "cpu_w_per_pct", c.power.cpu_w_per_pct);
    overlay(*p, "mem_w_per_access", c.power.mem_w_per_access);
    overlay(*p, "disk_w_per_op", c.power.disk_w_per_op);
    overlay(*p, "net_w_per_op", c.power.net_w_per_op);
  }
  if (const json* p = find(doc, "job_context")) {
    overlay(*p, "pue", c.job_context.pue);
    overlay(*p, "runtime_s", c.job_context.runtime_s);
  }
  if (const json* p = find(doc, "workloads")) {
    for (auto cls : kClasses) {
      const json* w = find(*p, std::string(to_string(cls)).c_str());
      if (w == nullptr) continue;
      auto& d = c.workloads[static_cast<std::size_t>(cls)];
      overlay(*w, "cpu_request", d.cpu_request);
      overlay(*w, "memory_request_gb", d.memory_request_gb);
      overlay(*w, "work_units", d.work_units);
      overlay(*w, "u_mem", c.activity[cls].u_mem);
      overlay(*w, "u_disk", c.activity[cls].u_disk);
      overlay(*w, "u_net", c.activity[cls].u_net);
    }
  }
  bool categories_changed = false;
  if (const json* p = find(doc, "categories")) {
    for (auto cat : kCategories) {
      const json* f = find(*p, std::string(to_string(cat)).c_str());
      if (f == nullptr) continue;
      auto& d = c.categories[static_cast<std::size_t>(cat)];
      overlay(*f, "speed_factor", d.speed_factor);
      overlay(*f, "power_scale", d.power_scale);
      categories_changed = true;
    }
  }
  if (const json* p = find(doc, "nodes")) {
    c.nodes = nodes_from_json(*p, c);
  } else if (categories_changed) {
    for (auto& n : c.nodes) {
      n.speed_factor = c.category(n.category).speed_factor;
      n.power_scale = c.category(n.category).power_scale;
    }
  }
  if (const json* p = find(doc, "schemes")) {
    if (!p->is_object()) config_error("'schemes' must be an object");
    for (auto name : kAllSchemes) {
      if (const json* s = find(*p, std::string(to_string(name)).c_str())) {
        c.schemes[name] = scheme_from_json(*s, name);
      }
    }
  }
  if (const json* p = find(doc, "simulation")) {
    overlay(*p, "arrival_interval_s", c.simulation.arrival_interval_s);
    overlay(*p, "noise_pct", c.simulation.noise_pct);
    overlay(*p, "reserved_node", c.simulation.reserved_node);
    overlay(*p, "reserved_cpu", c.simulation.reserved_cpu);
    overlay(*p, "reserved_memory_gb", c.simulation.reserved_memory_gb);
  }
  c.validate();
  return c;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ModelConfig load_model_config(const std::filesystem::path& path) {
  const std::string body = read_text_file(path);
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded()) config_error("'" + path.string() + "' is not valid JSON");
  return model_config_from_json(doc);
}

NodeProfile node_from_json(const json& doc, const ModelConfig& config) {
  if (!doc.is_object()) config_error("node document must be an object");
  NodeProfile n;
  n.name = text(doc, "name");
  if (n.name.empty()) config_error("node name must not be empty");
  const auto cat = parse_node_category(text(doc, "category"));
  if (!cat) config_error("node '" + n.name + "' has an unknown category");
  n.category = *cat;
  n.vcpus = number(doc, "vcpus");
  n.memory_gb = number(doc, "memory_gb");
  n.speed_factor = config.category(n.category).speed_factor;
  n.power_scale = config.category(n.category).power_scale;
  overlay(doc, "allocated_cpu", n.allocated_cpu);
  overlay(doc, "allocated_memory_gb", n.allocated_memory_gb);
  overlay(doc, "speed_factor", n.speed_factor);
  overlay(doc, "power_scale", n.power_scale);
  n.validate();
  return n;
}

WorkloadSpec pod_from_json(const json& doc, const ModelConfig& config) {
  if (!doc.is_object()) config_error("pod document must be an object");
  const auto cls = parse_workload_class(text(doc, "class"));
  if (!cls) config_error("pod class must be one of light, medium, complex");
  WorkloadSpec pod = config.make_pod(*cls, std::string(to_string(*cls)));
  overlay(doc, "name", pod.name);
  overlay(doc, "cpu_request", pod.cpu_request);
  overlay(doc, "memory_request_gb", pod.memory_request_gb);
  overlay(doc, "work_units", pod.work_units);
  pod.validate();
  return pod;
}

std::vector<NodeProfile> nodes_from_json(const json& doc, const ModelConfig& config) {
  const json* list = &doc;
  if (doc.is_object()) {
    list = find(doc, "nodes");
    if (list == nullptr) config_error("missing field 'nodes'");
  }
  if (!list->is_array()) config_error("'nodes' must be an array");
  std::vector<NodeProfile> nodes;
  nodes.reserve(list->size());
  for (const auto& item : *list) nodes.push_back(node_from_json(item, config));
  return nodes;
}

WeightScheme scheme_from_json(const json& doc, SchemeName name) {
  if (!doc.is_object()) config_error("scheme weights must be an object");
  WeightScheme s{name, {}};
  for (std::size_t j = 0; j < kCriteriaCount; ++j) {
    s.weights[j] = number(doc, std::string(kCriteriaNames[j]).c_str());
  }
  try {
    s.validate();
  } catch (const Error& e) {
    config_error(e.what());
  }
  return s;
}

}  // namespace greenpod

#pragma once

// Golden extender exchanges: NN_name.request.json holds
// {"method", "path", "body" | "raw_body"} and NN_name.response.json holds
// {"status", "body"}.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace corpus {

struct Entry {
  std::string name;
  std::string method;
  std::string path;
  std::string body;               // exactly what goes on the wire
  std::optional<nlohmann::json> request;  // parsed body when well-formed
  int status = 0;
  nlohmann::json expected;
};

inline std::string source_dir() { return GREENPOD_SOURCE_DIR; }

inline nlohmann::json read_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

inline std::vector<Entry> load() {
  const std::filesystem::path dir = source_dir() + "/tests/data/extender_corpus";
  std::vector<Entry> out;
  for (const auto& f : std::filesystem::directory_iterator(dir)) {
    const auto name = f.path().filename().string();
    const std::string suffix = ".request.json";
    if (name.size() <= suffix.size() || name.substr(name.size() - suffix.size()) != suffix) continue;
    const auto stem = name.substr(0, name.size() - suffix.size());
    const auto req = read_json(f.path());
    const auto resp = read_json(dir / (stem + ".response.json"));
    Entry e;
    e.name = stem;
    e.method = req.at("method");
    e.path = req.at("path");
    if (req.contains("raw_body")) {
      e.body = req["raw_body"].get<std::string>();
    } else {
      e.request = req["body"];
      e.body = req["body"].dump();
    }
    e.status = resp.at("status");
    e.expected = resp.at("body");
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.name < b.name; });
  return out;
}

}  // namespace corpus

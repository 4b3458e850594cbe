#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "greenpod/cli.hpp"
#include "greenpod/config.hpp"

namespace fs = std::filesystem;
using greenpod::cli::run_cli;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  auto dir = fs::temp_directory_path() / ("greenpod_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::string write(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path.string();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string catalog_file(const fs::path& dir) {
  json nodes = json::array();
  for (const auto& n : greenpod::ModelConfig::defaults().nodes) nodes.push_back(greenpod::to_json(n));
  return write(dir / "catalog.json", json{{"nodes", nodes}}.dump());
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("help and usage errors") {
    CHECK(cli({"--help"}).code == 0);
    for (const char* sub : {"rank", "simulate", "factorial", "impact", "serve"}) {
      const auto r = cli({sub, "--help"});
      CHECK(r.code == 0);
      CHECK(r.out.find("--") != std::string::npos);
    }
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    const auto bad_scheme = cli({"simulate", "--level", "low", "--scheme", "greenest"});
    CHECK(bad_scheme.code == 2);
    CHECK(bad_scheme.err.find("energy_centric") != std::string::npos);
    CHECK(cli({"simulate", "--level", "extreme", "--scheme", "energy"}).code == 2);
    CHECK(cli({"impact", "--optimization", "lots"}).code == 2);
    CHECK(cli({"--config", "/nonexistent.json", "impact"}).code == 2);
  }

  TEST_CASE("rank: fresh catalog, medium pod, energy scheme") {
    const auto dir = scratch_dir();
    const auto pod = write(dir / "pod.json", R"({"class": "medium", "name": "infer"})");
    const auto out_path = (dir / "rank.json").string();
    const auto r = cli({"rank", "--nodes", catalog_file(dir), "--pod", pod, "--scheme", "energy",
                        "--out", out_path});
    CHECK(r.code == 0);
    CHECK(r.out.find("best: node-a") != std::string::npos);
    const auto doc = json::parse(slurp(out_path));
    CHECK(doc["best"] == "node-a");
    CHECK(doc["scores"].size() == 4);
    CHECK(doc["criteria"]["node-a"]["energy"].get<double>() == doctest::Approx(5.6183733333333333));
  }

  TEST_CASE("rank: identical nodes under the general scheme") {
    const auto dir = scratch_dir();
    const auto nodes = write(dir / "twins.json", R"([
      {"name": "t1", "category": "B", "vcpus": 2, "memory_gb": 8},
      {"name": "t2", "category": "B", "vcpus": 2, "memory_gb": 8}])");
    const auto pod = write(dir / "pod.json", R"({"class": "light"})");
    const auto r = cli({"rank", "--nodes", nodes, "--pod", pod, "--scheme", "general"});
    CHECK(r.code == 0);
    CHECK(r.out.find("best: t1") != std::string::npos);
    CHECK(r.out.find("1.000000") != std::string::npos);
  }

  TEST_CASE("rank: empty node file is a usage error") {
    const auto dir = scratch_dir();
    const auto pod = write(dir / "pod.json", R"({"class": "light"})");
    CHECK(cli({"rank", "--nodes", write(dir / "empty.json", ""), "--pod", pod}).code == 2);
    CHECK(cli({"rank", "--nodes", write(dir / "none.json", "[]"), "--pod", pod}).code == 2);
  }

  TEST_CASE("rank: unschedulable pod is a domain error") {
    const auto dir = scratch_dir();
    const auto nodes = write(dir / "full.json", R"([
      {"name": "n1", "category": "A", "vcpus": 2, "memory_gb": 4, "allocated_cpu": 2}])");
    const auto pod = write(dir / "pod.json", R"({"class": "complex"})");
    const auto r = cli({"rank", "--nodes", nodes, "--pod", pod});
    CHECK(r.code == 1);
    CHECK(r.err.find("insufficient_cpu") != std::string::npos);
    CHECK(cli({"rank", "--nodes", write(dir / "bad.json", "{oops"), "--pod", pod}).code == 1);
  }

  TEST_CASE("simulate is deterministic and machine output matches the table") {
    const auto dir = scratch_dir();
    const auto a = (dir / "a.csv").string();
    const auto b = (dir / "b.csv").string();
    const auto r1 = cli({"simulate", "--level", "medium", "--scheme", "energy", "--seed", "42", "--out", a});
    const auto r2 = cli({"simulate", "--level", "medium", "--scheme", "energy", "--seed", "42", "--out", b});
    CHECK(r1.code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(r1.out == r2.out);
    // The percentage printed in the table is the CSV value at two decimals.
    const auto csv = slurp(a);
    const auto line = csv.substr(csv.find('\n') + 1);
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    char pct[32];
    std::snprintf(pct, sizeof(pct), "%.2f", std::stod(fields[6]));
    CHECK(r1.out.find(pct) != std::string::npos);
  }

  TEST_CASE("simulate control run") {
    const auto r = cli({"simulate", "--level", "high", "--scheme", "general", "--control", "--format", "csv"});
    CHECK(r.code == 0);
    CHECK(r.out.find(",0.000000,0.0000,") != std::string::npos);
  }

  TEST_CASE("factorial writes CSV, summary and heatmap") {
    const auto dir = scratch_dir();
    const auto csv = (dir / "f.csv").string();
    const auto heat = (dir / "heat.csv").string();
    const auto summary = (dir / "summary.json").string();
    const auto r = cli({"factorial", "--seeds", "3", "--levels", "low,medium", "--schemes", "energy,general",
                        "--out", csv, "--heatmap", heat, "--summary-json", summary, "--jobs", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("Average (All)") != std::string::npos);
    int lines = 0;
    for (char c : slurp(csv)) lines += c == '\n';
    CHECK(lines == 1 + 2 * 2 * 3);
    CHECK(slurp(heat).rfind("scheme,level,optimization_pct\n", 0) == 0);
    CHECK(json::parse(slurp(summary)).size() == 2 * 3 + 1);
  }

  TEST_CASE("impact defaults and overrides") {
    const auto dir = scratch_dir();
    const auto out = (dir / "impact.json").string();
    const auto r = cli({"impact", "--out", out});
    CHECK(r.code == 0);
    CHECK(r.out.find("10.70 MWh") != std::string::npos);
    CHECK(r.out.find("$102,326") != std::string::npos);
    CHECK(json::parse(slurp(out))["table"].size() == 11);

    const auto zero = cli({"impact", "--optimization", "0"});
    CHECK(zero.code == 0);
    CHECK(zero.out.find("$0 ") != std::string::npos);
    CHECK(zero.out.find("$1,380") == std::string::npos);

    CHECK(cli({"impact", "--clusters", "10"}).out.find("107.02 MWh") != std::string::npos);
    CHECK(cli({"impact", "--jobs-per-day", "-5"}).code == 1);
    const auto derived = cli({"impact", "--derive-co2"});
    CHECK(derived.out.find("4.00 metric tons") != std::string::npos);
  }

  TEST_CASE("config discovery: flag beats environment") {
    const auto dir = scratch_dir();
    const auto cfg = write(dir / "cfg.json", R"({"schemes": {"energy_centric": {
      "execution_time": 1, "energy": 0, "core_availability": 0, "memory_availability": 0,
      "resource_balance": 0}}})");
    const auto broken = write(dir / "broken.json", R"({"power": {"idle_w": "x"}})");
    const auto pod = write(dir / "pod.json", R"({"class": "medium"})");
    const auto nodes = catalog_file(dir);

    ::setenv("GREENPOD_CONFIG", broken.c_str(), 1);
    CHECK(cli({"rank", "--nodes", nodes, "--pod", pod}).code == 1);
    const auto flagged = cli({"--config", cfg, "rank", "--nodes", nodes, "--pod", pod});
    ::unsetenv("GREENPOD_CONFIG");
    CHECK(flagged.code == 0);
    // With execution time as the only criterion the fastest node wins.
    CHECK(flagged.out.find("best: node-c") != std::string::npos);
    CHECK(cli({"rank", "--nodes", nodes, "--pod", pod}).out.find("best: node-a") != std::string::npos);
  }
}

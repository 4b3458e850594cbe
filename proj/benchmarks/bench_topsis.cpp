#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "greenpod/config.hpp"
#include "greenpod/scheduling.hpp"
#include "greenpod/topsis.hpp"

namespace {

using greenpod::topsis::DecisionMatrix;

DecisionMatrix random_matrix(std::size_t rows) {
  std::mt19937_64 rng(rows);
  std::uniform_real_distribution<double> val(0.0, 100.0);
  std::vector<std::string> ids;
  std::vector<double> values;
  for (std::size_t i = 0; i < rows; ++i) {
    ids.push_back("n" + std::to_string(i));
    for (std::size_t j = 0; j < greenpod::kCriteriaCount; ++j) values.push_back(val(rng));
  }
  std::vector<greenpod::topsis::CriterionSpec> criteria;
  for (std::size_t j = 0; j < greenpod::kCriteriaCount; ++j) {
    criteria.push_back({std::string(greenpod::kCriteriaNames[j]), greenpod::kCriteriaDirections[j], 0.2});
  }
  return DecisionMatrix(ids, criteria, values);
}

void BM_Rank(benchmark::State& state) {
  const auto m = random_matrix(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(greenpod::topsis::rank(m));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Rank)->RangeMultiplier(4)->Range(4, 4096)->Complexity();

void BM_Schedule(benchmark::State& state) {
  const auto model = greenpod::ModelConfig::defaults();
  std::vector<greenpod::NodeProfile> nodes;
  for (int i = 0; i < state.range(0); ++i) {
    auto n = model.nodes[static_cast<std::size_t>(i) % model.nodes.size()];
    n.name += "-" + std::to_string(i);
    nodes.push_back(n);
  }
  const auto pod = model.make_pod(greenpod::WorkloadClass::kMedium, "bench");
  const auto& scheme = model.schemes[greenpod::SchemeName::kEnergyCentric];
  const auto energy = model.energy_model();
  for (auto _ : state) benchmark::DoNotOptimize(greenpod::schedule(pod, nodes, scheme, energy));
}
BENCHMARK(BM_Schedule)->Arg(4)->Arg(64)->Arg(1024);

}  // namespace
BENCHMARK_MAIN();

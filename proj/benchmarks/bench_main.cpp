#include <benchmark/benchmark.h>

#include "ergodograph/builders.hpp"
#include "ergodograph/flows.hpp"
#include "ergodograph/tower.hpp"
#include "ergodograph/winding.hpp"

using namespace ergodograph;

namespace {

constexpr std::size_t kCap = 1000000;

const CoverTower& example(std::size_t levels) {
  static std::vector<std::unique_ptr<CoverTower>> cache(8);
  if (!cache[levels]) {
    std::vector<std::uint64_t> p;
    for (std::size_t k = 1; k < levels; ++k) p.push_back(std::uint64_t{1} << k);
    cache[levels] = std::make_unique<CoverTower>(build_example_63(levels, p));
  }
  return *cache[levels];
}

void BM_BuildExample(benchmark::State& state) {
  const auto levels = static_cast<std::size_t>(state.range(0));
  std::vector<std::uint64_t> p;
  for (std::size_t k = 1; k < levels; ++k) p.push_back(std::uint64_t{1} << k);
  for (auto _ : state) benchmark::DoNotOptimize(build_example_63(levels, p));
  state.counters["vertices"] = static_cast<double>(example(levels).level(levels).vertex_count());
}
BENCHMARK(BM_BuildExample)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_EnumerateCircuits(benchmark::State& state) {
  const Graph& g = example(static_cast<std::size_t>(state.range(0))).level(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_circuits(g, kCap));
  state.counters["edges"] = static_cast<double>(g.edge_count());
}
BENCHMARK(BM_EnumerateCircuits)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_Pushforward(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const CoverTower& t = example(m);
  const Cover phi = t.composite(m, 1);
  Circulation x(t.level_ptr(m));
  for (const auto& c : t.circuits(m, kCap)) x += circuit_vector(t.level_ptr(m), c);
  for (auto _ : state) benchmark::DoNotOptimize(pushforward(phi, x));
}
BENCHMARK(BM_Pushforward)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_SimplexDiameter(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const CoverTower& t = example(m);
  for (auto _ : state) benchmark::DoNotOptimize(simplex_diameter(t, m, 1, kCap));
}
BENCHMARK(BM_SimplexDiameter)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_TreeTypeCertificate(benchmark::State& state) {
  TreeTypeSpec spec;
  spec.periods = {2, 3, 2};
  spec.parents = {{0, 0, 1}};
  const auto levels = static_cast<std::size_t>(state.range(0));
  spec.windings.assign(levels - 1, IntMatrix{{2, 1, 1}, {1, 2, 1}, {1, 1, 2}});
  const CoverTower t = build_tree_type(spec);
  for (auto _ : state) benchmark::DoNotOptimize(certify_unique_ergodicity(t, 1, levels, kCap));
}
BENCHMARK(BM_TreeTypeCertificate)->DenseRange(2, 6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

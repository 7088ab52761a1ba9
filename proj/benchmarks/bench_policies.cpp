#include <benchmark/benchmark.h>

#include <random>

#include "gcsim/policies.hpp"
#include "gcsim/simulate.hpp"

namespace {

struct Workload {
  gcsim::BlockMap map;
  gcsim::Trace trace;
  std::size_t capacity;
};

Workload scan_workload(std::size_t accesses, std::uint32_t B,
                       std::size_t capacity) {
  Workload w;
  w.capacity = capacity;
  w.map.max_block_size = B;
  std::mt19937_64 rng(7);
  std::uint32_t blocks = static_cast<std::uint32_t>(accesses / B + 1);
  for (std::uint32_t b = 0; b < blocks; ++b) w.map.blocks[b] = B;
  std::uniform_int_distribution<std::uint32_t> bd(0, blocks - 1);
  std::uniform_int_distribution<std::uint32_t> id(0, B - 1);
  for (std::size_t i = 0; i < accesses; ++i)
    w.trace.accesses.push_back({bd(rng), id(rng)});
  return w;
}

void run_policy(benchmark::State& state, const std::string& spec) {
  Workload w = scan_workload(1 << 14, 8, 256);
  for (auto _ : state) {
    auto policy = gcsim::make_policy(spec, w.capacity, w.map);
    auto result = gcsim::simulate(*policy, w.trace, w.map, w.capacity);
    benchmark::DoNotOptimize(result.misses);
  }
  state.SetItemsProcessed(static_cast<long>(state.iterations()) *
                          static_cast<long>(w.trace.size()));
}

void BM_ItemLru(benchmark::State& state) { run_policy(state, "item-lru"); }
void BM_BlockLru(benchmark::State& state) { run_policy(state, "block-lru"); }
void BM_Iblp(benchmark::State& state) { run_policy(state, "iblp:128,128"); }
void BM_GcMarking(benchmark::State& state) {
  run_policy(state, "gc-marking:1");
}

}  // namespace

BENCHMARK(BM_ItemLru);
BENCHMARK(BM_BlockLru);
BENCHMARK(BM_Iblp);
BENCHMARK(BM_GcMarking);

BENCHMARK_MAIN();

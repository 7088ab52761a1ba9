#include <benchmark/benchmark.h>

#include <random>

#include "gcsim/locality.hpp"
#include "gcsim/oracle.hpp"

namespace {

void BM_OptGc(benchmark::State& state) {
  std::mt19937_64 rng(11);
  gcsim::BlockMap map{3, {{0, 3}, {1, 3}, {2, 3}, {3, 3}}};
  gcsim::Trace trace;
  std::uniform_int_distribution<std::uint32_t> bd(0, 3), id(0, 2);
  for (int i = 0; i < 12; ++i) trace.accesses.push_back({bd(rng), id(rng)});
  for (auto _ : state) {
    auto sched = gcsim::opt_gc(trace, map, 4);
    benchmark::DoNotOptimize(sched.claimed_cost);
  }
}

void BM_Belady(benchmark::State& state) {
  std::mt19937_64 rng(12);
  gcsim::Trace trace;
  std::uniform_int_distribution<std::uint32_t> bd(0, 255);
  for (int i = 0; i < 1 << 14; ++i) trace.accesses.push_back({bd(rng), 0});
  for (auto _ : state) {
    auto sched = gcsim::belady(trace, 64);
    benchmark::DoNotOptimize(sched.claimed_cost);
  }
}

void BM_ProfileAll(benchmark::State& state) {
  std::mt19937_64 rng(13);
  gcsim::BlockMap map{4, {}};
  for (std::uint32_t b = 0; b < 64; ++b) map.blocks[b] = 4;
  gcsim::Trace trace;
  std::uniform_int_distribution<std::uint32_t> bd(0, 63), id(0, 3);
  auto n = static_cast<std::size_t>(state.range(0));
  for (std::size_t i = 0; i < n; ++i) trace.accesses.push_back({bd(rng), id(rng)});
  for (auto _ : state) {
    auto prof = gcsim::profile_all(trace, map);
    benchmark::DoNotOptimize(prof.f.back());
  }
}

}  // namespace

BENCHMARK(BM_OptGc);
BENCHMARK(BM_Belady);
BENCHMARK(BM_ProfileAll)->Arg(512)->Arg(2048);

BENCHMARK_MAIN();

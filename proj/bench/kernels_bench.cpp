// Serial reference vs OpenMP kernels on synthetic heaps.
//   ./rolp_kernels_bench --benchmark_filter=Liveness

#include <benchmark/benchmark.h>

#include <random>

#include "rolp/gc_kernels.hpp"

using namespace rolp;

namespace {

struct Fixture {
  std::vector<HeapObject> objects;
  std::vector<ObjectId> resident;
  std::vector<kernels::SurvivorSample> samples;
  LifetimeTable table{16};

  explicit Fixture(std::size_t n) {
    std::mt19937_64 rng(n);
    objects.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      objects[i].id = i;
      objects[i].size = 16 + rng() % 4096;
      objects[i].death_tick = rng() % 1000;
      resident.push_back(i);
    }
    samples.resize(n);
    for (auto& s : samples) {
      s.context = static_cast<uint32_t>(rng() % 64) | static_cast<uint32_t>(rng() % 8) << 16;
      s.age = 1 + static_cast<unsigned>(rng() % 15);
    }
    for (uint16_t site = 0; site < 64; site += 4) table.expand_site(site);
  }
};

template <auto Kernel>
void BM_Liveness(benchmark::State& state) {
  Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto split = Kernel(f.resident, f.objects, 500);
    benchmark::DoNotOptimize(split.live_bytes);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void BM_Survivors(benchmark::State& state) {
  Fixture f(static_cast<std::size_t>(state.range(0)));
  std::vector<WorkerTable> workers(8, WorkerTable(16));
  for (auto _ : state) {
    Kernel(f.samples, f.table, workers);
    for (auto& w : workers) w.clear();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_Liveness<kernels::split_liveness_serial>)->Name("Liveness/serial")->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_Liveness<kernels::split_liveness_parallel>)->Name("Liveness/parallel")->RangeMultiplier(8)->Range(1 << 10, 1 << 22)->UseRealTime();
BENCHMARK(BM_Survivors<kernels::account_survivors_serial>)->Name("Survivors/serial")->RangeMultiplier(8)->Range(1 << 10, 1 << 20);
BENCHMARK(BM_Survivors<kernels::account_survivors_parallel>)->Name("Survivors/parallel")->RangeMultiplier(8)->Range(1 << 10, 1 << 20)->UseRealTime();

BENCHMARK_MAIN();

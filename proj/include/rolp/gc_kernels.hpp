#pragma once

// Data-parallel inner loops of a collection. Each kernel has a serial
// reference and an OpenMP version; both produce identical results.

#include <cstdint>
#include <span>
#include <vector>

#include "rolp/heap.hpp"
#include "rolp/lifetime_table.hpp"

namespace rolp::kernels {

struct LivenessSplit {
  std::vector<ObjectId> live;  // resident order preserved
  std::vector<ObjectId> dead;
  uint64_t live_bytes = 0;
  uint64_t dead_bytes = 0;

  friend bool operator==(const LivenessSplit&, const LivenessSplit&) = default;
};

LivenessSplit split_liveness_serial(std::span<const ObjectId> resident,
                                    std::span<const HeapObject> objects, uint64_t clock);
LivenessSplit split_liveness_parallel(std::span<const ObjectId> resident,
                                      std::span<const HeapObject> objects, uint64_t clock);

struct SurvivorSample {
  uint32_t context = 0;
  unsigned age = 0;
};

// Survivor i goes to worker i % workers.size(). The global table is only
// read, to resolve the key each sample is accounted under.
void account_survivors_serial(std::span<const SurvivorSample> survivors,
                              const LifetimeTable& global, std::span<WorkerTable> workers);
void account_survivors_parallel(std::span<const SurvivorSample> survivors,
                                const LifetimeTable& global, std::span<WorkerTable> workers);

// Below this many items the parallel versions are not worth the fork.
inline constexpr std::size_t parallel_cutoff = 4096;

}  // namespace rolp::kernels

#include "rolp/gc_kernels.hpp"

namespace rolp::kernels {

LivenessSplit split_liveness_serial(std::span<const ObjectId> resident,
                                    std::span<const HeapObject> objects, uint64_t clock) {
  LivenessSplit out;
  for (ObjectId id : resident) {
    const HeapObject& obj = objects[id];
    if (obj.is_live(clock)) {
      out.live.push_back(id);
      out.live_bytes += obj.size;
    } else {
      out.dead.push_back(id);
      out.dead_bytes += obj.size;
    }
  }
  return out;
}

LivenessSplit split_liveness_parallel(std::span<const ObjectId> resident,
                                      std::span<const HeapObject> objects, uint64_t clock) {
  const auto n = static_cast<std::ptrdiff_t>(resident.size());
  std::vector<uint8_t> live_flag(resident.size());
  uint64_t live_bytes = 0;
  uint64_t dead_bytes = 0;

#pragma omp parallel for schedule(static) reduction(+ : live_bytes, dead_bytes)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const HeapObject& obj = objects[resident[i]];
    bool live = obj.is_live(clock);
    live_flag[i] = live;
    if (live) {
      live_bytes += obj.size;
    } else {
      dead_bytes += obj.size;
    }
  }

  LivenessSplit out;
  out.live_bytes = live_bytes;
  out.dead_bytes = dead_bytes;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    (live_flag[i] ? out.live : out.dead).push_back(resident[i]);
  }
  return out;
}

void account_survivors_serial(std::span<const SurvivorSample> survivors,
                              const LifetimeTable& global, std::span<WorkerTable> workers) {
  const std::size_t w = workers.size();
  for (std::size_t i = 0; i < survivors.size(); ++i) {
    const SurvivorSample& s = survivors[i];
    workers[i % w].record(global.key_for(AllocationContext::from_combined(s.context)), s.age);
  }
}

void account_survivors_parallel(std::span<const SurvivorSample> survivors,
                                const LifetimeTable& global, std::span<WorkerTable> workers) {
  const auto w = static_cast<std::ptrdiff_t>(workers.size());
  const std::size_t n = survivors.size();

  // One iteration per worker: each table has exactly one writer.
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t worker = 0; worker < w; ++worker) {
    WorkerTable& table = workers[worker];
    for (std::size_t i = static_cast<std::size_t>(worker); i < n; i += static_cast<std::size_t>(w)) {
      const SurvivorSample& s = survivors[i];
      table.record(global.key_for(AllocationContext::from_combined(s.context)), s.age);
    }
  }
}

}  // namespace rolp::kernels

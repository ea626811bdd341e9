#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rolp/gc_kernels.hpp"
#include "rolp/heap.hpp"
#include "rolp/lifetime_table.hpp"

namespace rolp {

struct PauseRecord {
  uint64_t collection_index = 0;  // 1-based, in trigger order
  unsigned generation = 0;        // 0 = young collection, k = gen-k collection
  uint64_t clock = 0;
  uint64_t scanned_bytes = 0;
  uint64_t copied_bytes = 0;    // every byte moved, promotions included
  uint64_t promoted_bytes = 0;  // young -> old share of copied_bytes
  double modeled_ms = 0.0;
  unsigned survivor_threshold_at_start = 0;

  bool is_young() const { return generation == 0; }
  std::string kind() const { return is_young() ? "young" : "gen-" + std::to_string(generation); }
  // Old-generation copying (compaction).
  uint64_t compacted_bytes() const { return is_young() ? 0 : copied_bytes; }
};

double modeled_pause_ms(const HeapConfig& config, uint64_t scanned, uint64_t copied);

struct ErgonomicsState {
  unsigned survivor_threshold = ObjectHeader::max_age;
  unsigned max_tenuring_threshold = ObjectHeader::max_age;
  double target_survivor_fraction = 0.5;
};

using AgeHistogram = std::array<uint64_t, ObjectHeader::max_age + 1>;

// Smallest age whose cumulative survivor bytes exceed the target share of
// survivor space; max_tenuring_threshold if none does.
unsigned update_ergonomics(ErgonomicsState& state, const AgeHistogram& survivor_bytes_by_age,
                           uint64_t survivor_capacity);

// Hooks for verification code that tracks objects independently.
class GcListener {
 public:
  virtual ~GcListener() = default;
  virtual void collection_started(uint64_t /*index*/, unsigned /*gen*/, uint64_t /*clock*/) {}
  virtual void object_promoted(ObjectId /*id*/, unsigned /*to_gen*/) {}
  virtual void collection_finished(const PauseRecord& /*record*/) {}
};

struct CollectorOptions {
  unsigned workers = 4;
  bool parallel_kernels = true;
  double target_survivor_fraction = 0.5;
};

class Collector {
 public:
  // `table` may be null when profiling is off.
  Collector(Heap& heap, LifetimeTable* table, CollectorOptions options = {},
            GcListener* listener = nullptr);

  // Young collection plus any cascaded gen-1 collection, in index order.
  std::vector<PauseRecord> collect_young();
  PauseRecord collect_generation(unsigned k);

  const ErgonomicsState& ergonomics() const { return _ergonomics; }
  uint64_t collections() const { return _collections; }
  std::span<const WorkerTable> worker_tables() const { return _workers; }

 private:
  kernels::LivenessSplit split(const Generation& gen) const;
  void account(std::span<const kernels::SurvivorSample> survivors);
  void finish(PauseRecord& record);

  Heap& _heap;
  LifetimeTable* _table;
  CollectorOptions _options;
  GcListener* _listener;
  ErgonomicsState _ergonomics;
  std::vector<WorkerTable> _workers;
  uint64_t _collections = 0;
};

}  // namespace rolp

#include "rolp/gc_engine.hpp"

#include <algorithm>

namespace rolp {

double modeled_pause_ms(const HeapConfig& config, uint64_t scanned, uint64_t copied) {
  return config.scan_cost * static_cast<double>(scanned) + config.copy_cost * static_cast<double>(copied);
}

unsigned update_ergonomics(ErgonomicsState& state, const AgeHistogram& survivor_bytes_by_age,
                           uint64_t survivor_capacity) {
  const double desired = state.target_survivor_fraction * static_cast<double>(survivor_capacity);
  unsigned threshold = state.max_tenuring_threshold;
  uint64_t total = 0;
  for (unsigned age = 1; age < survivor_bytes_by_age.size(); ++age) {
    total += survivor_bytes_by_age[age];
    if (static_cast<double>(total) > desired) {
      threshold = age;
      break;
    }
  }
  state.survivor_threshold = std::clamp(threshold, 1u, state.max_tenuring_threshold);
  return state.survivor_threshold;
}

Collector::Collector(Heap& heap, LifetimeTable* table, CollectorOptions options, GcListener* listener)
    : _heap(heap), _table(table), _options(options), _listener(listener) {
  if (_options.workers == 0) throw std::invalid_argument("collector: need at least one GC worker");
  _ergonomics.max_tenuring_threshold = heap.config().max_tenuring_threshold;
  _ergonomics.survivor_threshold = _ergonomics.max_tenuring_threshold;
  _ergonomics.target_survivor_fraction = _options.target_survivor_fraction;
  _workers.assign(_options.workers, WorkerTable(table ? table->slots() : default_lifetime_slots));
}

kernels::LivenessSplit Collector::split(const Generation& gen) const {
  if (_options.parallel_kernels && gen.resident.size() >= kernels::parallel_cutoff) {
    return kernels::split_liveness_parallel(gen.resident, _heap.objects(), _heap.clock());
  }
  return kernels::split_liveness_serial(gen.resident, _heap.objects(), _heap.clock());
}

void Collector::account(std::span<const kernels::SurvivorSample> survivors) {
  if (!_table || survivors.empty()) return;
  if (_options.parallel_kernels && survivors.size() >= kernels::parallel_cutoff) {
    kernels::account_survivors_parallel(survivors, *_table, _workers);
  } else {
    kernels::account_survivors_serial(survivors, *_table, _workers);
  }
}

void Collector::finish(PauseRecord& record) {
  record.modeled_ms = modeled_pause_ms(_heap.config(), record.scanned_bytes, record.copied_bytes);
  if (_listener) _listener->collection_finished(record);
  // The pause is closed; folding worker tables into the global one costs it nothing.
  if (_table) merge_worker_tables(*_table, _workers);
}

std::vector<PauseRecord> Collector::collect_young() {
  std::vector<PauseRecord> records;
  PauseRecord record;
  record.collection_index = ++_collections;
  record.generation = 0;
  record.clock = _heap.clock();
  record.survivor_threshold_at_start = _ergonomics.survivor_threshold;
  if (_listener) _listener->collection_started(record.collection_index, 0, _heap.clock());

  Generation& young = _heap.generation(0);
  kernels::LivenessSplit scan = split(young);
  record.scanned_bytes = scan.live_bytes + scan.dead_bytes;

  const unsigned threshold = _ergonomics.survivor_threshold;
  const uint64_t survivor_capacity = _heap.config().survivor_capacity;
  AgeHistogram by_age{};
  std::vector<ObjectId> kept;
  std::vector<ObjectId> promoted;
  std::vector<kernels::SurvivorSample> samples;
  uint64_t kept_bytes = 0;
  uint64_t promoted_bytes = 0;

  for (ObjectId id : scan.live) {
    HeapObject& obj = _heap.object(id);
    unsigned age = std::min(obj.header.age() + 1, ObjectHeader::max_age);
    obj.header = obj.header.with_age(age);
    by_age[age] += obj.size;
    // Survivor space overflow promotes early, like a real scavenge.
    if (age < threshold && kept_bytes + obj.size <= survivor_capacity) {
      kept.push_back(id);
      kept_bytes += obj.size;
    } else {
      promoted.push_back(id);
      promoted_bytes += obj.size;
    }
    if (obj.profiled) samples.push_back({obj.header.alloc_context(), age});
  }

  if (!_heap.generation(1).fits(promoted_bytes)) {
    records.push_back(collect_generation(1));
    if (!_heap.generation(1).fits(promoted_bytes)) {
      throw HeapExhausted("heap: generation 1 cannot absorb " + std::to_string(promoted_bytes) +
                          " promoted bytes");
    }
  }

  for (ObjectId id : scan.dead) _heap.object(id).reclaimed = true;
  Generation& old = _heap.generation(1);
  for (ObjectId id : promoted) {
    _heap.object(id).resident_gen = 1;
    old.resident.push_back(id);
    if (_listener) _listener->object_promoted(id, 1);
  }
  old.occupancy += promoted_bytes;
  young.resident = std::move(kept);
  young.occupancy = kept_bytes;

  record.copied_bytes = kept_bytes + promoted_bytes;
  record.promoted_bytes = promoted_bytes;
  account(samples);
  finish(record);
  update_ergonomics(_ergonomics, by_age, survivor_capacity);

  records.push_back(record);
  std::sort(records.begin(), records.end(),
            [](const PauseRecord& a, const PauseRecord& b) { return a.collection_index < b.collection_index; });
  return records;
}

PauseRecord Collector::collect_generation(unsigned k) {
  if (k == 0 || k > _heap.oldest_generation()) {
    throw std::out_of_range("collector: no old generation " + std::to_string(k));
  }
  PauseRecord record;
  record.collection_index = ++_collections;
  record.generation = k;
  record.clock = _heap.clock();
  record.survivor_threshold_at_start = _ergonomics.survivor_threshold;
  if (_listener) _listener->collection_started(record.collection_index, k, _heap.clock());

  Generation& gen = _heap.generation(k);
  kernels::LivenessSplit scan = split(gen);
  record.scanned_bytes = scan.live_bytes + scan.dead_bytes;

  std::vector<kernels::SurvivorSample> samples;
  for (ObjectId id : scan.live) {
    HeapObject& obj = _heap.object(id);
    unsigned age = std::min(obj.header.age() + 1, ObjectHeader::max_age);
    obj.header = obj.header.with_age(age);
    if (obj.profiled) samples.push_back({obj.header.alloc_context(), age});
  }
  for (ObjectId id : scan.dead) _heap.object(id).reclaimed = true;

  gen.resident = std::move(scan.live);
  gen.occupancy = scan.live_bytes;
  record.copied_bytes = scan.live_bytes;

  account(samples);
  finish(record);
  return record;
}

}  // namespace rolp

#include "rolp/heap.hpp"

#include <numeric>

namespace rolp {

void HeapConfig::validate() const {
  if (num_generations == 0) throw std::invalid_argument("heap: need at least one old generation");
  if (young_capacity == 0 || gen_capacity == 0 || survivor_capacity == 0) {
    throw std::invalid_argument("heap: capacities must be positive");
  }
  if (survivor_capacity > young_capacity) {
    throw std::invalid_argument("heap: survivor space larger than young generation");
  }
  if (max_tenuring_threshold < 1 || max_tenuring_threshold > ObjectHeader::max_age) {
    throw std::invalid_argument("heap: max tenuring threshold must be in [1, 15]");
  }
  if (!(scan_cost >= 0.0) || !(copy_cost >= 0.0)) {
    throw std::invalid_argument("heap: pause cost coefficients must be non-negative");
  }
}

HeapLayout HeapLayout::n_generational(const HeapConfig& config) {
  HeapLayout layout;
  layout.capacities.push_back(config.young_capacity);
  for (unsigned g = 0; g < config.num_generations; ++g) layout.capacities.push_back(config.gen_capacity);
  return layout;
}

HeapLayout HeapLayout::two_generational(const HeapConfig& config) {
  return HeapLayout{{config.young_capacity, config.gen_capacity * config.num_generations}};
}

Heap::Heap(const HeapConfig& config, HeapLayout layout) : _config(config) {
  _config.validate();
  if (layout.capacities.size() < 2) throw std::invalid_argument("heap: layout needs young and old");
  for (uint64_t cap : layout.capacities) {
    if (cap == 0) throw std::invalid_argument("heap: generation capacity must be positive");
    _gens.push_back(Generation{cap, 0, {}});
  }
}

AllocationOutcome Heap::allocate(unsigned gen, uint64_t size, uint32_t alloc_context,
                                 uint64_t death_tick, bool profiled) {
  if (size == 0) throw std::invalid_argument("heap: zero-sized allocation");
  if (gen > oldest_generation()) throw std::out_of_range("heap: no generation " + std::to_string(gen));
  Generation& target = _gens[gen];
  if (size > target.capacity) {
    throw UnsatisfiableAllocation("heap: object of " + std::to_string(size) +
                                  " bytes exceeds capacity of generation " + std::to_string(gen));
  }
  if (!target.fits(size)) return AllocationOutcome{std::nullopt, gen};

  ObjectId id = _objects.size();
  HeapObject obj;
  obj.id = id;
  obj.size = size;
  obj.death_tick = death_tick;
  // Identity hash is any stable 24-bit value; derive it from the ordinal.
  uint32_t ihash = static_cast<uint32_t>((id * 0x9E3779B97F4A7C15ull) >> 40) &
                   ObjectHeader::max_identity_hash;
  obj.header = ObjectHeader::pack(0b001, 0, ihash, 0).with_context(alloc_context);
  obj.resident_gen = gen;
  obj.profiled = profiled;
  _objects.push_back(obj);

  target.resident.push_back(id);
  target.occupancy += size;
  _clock += size;
  _peak_occupancy = std::max(_peak_occupancy, total_occupancy());
  return AllocationOutcome{id, std::nullopt};
}

void Heap::bias_lock(ObjectId id, uint32_t thread_id) {
  HeapObject& obj = _objects.at(id);
  obj.header = obj.header.with_lock_bits(ObjectHeader::biased_lock_pattern)
                   .with_context(thread_marker(thread_id));
  obj.profiled = false;
}

uint64_t Heap::total_occupancy() const {
  return std::accumulate(_gens.begin(), _gens.end(), uint64_t{0},
                         [](uint64_t acc, const Generation& g) { return acc + g.occupancy; });
}

uint64_t Heap::live_bytes() const {
  uint64_t live = 0;
  for (const Generation& g : _gens) {
    for (ObjectId id : g.resident) {
      if (_objects[id].is_live(_clock)) live += _objects[id].size;
    }
  }
  return live;
}

}  // namespace rolp

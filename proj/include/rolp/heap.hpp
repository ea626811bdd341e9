#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rolp/object_header.hpp"

namespace rolp {

inline constexpr uint64_t KiB = 1024;
inline constexpr uint64_t MiB = 1024 * KiB;

struct HeapConfig {
  unsigned num_generations = 4;  // older generations, young excluded
  uint64_t young_capacity = 32 * MiB;
  uint64_t gen_capacity = 64 * MiB;
  uint64_t survivor_capacity = 4 * MiB;
  unsigned max_tenuring_threshold = ObjectHeader::max_age;
  // Pause model coefficients, milliseconds per byte.
  double scan_cost = 1e-6;
  double copy_cost = 5e-6;

  // Throws std::invalid_argument.
  void validate() const;
};

// Capacities of generation 0 (young) through G.
struct HeapLayout {
  std::vector<uint64_t> capacities;

  // Young plus G older generations of gen_capacity each.
  static HeapLayout n_generational(const HeapConfig& config);
  // Young plus one old generation holding the same total old space.
  static HeapLayout two_generational(const HeapConfig& config);

  unsigned oldest() const { return static_cast<unsigned>(capacities.size()) - 1; }
};

using ObjectId = uint64_t;

struct HeapObject {
  ObjectId id = 0;
  uint64_t size = 0;
  uint64_t death_tick = 0;  // allocation-clock bytes
  ObjectHeader header;
  unsigned resident_gen = 0;
  bool profiled = false;
  bool reclaimed = false;

  bool is_live(uint64_t clock) const { return clock < death_tick; }
};

struct Generation {
  uint64_t capacity = 0;
  uint64_t occupancy = 0;
  std::vector<ObjectId> resident;  // allocation / compaction order

  uint64_t free_bytes() const { return capacity - occupancy; }
  bool fits(uint64_t size) const { return size <= free_bytes(); }
};

// Either the new object, or the generation that must be collected first.
struct AllocationOutcome {
  std::optional<ObjectId> object;
  std::optional<unsigned> collect;

  bool ok() const { return object.has_value(); }
};

class UnsatisfiableAllocation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a collection cannot make room (simulated out-of-memory).
class HeapExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Heap {
 public:
  Heap(const HeapConfig& config, HeapLayout layout);

  const HeapConfig& config() const { return _config; }
  unsigned oldest_generation() const { return static_cast<unsigned>(_gens.size()) - 1; }

  // Places a new object in `gen`, or asks for a collection of `gen`. The
  // allocation clock only moves on success.
  AllocationOutcome allocate(unsigned gen, uint64_t size, uint32_t alloc_context,
                             uint64_t death_tick, bool profiled);

  // Overwrites the context half of the header with a thread marker.
  void bias_lock(ObjectId id, uint32_t thread_id);

  uint64_t clock() const { return _clock; }
  uint64_t total_occupancy() const;
  uint64_t peak_occupancy() const { return _peak_occupancy; }
  uint64_t live_bytes() const;

  const HeapObject& object(ObjectId id) const { return _objects.at(id); }
  HeapObject& object(ObjectId id) { return _objects.at(id); }
  const std::vector<HeapObject>& objects() const { return _objects; }
  uint64_t object_count() const { return _objects.size(); }

  const Generation& generation(unsigned k) const { return _gens.at(k); }
  Generation& generation(unsigned k) { return _gens.at(k); }

  static uint32_t thread_marker(uint32_t thread_id) { return 0x80000000u | thread_id; }

 private:
  HeapConfig _config;
  std::vector<Generation> _gens;
  std::vector<HeapObject> _objects;
  uint64_t _clock = 0;
  uint64_t _peak_occupancy = 0;
};

}  // namespace rolp

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "rolp/context.hpp"

namespace rolp {

// Table key: either a whole allocation site or one full 32-bit context.
class LifetimeKey {
 public:
  static constexpr LifetimeKey site(uint16_t site_id) { return LifetimeKey(site_tag | site_id); }
  static constexpr LifetimeKey context(uint32_t combined) { return LifetimeKey(combined); }

  constexpr bool is_site() const { return (_raw & site_tag) != 0; }
  constexpr uint16_t site_id() const { return static_cast<uint16_t>(_raw & 0xFFFFu); }
  constexpr uint32_t combined() const { return static_cast<uint32_t>(_raw); }
  constexpr uint64_t raw() const { return _raw; }

  friend constexpr auto operator<=>(LifetimeKey, LifetimeKey) = default;

 private:
  static constexpr uint64_t site_tag = uint64_t{1} << 32;
  constexpr explicit LifetimeKey(uint64_t raw) : _raw(raw) {}
  uint64_t _raw;
};

using Counter = uint32_t;
inline constexpr std::size_t counter_width = sizeof(Counter);
inline constexpr std::size_t default_lifetime_slots = 16;

struct LifetimeEntry {
  std::vector<Counter> counts;  // counts[k]: objects seen having survived k collections
  unsigned target_gen = 0;
};

// Private per-GC-worker survivor increments for one collection.
class WorkerTable {
 public:
  explicit WorkerTable(std::size_t slots = default_lifetime_slots) : _slots(slots) {}

  void record(LifetimeKey key, unsigned age);
  void clear() { _counts.clear(); }
  bool empty() const { return _counts.empty(); }
  std::size_t slots() const { return _slots; }
  const std::map<LifetimeKey, std::vector<Counter>>& counts() const { return _counts; }

 private:
  std::size_t _slots;
  std::map<LifetimeKey, std::vector<Counter>> _counts;
};

// Global lifetime distribution table. Sites start aggregated (one entry per
// site id) and may be expanded into one entry per full context.
class LifetimeTable {
 public:
  explicit LifetimeTable(std::size_t slots = default_lifetime_slots);

  std::size_t slots() const { return _slots; }

  // Key under which events for `ctx` are currently accounted.
  LifetimeKey key_for(AllocationContext ctx) const;

  void record_allocation(AllocationContext ctx);
  // Direct survivor update; GC workers go through WorkerTable instead.
  void record_survivor(AllocationContext ctx, unsigned age);

  // Generation new objects from `ctx` should be allocated in.
  unsigned target_generation(AllocationContext ctx) const;

  // No-op if already expanded.
  void expand_site(uint16_t site);
  bool is_expanded(uint16_t site) const { return _expanded.contains(site); }
  std::size_t expanded_site_count() const { return _expanded.size(); }

  void merge(WorkerTable& worker);
  void reset_counters();

  std::map<LifetimeKey, LifetimeEntry>& entries() { return _entries; }
  const std::map<LifetimeKey, LifetimeEntry>& entries() const { return _entries; }
  const LifetimeEntry* find(LifetimeKey key) const;

  std::size_t entry_count() const { return _entries.size(); }
  std::size_t site_entry_count() const;
  std::size_t size_bytes() const;

 private:
  LifetimeEntry& entry_for(LifetimeKey key);

  std::size_t _slots;
  std::map<LifetimeKey, LifetimeEntry> _entries;
  std::map<uint16_t, unsigned> _expanded;  // site -> seed target generation
};

// Elementwise merge; every worker table is cleared afterwards.
void merge_worker_tables(LifetimeTable& global, std::span<WorkerTable> workers);

inline std::size_t clamp_age(unsigned age, std::size_t slots) {
  return age < slots ? age : slots - 1;
}

// Memory needed for the lifetime arrays of `entries` entries.
constexpr uint64_t table_size_bytes(uint64_t entries, uint64_t slots,
                                    uint64_t width = counter_width) {
  return entries * slots * width;
}

// Every 32-bit context materialized.
constexpr uint64_t full_context_worst_case_bytes(uint64_t slots, uint64_t width = counter_width) {
  return table_size_bytes(uint64_t{1} << 32, slots, width);
}

// Every 16-bit site id materialized.
constexpr uint64_t full_aggregate_bytes(uint64_t slots, uint64_t width = counter_width) {
  return table_size_bytes(uint64_t{1} << 16, slots, width);
}

}  // namespace rolp

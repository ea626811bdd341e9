#include "rolp/lifetime_table.hpp"

#include <algorithm>
#include <stdexcept>

namespace rolp {

void WorkerTable::record(LifetimeKey key, unsigned age) {
  auto [it, inserted] = _counts.try_emplace(key);
  if (inserted) it->second.assign(_slots, 0);
  it->second[clamp_age(age, _slots)] += 1;
}

LifetimeTable::LifetimeTable(std::size_t slots) : _slots(slots) {
  if (slots < 2) throw std::invalid_argument("lifetime table needs at least 2 slots");
}

LifetimeKey LifetimeTable::key_for(AllocationContext ctx) const {
  return is_expanded(ctx.site) ? LifetimeKey::context(ctx.combined()) : LifetimeKey::site(ctx.site);
}

LifetimeEntry& LifetimeTable::entry_for(LifetimeKey key) {
  auto [it, inserted] = _entries.try_emplace(key);
  if (inserted) {
    it->second.counts.assign(_slots, 0);
    if (!key.is_site()) {
      auto seed = _expanded.find(key.site_id());
      it->second.target_gen = seed == _expanded.end() ? 0 : seed->second;
    }
  }
  return it->second;
}

void LifetimeTable::record_allocation(AllocationContext ctx) { entry_for(key_for(ctx)).counts[0] += 1; }

void LifetimeTable::record_survivor(AllocationContext ctx, unsigned age) {
  entry_for(key_for(ctx)).counts[clamp_age(age, _slots)] += 1;
}

unsigned LifetimeTable::target_generation(AllocationContext ctx) const {
  LifetimeKey key = key_for(ctx);
  if (const LifetimeEntry* e = find(key)) return e->target_gen;
  if (!key.is_site()) return _expanded.at(ctx.site);
  return 0;
}

void LifetimeTable::expand_site(uint16_t site) {
  if (is_expanded(site)) return;
  const LifetimeEntry* aggregate = find(LifetimeKey::site(site));
  _expanded.emplace(site, aggregate ? aggregate->target_gen : 0u);
}

void LifetimeTable::merge(WorkerTable& worker) {
  if (worker.slots() != _slots) throw std::invalid_argument("worker table slot count mismatch");
  for (const auto& [key, counts] : worker.counts()) {
    LifetimeEntry& e = entry_for(key);
    for (std::size_t k = 0; k < _slots; ++k) e.counts[k] += counts[k];
  }
  worker.clear();
}

void LifetimeTable::reset_counters() {
  for (auto& [key, e] : _entries) std::fill(e.counts.begin(), e.counts.end(), Counter{0});
}

const LifetimeEntry* LifetimeTable::find(LifetimeKey key) const {
  auto it = _entries.find(key);
  return it == _entries.end() ? nullptr : &it->second;
}

std::size_t LifetimeTable::site_entry_count() const {
  return static_cast<std::size_t>(
      std::count_if(_entries.begin(), _entries.end(), [](const auto& kv) { return kv.first.is_site(); }));
}

std::size_t LifetimeTable::size_bytes() const { return table_size_bytes(_entries.size(), _slots); }

void merge_worker_tables(LifetimeTable& global, std::span<WorkerTable> workers) {
  for (WorkerTable& w : workers) global.merge(w);
}

}  // namespace rolp

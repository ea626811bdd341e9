#include <doctest.h>

#include <random>

#include "rolp/gc_engine.hpp"

using namespace rolp;

namespace {

HeapConfig small_heap() {
  HeapConfig c;
  c.num_generations = 2;
  c.young_capacity = 1000;
  c.gen_capacity = 2000;
  c.survivor_capacity = 500;
  return c;
}

ObjectId must_allocate(Heap& heap, unsigned gen, uint64_t size, uint64_t death, uint32_t ctx = 0, bool profiled = false) {
  auto out = heap.allocate(gen, size, ctx, death, profiled);
  REQUIRE(out.ok());
  return *out.object;
}

}  // namespace

TEST_CASE("pause model") {
  HeapConfig c;
  CHECK(modeled_pause_ms(c, 1'000'000, 0) == doctest::Approx(1.0));
  CHECK(modeled_pause_ms(c, 0, 1'000'000) == doctest::Approx(5.0));
  CHECK(modeled_pause_ms(c, 0, 0) == 0.0);
}

TEST_CASE("young collection of dead objects copies nothing") {
  HeapConfig c = small_heap();
  Heap heap(c, HeapLayout::n_generational(c));
  LifetimeTable table(16);
  Collector gc(heap, &table);
  for (int i = 0; i < 5; ++i) must_allocate(heap, 0, 100, heap.clock() + 1, 0x10001, true);
  auto records = gc.collect_young();
  REQUIRE(records.size() == 1);
  CHECK(records[0].scanned_bytes == 500);
  CHECK(records[0].copied_bytes == 0);
  CHECK(records[0].promoted_bytes == 0);
  CHECK(heap.generation(0).occupancy == 0);
  CHECK(table.entry_count() == 0);
  CHECK(gc.ergonomics().survivor_threshold == 15);
}

TEST_CASE("one survivor is aged, kept young and counted at age 1") {
  HeapConfig c = small_heap();
  Heap heap(c, HeapLayout::n_generational(c));
  LifetimeTable table(16);
  Collector gc(heap, &table);
  AllocationContext ctx{1, 0};
  ObjectId id = must_allocate(heap, 0, 100, 1'000'000, ctx.combined(), true);
  auto r = gc.collect_young().at(0);
  CHECK(r.copied_bytes == 100);
  CHECK(r.promoted_bytes == 0);
  CHECK(heap.object(id).header.age() == 1);
  CHECK(heap.object(id).resident_gen == 0);
  CHECK(table.find(LifetimeKey::site(1))->counts[1] == 1);
}

TEST_CASE("survivor reaching the threshold is promoted on schedule") {
  HeapConfig c = small_heap();
  c.max_tenuring_threshold = 6;
  Heap heap(c, HeapLayout::n_generational(c));
  Collector gc(heap, nullptr);
  ObjectId id = must_allocate(heap, 0, 40, 1'000'000);
  // age after collection k is k; promoted once age >= 6
  for (unsigned k = 1; k <= 6; ++k) {
    auto r = gc.collect_young().at(0);
    CHECK(r.survivor_threshold_at_start == 6);
    if (k < 6) {
      CHECK(r.copied_bytes == 40);
      CHECK(r.promoted_bytes == 0);
      CHECK(heap.object(id).resident_gen == 0);
    } else {
      CHECK(r.promoted_bytes == 40);
      CHECK(r.copied_bytes == 40);
      CHECK(heap.object(id).resident_gen == 1);
    }
    CHECK(heap.object(id).header.age() == k);
  }
}

TEST_CASE("survivor space overflow promotes early") {
  HeapConfig c = small_heap();
  Heap heap(c, HeapLayout::n_generational(c));
  Collector gc(heap, nullptr);
  for (int i = 0; i < 8; ++i) must_allocate(heap, 0, 100, 1'000'000);
  auto r = gc.collect_young().at(0);
  CHECK(r.copied_bytes == 800);
  CHECK(r.promoted_bytes == 300);
  CHECK(heap.generation(0).occupancy == 500);
  // 800 bytes at age 1 exceed half the survivor space
  CHECK(gc.ergonomics().survivor_threshold == 1);
}

TEST_CASE("full promotion target cascades a separate gen-1 collection") {
  HeapConfig c = small_heap();
  Heap heap(c, HeapLayout::n_generational(c));
  Collector gc(heap, nullptr);
  for (int i = 0; i < 19; ++i) must_allocate(heap, 1, 100, heap.clock() + 1);  // dies right away
  for (int i = 0; i < 8; ++i) must_allocate(heap, 0, 100, 1'000'000);
  auto records = gc.collect_young();
  REQUIRE(records.size() == 2);
  CHECK(records[0].generation == 0);
  CHECK(records[0].collection_index == 1);
  CHECK(records[1].generation == 1);
  CHECK(records[1].collection_index == 2);
  CHECK(records[1].copied_bytes == 0);
  CHECK(records[1].scanned_bytes == 1900);
  CHECK(heap.generation(1).occupancy == 300);
}

TEST_CASE("old collection compacts in place") {
  HeapConfig c = small_heap();
  Heap heap(c, HeapLayout::n_generational(c));
  LifetimeTable table(16);
  Collector gc(heap, &table);
  for (int i = 0; i < 10; ++i) must_allocate(heap, 2, 100, 1'000'000, AllocationContext{4, 0}.combined(), true);
  for (int i = 0; i < 5; ++i) must_allocate(heap, 2, 100, heap.clock() + 1);
  auto r = gc.collect_generation(2);
  CHECK(r.kind() == "gen-2");
  CHECK(r.copied_bytes == 1000);
  CHECK(r.compacted_bytes() == 1000);
  CHECK(r.scanned_bytes == 1500);
  CHECK(heap.generation(2).occupancy == 1000);
  CHECK(table.find(LifetimeKey::site(4))->counts[1] == 10);
  for (ObjectId id : heap.generation(2).resident) CHECK(heap.object(id).resident_gen == 2);
}

TEST_CASE("ergonomics picks the age where the cumulative survivor share crosses") {
  ErgonomicsState s;
  AgeHistogram h{};
  CHECK(update_ergonomics(s, h, 1000) == 15);
  h[1] = 600;
  CHECK(update_ergonomics(s, h, 1000) == 1);
  h = {};
  h[1] = 100;
  h[2] = 100;
  h[3] = 100;
  h[4] = 250;  // cumulative 550 > 500
  CHECK(update_ergonomics(s, h, 1000) == 4);
  h[4] = 200;  // cumulative 500, not above
  CHECK(update_ergonomics(s, h, 1000) == 15);
}

TEST_CASE("collections never destroy live objects and ages track survivals") {
  HeapConfig c = small_heap();
  c.young_capacity = 20000;
  c.gen_capacity = 200000;
  c.survivor_capacity = 4000;
  Heap heap(c, HeapLayout::n_generational(c));
  Collector gc(heap, nullptr);
  std::mt19937_64 rng(21);
  std::vector<uint64_t> survivals;
  for (int step = 0; step < 20000; ++step) {
    uint64_t size = 16 + rng() % 200;
    uint64_t life = rng() % 4 == 0 ? 30000 + rng() % 60000 : rng() % 3000;
    unsigned gen = rng() % 10 == 0 ? 1 + rng() % 2 : 0;
    auto out = heap.allocate(gen, size, 0, heap.clock() + life, false);
    if (out.ok()) {
      survivals.push_back(0);
      continue;
    }
    uint64_t live_before = heap.live_bytes();
    std::vector<PauseRecord> records;
    std::vector<std::pair<ObjectId, unsigned>> in_scope;
    for (const HeapObject& o : heap.objects()) {
      if (!o.reclaimed && o.is_live(heap.clock())) in_scope.push_back({o.id, o.resident_gen});
    }
    if (*out.collect == 0) {
      records = gc.collect_young();
    } else {
      records.push_back(gc.collect_generation(*out.collect));
    }
    for (auto [id, g] : in_scope) {
      bool young_hit = g == 0 && *out.collect == 0;
      bool old_hit = false;
      for (const PauseRecord& r : records) old_hit |= r.generation != 0 && r.generation == g;
      if (young_hit || old_hit) survivals[id] += 1;
    }
    CHECK(heap.live_bytes() == live_before);
    for (const HeapObject& o : heap.objects()) {
      if (!o.reclaimed && o.is_live(heap.clock())) {
        REQUIRE(o.header.age() == std::min<uint64_t>(survivals[o.id], 15));
      }
    }
    --step;
  }
}

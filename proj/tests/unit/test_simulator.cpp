#include <doctest.h>

#include "../support/lifetime_oracle.hpp"
#include "rolp/simulator.hpp"
#include "rolp/synthetic.hpp"

using namespace rolp;

namespace {

Trace generated(WorkloadKind kind, uint64_t seed, uint64_t events, uint64_t young = 32 * MiB) {
  SyntheticSpec s = SyntheticSpec::defaults(kind);
  s.seed = seed;
  s.event_count = events;
  s.young_turnover = young;
  return generate_synthetic(s).trace;
}

SimConfig rolp_config() {
  SimConfig c;
  c.mode = Mode::rolp;
  c.check_invariants = true;
  return c;
}

}  // namespace

TEST_CASE("empty trace runs with zero collections") {
  SimResult r = replay(Trace{}, rolp_config());
  CHECK(r.metrics.collections == 0);
  CHECK(r.pauses.empty());
}

TEST_CASE("table counters match the per-object oracle in every window") {
  for (WorkloadKind kind : {WorkloadKind::generational, WorkloadKind::cache, WorkloadKind::mixed}) {
    Trace t = generated(kind, 3, 60000, 8 * MiB);
    SimConfig c = rolp_config();
    c.heap.young_capacity = 8 * MiB;
    c.heap.gen_capacity = 16 * MiB;
    c.heap.survivor_capacity = 2 * MiB;
    c.policy.inc_gen_freq = 2;
    testing::LifetimeOracle oracle(c.policy, c.heap.num_generations);
    SimResult r = replay(t, c, &oracle);
    oracle.finish(*r.table);
    CAPTURE(to_string(kind));
    CHECK(oracle.windows > 3);
    CHECK(oracle.mismatches.empty());
    if (!oracle.mismatches.empty()) MESSAGE(oracle.mismatches.front());
  }
}

TEST_CASE("identical inputs give byte-identical metrics") {
  Trace t = generated(WorkloadKind::mixed, 8, 40000);
  for (Mode m : {Mode::baseline, Mode::rolp, Mode::oracle}) {
    SimConfig c;
    c.mode = m;
    CHECK(to_json_text(replay(t, c).metrics) == to_json_text(replay(t, c).metrics));
  }
}

TEST_CASE("serial and parallel kernels give the same run") {
  Trace t = generated(WorkloadKind::cache, 2, 60000);
  SimConfig a = rolp_config();
  a.heap.young_capacity = 128 * MiB;  // large young generation so the parallel path engages
  a.heap.gen_capacity = 256 * MiB;
  a.heap.survivor_capacity = 64 * MiB;
  SimConfig b = a;
  b.collector.parallel_kernels = false;
  CHECK(to_json_text(replay(t, a).metrics) == to_json_text(replay(t, b).metrics));
}

TEST_CASE("trace referencing an undeclared site is rejected") {
  Trace t;
  t.program.add_method(1, "a", "a.f()");
  t.events.push_back(AllocEvent{0, 5, 16, 100});
  CHECK_THROWS_AS(replay(t, rolp_config()), TraceError);
}

TEST_CASE("invalid thresholds are rejected before replay") {
  SimConfig c;
  c.policy.inc_gen_thres = 0.3;
  c.policy.expand_ctx = 0.4;
  CHECK_THROWS_AS(replay(Trace{}, c), std::invalid_argument);
}

TEST_CASE("baseline keeps the total heap size and profiles nothing") {
  Trace t = generated(WorkloadKind::cache, 1, 30000);
  SimConfig c;
  c.mode = Mode::baseline;
  SimResult r = replay(t, c);
  CHECK_FALSE(r.table.has_value());
  CHECK(r.metrics.profiled_sites == 0);
  CHECK(r.policy_run_indices.empty());
  CHECK(HeapLayout::two_generational(c.heap).capacities ==
        std::vector<uint64_t>{c.heap.young_capacity, c.heap.gen_capacity * c.heap.num_generations});
}

TEST_CASE("oracle lifetime classes") {
  const uint64_t y = 100;
  CHECK(lifetime_class_generation(0, y, 4) == 0);
  CHECK(lifetime_class_generation(99, y, 4) == 0);
  CHECK(lifetime_class_generation(100, y, 4) == 1);
  CHECK(lifetime_class_generation(199, y, 4) == 1);
  CHECK(lifetime_class_generation(200, y, 4) == 2);
  CHECK(lifetime_class_generation(400, y, 4) == 3);
  CHECK(lifetime_class_generation(800, y, 4) == 4);
  CHECK(lifetime_class_generation(100000, y, 4) == 4);
}

TEST_CASE("cold methods leave summaries alone") {
  // Two call paths to one allocating method; the wrapper on one path is
  // called only a few times, below the hot threshold.
  Trace t;
  ProgramModel& p = t.program;
  p.add_method(1, "a", "a.Root.run()");
  p.add_method(2, "a", "a.Hot.call()");
  p.add_method(3, "a", "a.Cold.call()");
  p.add_method(4, "a", "a.Alloc.make()");
  p.add_call(1, 2);
  p.add_call(1, 3);
  p.add_call(2, 4);
  p.add_call(3, 4);
  p.add_site(1, 4, 7);
  t.events.push_back(CallEvent{0, 1});
  uint64_t clock = 0;
  for (int i = 0; i < 300; ++i) {
    MethodId via = i % 100 == 0 ? 3 : 2;
    t.events.push_back(CallEvent{0, via});
    t.events.push_back(CallEvent{0, 4});
    t.events.push_back(AllocEvent{0, 1, 16, clock + 16});
    clock += 16;
    t.events.push_back(ReturnEvent{0, 4});
    t.events.push_back(ReturnEvent{0, via});
  }
  t.events.push_back(ReturnEvent{0, 1});

  struct Summaries : SimObserver {
    std::set<uint16_t> seen;
    void object_allocated(const HeapObject& o, AllocationContext c, SiteSource, ThreadId) override {
      if (o.profiled) seen.insert(c.summary);
    }
  } obs;
  SimConfig c = rolp_config();
  c.analyzer.hot_threshold = 50;
  replay(t, c, &obs);
  // The root is entered once and never gets hot; the cold wrapper adds nothing.
  uint16_t hot = p.method_hash(2), alloc = p.method_hash(4);
  CHECK(obs.seen == std::set<uint16_t>{alloc, static_cast<uint16_t>(hot + alloc)});
}

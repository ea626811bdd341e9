#include "rolp/simulator.hpp"

#include <bit>
#include <chrono>
#include <map>
#include <set>
#include <stdexcept>

#include "rolp/collision.hpp"

namespace rolp {

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::baseline: return "baseline";
    case Mode::rolp: return "rolp";
    case Mode::oracle: return "oracle";
  }
  return "?";
}

Mode parse_mode(const std::string& text) {
  if (text == "baseline") return Mode::baseline;
  if (text == "rolp") return Mode::rolp;
  if (text == "oracle") return Mode::oracle;
  throw std::invalid_argument("unknown mode '" + text + "' (expected baseline, rolp or oracle)");
}

void SimConfig::validate() const {
  heap.validate();
  policy.validate();
  if (collector.workers == 0) throw std::invalid_argument("need at least one GC worker");
  if (!(collector.target_survivor_fraction > 0.0 && collector.target_survivor_fraction <= 1.0)) {
    throw std::invalid_argument("target survivor fraction must be in (0, 1]");
  }
}

nlohmann::json config_to_json(const SimConfig& c) {
  return {
      {"mode", to_string(c.mode)},
      {"heap",
       {{"num_generations", c.heap.num_generations},
        {"young_capacity", c.heap.young_capacity},
        {"gen_capacity", c.heap.gen_capacity},
        {"survivor_capacity", c.heap.survivor_capacity},
        {"max_tenuring_threshold", c.heap.max_tenuring_threshold},
        {"scan_cost_ms_per_byte", c.heap.scan_cost},
        {"copy_cost_ms_per_byte", c.heap.copy_cost}}},
      {"policy",
       {{"n", c.policy.slots},
        {"ng2c_inc_gen_freq", c.policy.inc_gen_freq},
        {"inc_gen_thres", c.policy.inc_gen_thres},
        {"expand_ctx", c.policy.expand_ctx},
        {"allow_degenerate", c.policy.allow_degenerate}}},
      {"analyzer",
       {{"max_alloc_frame", c.analyzer.max_alloc_frame},
        {"hot_threshold", c.analyzer.hot_threshold},
        {"packages", c.analyzer.packages}}},
      {"gc",
       {{"workers", c.collector.workers},
        {"target_survivor_fraction", c.collector.target_survivor_fraction}}},
      {"seed", c.seed},
  };
}

unsigned lifetime_class_generation(uint64_t lifetime_bytes, uint64_t young_capacity, unsigned num_generations) {
  if (lifetime_bytes < young_capacity) return 0;
  const uint64_t turnovers = lifetime_bytes / young_capacity;  // >= 1
  const unsigned octave = static_cast<unsigned>(std::bit_width(turnovers));  // 1 for [1,2), 2 for [2,4) ...
  return std::min(octave, num_generations);
}

namespace {

struct Frame {
  MethodId method;
  uint16_t contribution;
  bool profiled;
};

struct ThreadState {
  ThreadContextState context;
  std::vector<Frame> stack;
  std::vector<uint32_t> profiled_methods;  // true context, for collision accounting
};

class Engine {
 public:
  Engine(const Trace& trace, const SimConfig& config, SimObserver* observer)
      : _trace(trace),
        _config(config),
        _observer(observer),
        _heap(config.heap, config.mode == Mode::baseline ? HeapLayout::two_generational(config.heap)
                                                         : HeapLayout::n_generational(config.heap)) {
    _config.policy.max_generation = config.heap.num_generations;
    if (profiling()) _table.emplace(_config.policy.slots);
    _collector.emplace(_heap, _table ? &*_table : nullptr, _config.collector, observer);
  }

  SimResult run() {
    auto start = std::chrono::steady_clock::now();
    if (profiling()) {
      auto sa_start = std::chrono::steady_clock::now();
      _plan = select_instrumented(_trace.program, _config.analyzer.max_alloc_frame, _config.analyzer.packages,
                                  _config.analyzer.hot_threshold);
      _metrics.static_analysis_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - sa_start).count();
      _metrics.suggested_sites = _plan.profiled_sites.size();
      _metrics.suggested_methods = _plan.profiled_methods.size();
    }

    for (const TraceEvent& ev : _trace.events) {
      std::visit([this](const auto& e) { handle(e); }, ev);
    }

    SimResult result;
    finish_metrics(result);
    result.metrics.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.metrics.events_per_second =
        result.metrics.wall_seconds > 0 ? double(_trace.events.size()) / result.metrics.wall_seconds : 0.0;
    return result;
  }

 private:
  bool profiling() const { return _config.mode == Mode::rolp; }

  ThreadState& thread(ThreadId id) {
    auto [it, inserted] = _threads.try_emplace(id, ThreadState{ThreadContextState(id), {}, {}});
    return it->second;
  }

  void handle(const CallEvent& e) {
    ThreadState& t = thread(e.thread);
    uint64_t count = ++_invocations[e.method];
    bool profiled = profiling() && _plan.profiles_method(e.method) && hot_gate(count, _plan.hot_threshold);
    uint16_t hash = profiled ? _trace.program.method_hash(e.method) : 0;
    if (profiled) {
      t.context.enter_method(hash);
      t.profiled_methods.push_back(e.method);
      _hot_methods.insert(e.method);
    }
    t.stack.push_back(Frame{e.method, hash, profiled});
  }

  void handle(const ReturnEvent& e) {
    ThreadState& t = thread(e.thread);
    if (t.stack.empty() || t.stack.back().method != e.method) {
      throw TraceError(0, "unbalanced return on thread " + std::to_string(e.thread) + " from method " +
                              std::to_string(e.method));
    }
    Frame f = t.stack.back();
    t.stack.pop_back();
    if (f.profiled) {
      t.context.exit_method(f.contribution);
      t.profiled_methods.pop_back();
    }
  }

  void handle(const AllocEvent& e) {
    const SiteDecl* decl = _trace.program.site(e.site);
    if (!decl) throw TraceError(0, "allocation at site " + std::to_string(e.site) + " absent from program model");
    if (e.death_tick < _heap.clock()) throw TraceError(0, "death tick in the past for site " + std::to_string(e.site));
    ThreadState& t = thread(e.thread);

    bool profiled = false;
    AllocationContext ctx{};
    if (profiling() && _plan.profiles_site(e.site) && hot_gate(_invocations[decl->method], _plan.hot_threshold)) {
      profiled = true;
      ctx = t.context.current_context(_trace.program.site_id(e.site));
      if (_config.check_invariants && t.context.summary() != t.context.recomputed_summary()) {
        throw std::logic_error("context summary diverged from its active frames on thread " +
                               std::to_string(e.thread));
      }
      _hot_sites.insert(e.site);
      _contexts.record(ctx.site, ctx.summary, t.profiled_methods);
    }

    std::set<unsigned> collected;
    while (true) {
      unsigned gen = target_generation(e, profiled, ctx);
      AllocationOutcome out = _heap.allocate(gen, e.size, profiled ? ctx.combined() : 0, e.death_tick, profiled);
      if (out.ok()) {
        if (profiled) _table->record_allocation(ctx);
        ++_allocations;
        _allocated_bytes += e.size;
        if (_observer) _observer->object_allocated(_heap.object(*out.object), ctx, e.site, e.thread);
        break;
      }
      if (!collected.insert(*out.collect).second) {
        throw HeapExhausted("heap: generation " + std::to_string(*out.collect) + " still full after collection (" +
                            std::to_string(e.size) + " byte allocation)");
      }
      collect(*out.collect);
    }
    track_table();
  }

  void handle(const LockEvent& e) {
    if (e.object >= _heap.object_count()) {
      throw TraceError(0, "lock on unallocated object " + std::to_string(e.object));
    }
    const HeapObject& obj = _heap.object(e.object);
    if (!obj.is_live(_heap.clock()) || obj.reclaimed) {
      throw TraceError(0, "lock on dead object " + std::to_string(e.object));
    }
    _heap.bias_lock(e.object, e.thread);
    ++_locked;
    if (_observer) _observer->object_locked(e.object);
  }

  unsigned target_generation(const AllocEvent& e, bool profiled, AllocationContext ctx) const {
    switch (_config.mode) {
      case Mode::baseline: return 0;
      case Mode::rolp: return profiled ? _table->target_generation(ctx) : 0;
      case Mode::oracle:
        return lifetime_class_generation(e.death_tick - _heap.clock(), _config.heap.young_capacity,
                                         _config.heap.num_generations);
    }
    return 0;
  }

  void collect(unsigned gen) {
    std::vector<PauseRecord> records;
    if (gen == 0) {
      records = _collector->collect_young();
    } else {
      records.push_back(_collector->collect_generation(gen));
    }
    for (const PauseRecord& r : records) _pauses.push_back(r);
    if (!profiling()) return;
    // The pauses are closed; the policy runs between them and the mutator.
    for (const PauseRecord& r : records) {
      if (!policy_due(r.collection_index, _config.policy.inc_gen_freq)) continue;
      unsigned threshold = _collector->ergonomics().survivor_threshold;
      if (_observer) _observer->policy_started(r.collection_index, *_table, threshold);
      PolicySummary s = update_target_generations(*_table, threshold, _config.policy);
      _increments += s.increments;
      _policy_runs.push_back(r.collection_index);
      if (_observer) _observer->policy_finished(r.collection_index, *_table, s);
    }
  }

  void track_table() {
    if (!_table) return;
    _table_entries_peak = std::max<uint64_t>(_table_entries_peak, _table->entry_count());
  }

  void finish_metrics(SimResult& result) {
    RunMetrics& m = _metrics;
    m.mode = to_string(_config.mode);
    m.trace_fingerprint = trace_fingerprint(_trace);
    m.config = config_to_json(_config);
    m.events = _trace.events.size();
    m.allocations = _allocations;
    m.allocated_bytes = _allocated_bytes;
    m.locked_objects = _locked;
    summarize_pauses(m, _pauses);
    m.peak_heap_occupancy = _heap.peak_occupancy();
    if (_table) {
      track_table();
      m.profiled_sites = _hot_sites.size();
      m.profiled_methods = _hot_methods.size();
      CollisionStats cs = collision_stats(_contexts);
      m.collision_sites = cs.sites;
      m.sequence_collision_sites = cs.sequence_collision_sites;
      m.multiset_collision_sites = cs.multiset_collision_sites;
      m.sequence_collision_rate = cs.sequence_rate();
      m.multiset_collision_rate = cs.multiset_rate();
      m.table_entries_peak = _table_entries_peak;
      m.table_size_bytes_peak = table_size_bytes(_table_entries_peak, _table->slots());
      m.contexts_per_generation.assign(_config.heap.num_generations + 1, 0);
      for (const auto& [key, entry] : _table->entries()) m.contexts_per_generation[entry.target_gen] += 1;
      m.expanded_sites = _table->expanded_site_count();
      m.policy_runs = _policy_runs.size();
      m.target_gen_increments = _increments;
    }
    result.metrics = m;
    result.pauses = std::move(_pauses);
    result.table = std::move(_table);
    result.policy_run_indices = std::move(_policy_runs);
  }

  const Trace& _trace;
  SimConfig _config;
  SimObserver* _observer;
  Heap _heap;
  std::optional<LifetimeTable> _table;
  std::optional<Collector> _collector;
  InstrumentationPlan _plan;
  RunMetrics _metrics;

  std::map<ThreadId, ThreadState> _threads;
  std::map<MethodId, uint64_t> _invocations;
  std::set<MethodId> _hot_methods;
  std::set<SiteSource> _hot_sites;
  ContextOracle _contexts;
  std::vector<PauseRecord> _pauses;
  std::vector<uint64_t> _policy_runs;
  uint64_t _allocations = 0;
  uint64_t _allocated_bytes = 0;
  uint64_t _locked = 0;
  uint64_t _increments = 0;
  uint64_t _table_entries_peak = 0;
};

}  // namespace

SimResult replay(const Trace& trace, const SimConfig& config, SimObserver* observer) {
  config.validate();
  Engine engine(trace, config, observer);
  return engine.run();
}

}  // namespace rolp

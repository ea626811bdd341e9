#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rolp/context.hpp"
#include "rolp/gc_engine.hpp"
#include "rolp/heap.hpp"
#include "rolp/lifetime_table.hpp"
#include "rolp/metrics.hpp"
#include "rolp/policy.hpp"
#include "rolp/static_analyzer.hpp"
#include "rolp/trace.hpp"

namespace rolp {

// baseline: no profiling, everything allocated young, one old generation.
// rolp:     online profiling and dynamic pretenuring over G old generations.
// oracle:   pretenuring from each object's true lifetime, G old generations.
enum class Mode { baseline, rolp, oracle };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);  // throws std::invalid_argument

struct AnalyzerConfig {
  unsigned max_alloc_frame = 5;
  uint64_t hot_threshold = 100;
  std::vector<std::string> packages;  // empty: all
};

struct SimConfig {
  Mode mode = Mode::rolp;
  HeapConfig heap;
  PolicyConfig policy;
  AnalyzerConfig analyzer;
  CollectorOptions collector;
  uint64_t seed = 0;
  // Re-derive every context summary from its frames at each allocation.
  bool check_invariants = false;

  // Throws std::invalid_argument (includes the EXPAND_CTX/INC_GEN_THRES ordering).
  void validate() const;
};

nlohmann::json config_to_json(const SimConfig& config);

// Generation an object with the given lifetime belongs to under perfect
// knowledge: young if it dies within one young-generation turnover,
// otherwise one generation per doubling of lifetime, capped at G.
unsigned lifetime_class_generation(uint64_t lifetime_bytes, uint64_t young_capacity, unsigned num_generations);

// Hooks for verification code; every callback defaults to a no-op.
class SimObserver : public GcListener {
 public:
  virtual void object_allocated(const HeapObject& /*obj*/, AllocationContext /*ctx*/, SiteSource /*site*/,
                                ThreadId /*thread*/) {}
  virtual void object_locked(ObjectId /*id*/) {}
  // Called with the table as the policy is about to read (and reset) it.
  virtual void policy_started(uint64_t /*collection_index*/, const LifetimeTable& /*table*/,
                              unsigned /*survivor_threshold*/) {}
  virtual void policy_finished(uint64_t /*collection_index*/, const LifetimeTable& /*table*/,
                               const PolicySummary& /*summary*/) {}
};

struct SimResult {
  RunMetrics metrics;
  std::vector<PauseRecord> pauses;
  std::optional<LifetimeTable> table;  // rolp mode only
  std::vector<uint64_t> policy_run_indices;
};

SimResult replay(const Trace& trace, const SimConfig& config, SimObserver* observer = nullptr);

}  // namespace rolp

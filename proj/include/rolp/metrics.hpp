#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rolp/gc_engine.hpp"

namespace rolp {

inline constexpr int metrics_schema_version = 1;

// Nearest-rank percentile: the ceil(p/100 * n)-th smallest value. Empty
// input yields 0.
double nearest_rank_percentile(std::span<const double> sorted, double percentile);

struct PausePercentiles {
  double p50 = 0, p90 = 0, p99 = 0, p99_9 = 0, max = 0;
};

PausePercentiles pause_percentiles(std::span<const PauseRecord> pauses);

struct HistogramBucket {
  double lo_ms = 0;
  double hi_ms = std::numeric_limits<double>::infinity();  // exclusive
  uint64_t count = 0;
};

// Fixed doubling buckets: [0,1) [1,2) [2,4) ... [512,1024) [1024,inf) ms.
std::vector<HistogramBucket> pause_histogram(std::span<const PauseRecord> pauses);

struct RunMetrics {
  std::string mode;
  uint64_t trace_fingerprint = 0;
  nlohmann::json config;  // full echo of the run configuration

  uint64_t events = 0;
  uint64_t allocations = 0;
  uint64_t allocated_bytes = 0;
  uint64_t locked_objects = 0;

  uint64_t collections = 0;
  uint64_t young_collections = 0;
  uint64_t old_collections = 0;
  PausePercentiles pauses;
  double pause_mean_ms = 0;
  double pause_total_ms = 0;
  std::vector<HistogramBucket> histogram;

  uint64_t scanned_bytes = 0;
  uint64_t copied_bytes = 0;
  uint64_t promoted_bytes = 0;
  uint64_t compacted_bytes = 0;
  uint64_t peak_heap_occupancy = 0;

  // Profiling summary (zero outside rolp mode).
  uint64_t suggested_sites = 0;     // AS
  uint64_t suggested_methods = 0;   // MC
  uint64_t profiled_sites = 0;      // PAS: planned sites that became hot
  uint64_t profiled_methods = 0;    // PMC: planned methods that became hot
  uint64_t collision_sites = 0;
  uint64_t sequence_collision_sites = 0;
  uint64_t multiset_collision_sites = 0;
  double sequence_collision_rate = 0;
  double multiset_collision_rate = 0;
  uint64_t table_entries_peak = 0;
  uint64_t table_size_bytes_peak = 0;
  std::vector<uint64_t> contexts_per_generation;  // index = target generation
  uint64_t expanded_sites = 0;
  uint64_t policy_runs = 0;
  uint64_t target_gen_increments = 0;

  // Wall clock; excluded from JSON unless asked for.
  double wall_seconds = 0;
  double events_per_second = 0;
  double static_analysis_seconds = 0;

  uint64_t promoted_plus_compacted() const { return promoted_bytes + compacted_bytes; }
};

// Fills the pause-derived fields from the record list.
void summarize_pauses(RunMetrics& metrics, std::span<const PauseRecord> pauses);

nlohmann::json to_json(const RunMetrics& metrics, bool include_timing = false);
// Canonical JSON text (2-space indent, trailing newline).
std::string to_json_text(const RunMetrics& metrics, bool include_timing = false);
void write_text_report(std::ostream& out, const RunMetrics& metrics);
// One row per pause, for plotting duration distributions.
void write_pause_csv(std::ostream& out, std::span<const PauseRecord> pauses);

struct MetricDelta {
  std::string metric;  // dotted JSON path
  double a = 0;
  double b = 0;
  double delta = 0;                                                // b - a
  double delta_pct = std::numeric_limits<double>::quiet_NaN();     // relative to a
};

struct CompareReport {
  bool same_trace = true;
  std::vector<MetricDelta> rows;  // sorted by metric name
};

// Every numeric leaf present in both documents.
CompareReport compare(const nlohmann::json& a, const nlohmann::json& b);

// Columns: metric,a,b,delta,delta_pct
void write_compare_csv(std::ostream& out, const CompareReport& report);

}  // namespace rolp

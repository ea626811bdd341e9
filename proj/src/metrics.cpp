#include "rolp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <map>
#include <ostream>

namespace rolp {

double nearest_rank_percentile(std::span<const double> sorted, double percentile) {
  if (sorted.empty()) return 0.0;
  const double n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(percentile / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

namespace {

std::vector<double> sorted_durations(std::span<const PauseRecord> pauses) {
  std::vector<double> ms;
  ms.reserve(pauses.size());
  for (const PauseRecord& p : pauses) ms.push_back(p.modeled_ms);
  std::sort(ms.begin(), ms.end());
  return ms;
}

}  // namespace

PausePercentiles pause_percentiles(std::span<const PauseRecord> pauses) {
  std::vector<double> ms = sorted_durations(pauses);
  PausePercentiles p;
  p.p50 = nearest_rank_percentile(ms, 50);
  p.p90 = nearest_rank_percentile(ms, 90);
  p.p99 = nearest_rank_percentile(ms, 99);
  p.p99_9 = nearest_rank_percentile(ms, 99.9);
  p.max = ms.empty() ? 0.0 : ms.back();
  return p;
}

std::vector<HistogramBucket> pause_histogram(std::span<const PauseRecord> pauses) {
  std::vector<HistogramBucket> buckets;
  buckets.push_back({0, 1, 0});
  for (double lo = 1; lo < 1024; lo *= 2) buckets.push_back({lo, lo * 2, 0});
  buckets.push_back({1024, std::numeric_limits<double>::infinity(), 0});
  for (const PauseRecord& p : pauses) {
    auto it = std::find_if(buckets.begin(), buckets.end(),
                           [&](const HistogramBucket& b) { return p.modeled_ms < b.hi_ms; });
    it->count += 1;
  }
  return buckets;
}

void summarize_pauses(RunMetrics& m, std::span<const PauseRecord> pauses) {
  m.collections = pauses.size();
  m.young_collections = 0;
  m.old_collections = 0;
  m.scanned_bytes = m.copied_bytes = m.promoted_bytes = m.compacted_bytes = 0;
  m.pause_total_ms = 0;
  for (const PauseRecord& p : pauses) {
    (p.is_young() ? m.young_collections : m.old_collections) += 1;
    m.scanned_bytes += p.scanned_bytes;
    m.copied_bytes += p.copied_bytes;
    m.promoted_bytes += p.promoted_bytes;
    m.compacted_bytes += p.compacted_bytes();
    m.pause_total_ms += p.modeled_ms;
  }
  m.pause_mean_ms = pauses.empty() ? 0.0 : m.pause_total_ms / static_cast<double>(pauses.size());
  m.pauses = pause_percentiles(pauses);
  m.histogram = pause_histogram(pauses);
}

namespace {

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

nlohmann::json to_json(const RunMetrics& m, bool include_timing) {
  using nlohmann::json;
  json histogram = json::array();
  for (const HistogramBucket& b : m.histogram) {
    histogram.push_back({{"lo_ms", b.lo_ms}, {"hi_ms", std::isinf(b.hi_ms) ? json(nullptr) : json(b.hi_ms)},
                         {"count", b.count}});
  }
  json doc = {
      {"schema_version", metrics_schema_version},
      {"mode", m.mode},
      {"trace_fingerprint", hex64(m.trace_fingerprint)},
      {"config", m.config},
      {"events", {{"total", m.events}, {"allocations", m.allocations}, {"allocated_bytes", m.allocated_bytes},
                  {"locked_objects", m.locked_objects}}},
      {"collections", {{"total", m.collections}, {"young", m.young_collections}, {"old", m.old_collections}}},
      {"pause_ms",
       {{"p50", m.pauses.p50}, {"p90", m.pauses.p90}, {"p99", m.pauses.p99}, {"p99_9", m.pauses.p99_9},
        {"max", m.pauses.max}, {"mean", m.pause_mean_ms}, {"total", m.pause_total_ms}}},
      {"pause_histogram", histogram},
      {"bytes",
       {{"scanned", m.scanned_bytes}, {"copied", m.copied_bytes}, {"promoted", m.promoted_bytes},
        {"compacted", m.compacted_bytes}, {"promoted_plus_compacted", m.promoted_plus_compacted()},
        {"peak_heap_occupancy", m.peak_heap_occupancy}}},
      {"profiling",
       {{"suggested_sites", m.suggested_sites},
        {"suggested_methods", m.suggested_methods},
        {"profiled_sites", m.profiled_sites},
        {"profiled_methods", m.profiled_methods},
        {"collision_sites_observed", m.collision_sites},
        {"sequence_collision_sites", m.sequence_collision_sites},
        {"multiset_collision_sites", m.multiset_collision_sites},
        {"sequence_collision_rate", m.sequence_collision_rate},
        {"multiset_collision_rate", m.multiset_collision_rate},
        {"table_entries_peak", m.table_entries_peak},
        {"table_size_bytes_peak", m.table_size_bytes_peak},
        {"contexts_per_generation", m.contexts_per_generation},
        {"expanded_sites", m.expanded_sites},
        {"policy_runs", m.policy_runs},
        {"target_gen_increments", m.target_gen_increments}}},
  };
  if (include_timing) {
    doc["timing"] = {{"wall_seconds", m.wall_seconds},
                     {"events_per_second", m.events_per_second},
                     {"static_analysis_seconds", m.static_analysis_seconds}};
  }
  return doc;
}

std::string to_json_text(const RunMetrics& m, bool include_timing) { return to_json(m, include_timing).dump(2) + "\n"; }

void write_text_report(std::ostream& out, const RunMetrics& m) {
  auto mb = [](uint64_t bytes) { return static_cast<double>(bytes) / (1024.0 * 1024.0); };
  out << std::fixed << std::setprecision(2);
  out << "mode                 " << m.mode << "\n";
  out << "trace                " << hex64(m.trace_fingerprint) << "\n";
  out << "events               " << m.events << " (" << m.allocations << " allocations, "
      << mb(m.allocated_bytes) << " MB)\n";
  out << "collections          " << m.collections << " (young " << m.young_collections << ", old "
      << m.old_collections << ")\n";
  out << "\npause (ms)           p50 " << std::setw(9) << m.pauses.p50 << "  p90 " << std::setw(9) << m.pauses.p90
      << "  p99 " << std::setw(9) << m.pauses.p99 << "  p99.9 " << std::setw(9) << m.pauses.p99_9 << "  max "
      << std::setw(9) << m.pauses.max << "\n";
  out << "pause total (ms)     " << m.pause_total_ms << "  mean " << m.pause_mean_ms << "\n";
  out << "\npauses per interval\n";
  for (const HistogramBucket& b : m.histogram) {
    if (b.count == 0) continue;
    out << "  [" << std::setw(7) << b.lo_ms << ", ";
    if (std::isinf(b.hi_ms)) {
      out << "    inf";
    } else {
      out << std::setw(7) << b.hi_ms;
    }
    out << ")  " << b.count << "\n";
  }
  out << "\nbytes (MB)           scanned " << mb(m.scanned_bytes) << "  copied " << mb(m.copied_bytes)
      << "  promoted " << mb(m.promoted_bytes) << "  compacted " << mb(m.compacted_bytes) << "\n";
  out << "peak heap (MB)       " << mb(m.peak_heap_occupancy) << "\n";
  out << "\nprofiling            AS " << m.suggested_sites << "  MC " << m.suggested_methods << "  PAS "
      << m.profiled_sites << "  PMC " << m.profiled_methods << "\n";
  out << "collisions           sequence " << 100.0 * m.sequence_collision_rate << "%  multiset "
      << 100.0 * m.multiset_collision_rate << "%  (" << m.collision_sites << " sites)\n";
  out << "table                peak " << m.table_entries_peak << " entries, " << m.table_size_bytes_peak
      << " bytes; " << m.expanded_sites << " expanded sites\n";
  out << "contexts per gen    ";
  for (std::size_t g = 0; g < m.contexts_per_generation.size(); ++g) {
    out << " gen" << g << "=" << m.contexts_per_generation[g];
  }
  out << "\npolicy               " << m.policy_runs << " runs, " << m.target_gen_increments << " increments\n";
  out << "\nwall clock (s)       " << m.wall_seconds << "  (" << std::setprecision(0) << m.events_per_second
      << " events/s, static analysis " << std::setprecision(4) << m.static_analysis_seconds << " s)\n";
}

void write_pause_csv(std::ostream& out, std::span<const PauseRecord> pauses) {
  out << "index,kind,clock,scanned_bytes,copied_bytes,promoted_bytes,modeled_ms,survivor_threshold\n";
  for (const PauseRecord& p : pauses) {
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.6f", p.modeled_ms);
    out << p.collection_index << ',' << p.kind() << ',' << p.clock << ',' << p.scanned_bytes << ','
        << p.copied_bytes << ',' << p.promoted_bytes << ',' << ms << ',' << p.survivor_threshold_at_start << '\n';
  }
}

namespace {

void flatten(const nlohmann::json& node, const std::string& path, std::map<std::string, double>& out) {
  if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
    }
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) flatten(node[i], path + "." + std::to_string(i), out);
  } else if (node.is_number()) {
    out[path] = node.get<double>();
  }
}

}  // namespace

CompareReport compare(const nlohmann::json& a, const nlohmann::json& b) {
  CompareReport report;
  report.same_trace = a.value("trace_fingerprint", std::string()) == b.value("trace_fingerprint", std::string());
  std::map<std::string, double> fa, fb;
  flatten(a, "", fa);
  flatten(b, "", fb);
  for (const auto& [key, va] : fa) {
    auto it = fb.find(key);
    if (it == fb.end()) continue;
    MetricDelta d;
    d.metric = key;
    d.a = va;
    d.b = it->second;
    d.delta = d.b - d.a;
    if (d.a != 0.0) {
      d.delta_pct = 100.0 * d.delta / d.a;
    } else if (d.b == 0.0) {
      d.delta_pct = 0.0;
    }
    report.rows.push_back(d);
  }
  return report;
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v == 0.0 ? 0.0 : v);
  return buf;
}

}  // namespace

void write_compare_csv(std::ostream& out, const CompareReport& report) {
  out << "metric,a,b,delta,delta_pct\n";
  for (const MetricDelta& d : report.rows) {
    out << d.metric << ',' << num(d.a) << ',' << num(d.b) << ',' << num(d.delta) << ',' << num(d.delta_pct) << '\n';
  }
}

}  // namespace rolp

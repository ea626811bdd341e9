#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rolp/heap.hpp"
#include "rolp/trace.hpp"

namespace rolp {

enum class WorkloadKind { generational, cache, mixed };

std::string to_string(WorkloadKind kind);
WorkloadKind parse_workload_kind(const std::string& text);  // throws std::invalid_argument

// Parameters of a synthetic trace. Lifetimes are given in young-generation
// turnovers (bytes of allocation needed to fill the young generation once).
//
//  generational  short-lived objects only
//  cache         long_lived_fraction of objects, all from long_lived_site_fraction
//                of the sites, live for several turnovers
//  mixed         one shared site reached from an ingest path (long-lived) and a
//                query path (short-lived), plus short-lived background sites
struct SyntheticSpec {
  WorkloadKind kind = WorkloadKind::cache;
  uint64_t seed = 42;
  uint64_t event_count = 400'000;
  double long_lived_fraction = 0.3;
  double long_lived_site_fraction = 0.1;
  double shared_site_share = 0.4;  // mixed: share of objects from the shared site
  unsigned sites = 40;
  unsigned threads = 4;
  unsigned batch = 8;  // allocations per allocator call
  uint64_t short_mean_size = 16 * KiB;
  uint64_t long_mean_size = 16 * KiB;
  uint64_t young_turnover = 32 * MiB;
  double short_mean_lifetime = 1.0 / 32;
  double long_lifetime_min = 1.5;
  double long_lifetime_max = 3.0;
  double lock_fraction = 0.002;

  static SyntheticSpec defaults(WorkloadKind kind);

  // Throws std::invalid_argument on out-of-range or contradictory values.
  void validate() const;
};

enum class AllocPath : uint8_t { direct, ingest, query };

struct ObjectTruth {
  uint64_t ordinal = 0;
  SiteSource site = 0;
  AllocPath path = AllocPath::direct;
  bool long_lived = false;
  uint64_t size = 0;
  uint64_t lifetime = 0;  // death_tick - allocation clock
};

struct GeneratedWorkload {
  Trace trace;
  std::vector<ObjectTruth> truth;  // one per allocation, ordinal order
  std::vector<SiteSource> long_lived_sites;
  SiteSource shared_site = 0;  // mixed only
};

GeneratedWorkload generate_synthetic(const SyntheticSpec& spec);

// Counts of lifetimes per power-of-two bucket: bucket b holds [2^(b-1), 2^b),
// bucket 0 holds zero.
using LifetimeHistogram = std::array<uint64_t, 65>;

LifetimeHistogram lifetime_histogram(const std::vector<ObjectTruth>& truth,
                                     const std::function<bool(const ObjectTruth&)>& filter);

// Maximal runs of adjacent buckets each holding at least `min_share` of
// the total.
unsigned histogram_modes(const LifetimeHistogram& hist, double min_share = 0.01);

}  // namespace rolp

#include "rolp/collision.hpp"

#include <algorithm>

namespace rolp {

void ContextOracle::record(uint16_t site, uint16_t summary, const std::vector<uint32_t>& frames) {
  _sequences[site][summary].insert(frames);
  std::vector<uint32_t> sorted = frames;
  std::sort(sorted.begin(), sorted.end());
  _multisets[site][summary].insert(std::move(sorted));
}

namespace {

bool collides(const std::map<uint16_t, ContextOracle::Contexts>& by_summary) {
  return std::any_of(by_summary.begin(), by_summary.end(),
                     [](const auto& kv) { return kv.second.size() >= 2; });
}

}  // namespace

CollisionStats collision_stats(const ContextOracle& oracle) {
  CollisionStats stats;
  stats.sites = oracle.site_count();
  for (const auto& [site, by_summary] : oracle.sequences()) {
    if (collides(by_summary)) ++stats.sequence_collision_sites;
  }
  for (const auto& [site, by_summary] : oracle.multisets()) {
    if (collides(by_summary)) ++stats.multiset_collision_sites;
  }
  return stats;
}

}  // namespace rolp

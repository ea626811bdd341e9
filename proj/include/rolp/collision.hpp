#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace rolp {

// Records, for every (site, summary) pair seen at an allocation, which true
// calling contexts produced it. A context is the ordered list of profiled
// frames (method ids) active on the thread.
class ContextOracle {
 public:
  void record(uint16_t site, uint16_t summary, const std::vector<uint32_t>& frames);

  std::size_t site_count() const { return _sequences.size(); }

  // site -> summary -> distinct contexts
  using Contexts = std::set<std::vector<uint32_t>>;
  const std::map<uint16_t, std::map<uint16_t, Contexts>>& sequences() const { return _sequences; }
  const std::map<uint16_t, std::map<uint16_t, Contexts>>& multisets() const { return _multisets; }

 private:
  std::map<uint16_t, std::map<uint16_t, Contexts>> _sequences;
  std::map<uint16_t, std::map<uint16_t, Contexts>> _multisets;
};

struct CollisionStats {
  std::size_t sites = 0;
  std::size_t sequence_collision_sites = 0;  // order-sensitive paths
  std::size_t multiset_collision_sites = 0;  // order-insensitive; excludes commutative merges

  double sequence_rate() const { return sites ? double(sequence_collision_sites) / double(sites) : 0.0; }
  double multiset_rate() const { return sites ? double(multiset_collision_sites) / double(sites) : 0.0; }
};

// A site collides when some summary at it is reached by two or more
// distinct contexts.
CollisionStats collision_stats(const ContextOracle& oracle);

}  // namespace rolp

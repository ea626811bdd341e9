#include "rolp/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rolp {

Fraction Fraction::from_double(double value) {
  if (!std::isfinite(value) || value < 0.0) throw std::invalid_argument("threshold must be finite and >= 0");
  Fraction f;
  f._num = static_cast<uint64_t>(std::llround(value * static_cast<double>(scale)));
  return f;
}

bool Fraction::exceeded_by(uint64_t numerator, uint64_t denominator) const {
  using u128 = unsigned __int128;
  return u128{numerator} * scale > u128{_num} * denominator;
}

void PolicyConfig::validate() const {
  if (slots < 2) throw std::invalid_argument("policy: lifetime array length N must be >= 2");
  if (inc_gen_freq == 0) throw std::invalid_argument("policy: NG2C_INC_GEN_FREQ must be >= 1");
  if (!std::isfinite(inc_gen_thres) || !std::isfinite(expand_ctx)) {
    throw std::invalid_argument("policy: thresholds must be finite");
  }
  if (allow_degenerate) {
    if (inc_gen_thres < 0.0 || expand_ctx < 0.0) throw std::invalid_argument("policy: negative threshold");
    return;
  }
  if (!(0.0 < expand_ctx && expand_ctx < inc_gen_thres && inc_gen_thres < 1.0)) {
    throw std::invalid_argument("policy: thresholds must satisfy 0 < EXPAND_CTX < INC_GEN_THRES < 1 (got EXPAND_CTX=" +
                                std::to_string(expand_ctx) + ", INC_GEN_THRES=" + std::to_string(inc_gen_thres) +
                                ")");
  }
}

bool policy_due(uint64_t collection_index, unsigned inc_gen_freq) {
  return collection_index > 0 && inc_gen_freq > 0 && collection_index % inc_gen_freq == 0;
}

PolicySummary update_target_generations(LifetimeTable& table, unsigned survivor_threshold,
                                        const PolicyConfig& config) {
  const Fraction inc = Fraction::from_double(config.inc_gen_thres);
  const Fraction expand = Fraction::from_double(config.expand_ctx);
  const std::size_t n = table.slots();

  PolicySummary summary;
  std::vector<uint16_t> to_expand;
  for (auto& [key, entry] : table.entries()) {
    ++summary.entries_examined;
    const uint64_t allocated = entry.counts[0];
    if (allocated == 0) {
      ++summary.entries_skipped;
      continue;
    }
    uint64_t promoted = n > survivor_threshold ? entry.counts[survivor_threshold] : entry.counts[n - 1];
    // Counters are windowed, so survivors of older cohorts can outnumber this
    // window's allocations. A ratio above 1 carries no extra meaning.
    promoted = std::min(promoted, allocated);
    if (inc.exceeded_by(promoted, allocated)) {
      if (entry.target_gen < config.max_generation) {
        ++entry.target_gen;
        ++summary.increments;
      }
    } else if (key.is_site() && expand.exceeded_by(promoted, allocated)) {
      to_expand.push_back(key.site_id());
    }
  }
  for (uint16_t site : to_expand) {
    table.expand_site(site);
    ++summary.expansions;
  }
  table.reset_counters();
  return summary;
}

}  // namespace rolp

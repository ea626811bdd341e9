#pragma once

#include <cstdint>
#include <string>

#include "rolp/lifetime_table.hpp"

namespace rolp {

// A threshold held as an exact fraction so ratio tests have no float ties.
class Fraction {
 public:
  static constexpr uint64_t scale = 1'000'000'000;

  constexpr Fraction() = default;
  // Rounded to nine decimal places.
  static Fraction from_double(double value);

  double value() const { return static_cast<double>(_num) / static_cast<double>(scale); }
  uint64_t numerator() const { return _num; }

  // numerator / denominator > this, evaluated exactly.
  bool exceeded_by(uint64_t numerator, uint64_t denominator) const;

  friend constexpr auto operator<=>(Fraction, Fraction) = default;

 private:
  uint64_t _num = 0;
};

struct PolicyConfig {
  std::size_t slots = default_lifetime_slots;  // N
  unsigned inc_gen_freq = 4;                    // run every this many collections
  double inc_gen_thres = 0.6;
  double expand_ctx = 0.4;
  unsigned max_generation = 4;                  // G
  // Accept thresholds outside 0 < expand < inc < 1 (ablation runs only).
  bool allow_degenerate = false;

  // Throws std::invalid_argument.
  void validate() const;
};

struct PolicySummary {
  std::size_t entries_examined = 0;
  std::size_t entries_skipped = 0;  // nothing allocated in the window
  std::size_t increments = 0;
  std::size_t expansions = 0;
};

// True iff the policy should run once collection `collection_index` closes.
bool policy_due(uint64_t collection_index, unsigned inc_gen_freq);

// One policy window: raise target generations, expand ambiguous sites, then
// zero every counter. Target generations are never lowered.
PolicySummary update_target_generations(LifetimeTable& table, unsigned survivor_threshold,
                                        const PolicyConfig& config);

}  // namespace rolp

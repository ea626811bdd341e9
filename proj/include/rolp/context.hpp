#pragma once

#include <cstdint>
#include <vector>

namespace rolp {

// Allocation site id in the low half, call-state summary in the high half.
struct AllocationContext {
  uint16_t site = 0;
  uint16_t summary = 0;

  constexpr uint32_t combined() const { return (uint32_t{summary} << 16) | site; }
  static constexpr AllocationContext from_combined(uint32_t combined) {
    return AllocationContext{static_cast<uint16_t>(combined & 0xFFFFu),
                             static_cast<uint16_t>(combined >> 16)};
  }

  friend constexpr bool operator==(AllocationContext, AllocationContext) = default;
};

// Per-thread running sum of the hashes of active profiled frames.
//
// `active_frames` mirrors the frames the summary was built from; it is
// bookkeeping for verification only and never feeds the encoder.
class ThreadContextState {
 public:
  explicit ThreadContextState(uint32_t thread_id = 0) : _thread_id(thread_id) {}

  void enter_method(uint16_t hash);
  void exit_method(uint16_t hash);

  AllocationContext current_context(uint16_t site) const { return AllocationContext{site, _summary}; }

  uint32_t thread_id() const { return _thread_id; }
  uint16_t summary() const { return _summary; }
  const std::vector<uint16_t>& active_frames() const { return _active_frames; }

  // Wrapping 16-bit sum of active_frames, computed from scratch.
  uint16_t recomputed_summary() const;

 private:
  uint32_t _thread_id;
  uint16_t _summary = 0;
  std::vector<uint16_t> _active_frames;
};

}  // namespace rolp

#include "rolp/context.hpp"

#include <algorithm>

namespace rolp {

void ThreadContextState::enter_method(uint16_t hash) {
  _summary = static_cast<uint16_t>(_summary + hash);
  _active_frames.push_back(hash);
}

void ThreadContextState::exit_method(uint16_t hash) {
  _summary = static_cast<uint16_t>(_summary - hash);
  // Innermost matching frame; well-formed traces always match the top.
  auto it = std::find(_active_frames.rbegin(), _active_frames.rend(), hash);
  if (it != _active_frames.rend()) _active_frames.erase(std::next(it).base());
}

uint16_t ThreadContextState::recomputed_summary() const {
  uint16_t sum = 0;
  for (uint16_t h : _active_frames) sum = static_cast<uint16_t>(sum + h);
  return sum;
}

}  // namespace rolp

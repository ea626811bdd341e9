#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rolp/static_analyzer.hpp"

namespace rolp {

using ThreadId = uint32_t;

struct CallEvent {
  ThreadId thread = 0;
  MethodId method = 0;
  friend bool operator==(const CallEvent&, const CallEvent&) = default;
};

struct ReturnEvent {
  ThreadId thread = 0;
  MethodId method = 0;
  friend bool operator==(const ReturnEvent&, const ReturnEvent&) = default;
};

struct AllocEvent {
  ThreadId thread = 0;
  SiteSource site = 0;
  uint64_t size = 0;
  uint64_t death_tick = 0;
  friend bool operator==(const AllocEvent&, const AllocEvent&) = default;
};

struct LockEvent {
  ThreadId thread = 0;
  uint64_t object = 0;  // allocation ordinal
  friend bool operator==(const LockEvent&, const LockEvent&) = default;
};

using TraceEvent = std::variant<CallEvent, ReturnEvent, AllocEvent, LockEvent>;

struct Trace {
  ProgramModel program;
  std::vector<TraceEvent> events;
};

// `line` is the 1-based source line, or 0 for traces built in memory.
class TraceError : public std::runtime_error {
 public:
  TraceError(std::size_t line, const std::string& what);
  std::size_t line() const { return _line; }

 private:
  std::size_t _line;
};

// Grammar, one record per line, '#' starts a comment line:
//   M <method_id> <package> <signature...>
//   E <caller_id> <callee_id>
//   S <site> <method_id> <line>
//   C <thread> <method_id>
//   R <thread> <method_id>
//   A <thread> <site> <size> <death_tick>
//   L <thread> <object_ordinal>
Trace parse_trace(std::istream& in);
Trace parse_trace(std::string_view text);
Trace read_trace_file(const std::string& path);

// Canonical form: program records (M, E, S) first, then events, single
// spaces, no comments. Canonical input round-trips byte for byte.
void write_trace(std::ostream& out, const Trace& trace);
std::string trace_to_string(const Trace& trace);
void write_trace_file(const std::string& path, const Trace& trace);

// Call/return balance, declared references, death ticks not in the past,
// locks only on live objects.
void validate_trace(const Trace& trace);

uint64_t trace_fingerprint(const Trace& trace);

}  // namespace rolp

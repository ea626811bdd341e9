#include "rolp/trace.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "rolp/hashing.hpp"

namespace rolp {

TraceError::TraceError(std::size_t line, const std::string& what)
    : std::runtime_error(line ? "trace line " + std::to_string(line) + ": " + what : "trace: " + what),
      _line(line) {}

namespace {

struct Cursor {
  std::string_view rest;
  std::size_t line;

  std::string_view word() {
    std::size_t b = rest.find_first_not_of(" \t");
    if (b == std::string_view::npos) {
      rest = {};
      return {};
    }
    rest.remove_prefix(b);
    std::size_t e = rest.find_first_of(" \t");
    std::string_view w = rest.substr(0, e);
    rest.remove_prefix(e == std::string_view::npos ? rest.size() : e);
    return w;
  }

  template <typename T>
  T number(const char* what) {
    std::string_view w = word();
    T value{};
    auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), value);
    if (w.empty() || ec != std::errc() || ptr != w.data() + w.size()) {
      throw TraceError(line, std::string("expected decimal ") + what + ", got '" + std::string(w) + "'");
    }
    return value;
  }

  std::string_view remainder() {
    std::size_t b = rest.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    std::string_view r = rest.substr(b);
    std::size_t e = r.find_last_not_of(" \t\r");
    return r.substr(0, e + 1);
  }

  void finish() {
    if (!remainder().empty()) throw TraceError(line, "trailing data '" + std::string(remainder()) + "'");
  }
};

void check_events(const Trace& trace, const std::vector<std::size_t>* lines) {
  auto where = [&](std::size_t i) -> std::size_t { return lines ? (*lines)[i] : 0; };
  std::map<ThreadId, std::vector<MethodId>> stacks;
  std::vector<uint64_t> deaths;
  uint64_t clock = 0;

  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const TraceEvent& ev = trace.events[i];
    if (auto* c = std::get_if<CallEvent>(&ev)) {
      if (!trace.program.method(c->method)) {
        throw TraceError(where(i), "call to undeclared method " + std::to_string(c->method));
      }
      stacks[c->thread].push_back(c->method);
    } else if (auto* r = std::get_if<ReturnEvent>(&ev)) {
      auto& stack = stacks[r->thread];
      if (stack.empty() || stack.back() != r->method) {
        throw TraceError(where(i), "unbalanced return on thread " + std::to_string(r->thread) +
                                       " from method " + std::to_string(r->method) +
                                       (stack.empty() ? " (no active call)"
                                                      : " (innermost call is " + std::to_string(stack.back()) + ")"));
      }
      stack.pop_back();
    } else if (auto* a = std::get_if<AllocEvent>(&ev)) {
      if (!trace.program.site(a->site)) {
        throw TraceError(where(i), "allocation at undeclared site " + std::to_string(a->site));
      }
      if (a->size == 0) throw TraceError(where(i), "zero-sized allocation");
      if (a->death_tick < clock) {
        throw TraceError(where(i), "death tick " + std::to_string(a->death_tick) + " precedes allocation clock " +
                                       std::to_string(clock));
      }
      deaths.push_back(a->death_tick);
      clock += a->size;
    } else if (auto* l = std::get_if<LockEvent>(&ev)) {
      if (l->object >= deaths.size()) {
        throw TraceError(where(i), "lock on unallocated object " + std::to_string(l->object));
      }
      if (clock >= deaths[l->object]) {
        throw TraceError(where(i), "lock on dead object " + std::to_string(l->object));
      }
    }
  }
}

}  // namespace

Trace parse_trace(std::istream& in) {
  Trace trace;
  std::vector<std::size_t> event_lines;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    Cursor cur{text, line_no};
    std::string_view tag = cur.word();
    if (tag.empty() || tag.front() == '#') continue;
    if (tag.size() != 1) throw TraceError(line_no, "unknown record '" + std::string(tag) + "'");

    try {
      switch (tag.front()) {
        case 'M': {
          auto id = cur.number<MethodId>("method id");
          std::string package(cur.word());
          std::string signature(cur.remainder());
          if (package.empty() || signature.empty()) throw TraceError(line_no, "method record needs package and signature");
          trace.program.add_method(id, std::move(package), std::move(signature));
          continue;
        }
        case 'E': {
          auto caller = cur.number<MethodId>("caller id");
          auto callee = cur.number<MethodId>("callee id");
          cur.finish();
          trace.program.add_call(caller, callee);
          continue;
        }
        case 'S': {
          auto site = cur.number<SiteSource>("site");
          auto method = cur.number<MethodId>("method id");
          auto line = cur.number<int64_t>("line");
          cur.finish();
          trace.program.add_site(site, method, line);
          continue;
        }
        case 'C': {
          auto thread = cur.number<ThreadId>("thread");
          auto method = cur.number<MethodId>("method id");
          cur.finish();
          trace.events.emplace_back(CallEvent{thread, method});
          break;
        }
        case 'R': {
          auto thread = cur.number<ThreadId>("thread");
          auto method = cur.number<MethodId>("method id");
          cur.finish();
          trace.events.emplace_back(ReturnEvent{thread, method});
          break;
        }
        case 'A': {
          AllocEvent a;
          a.thread = cur.number<ThreadId>("thread");
          a.site = cur.number<SiteSource>("site");
          a.size = cur.number<uint64_t>("size");
          a.death_tick = cur.number<uint64_t>("death tick");
          cur.finish();
          trace.events.emplace_back(a);
          break;
        }
        case 'L': {
          auto thread = cur.number<ThreadId>("thread");
          auto object = cur.number<uint64_t>("object ordinal");
          cur.finish();
          trace.events.emplace_back(LockEvent{thread, object});
          break;
        }
        default:
          throw TraceError(line_no, "unknown record '" + std::string(tag) + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw TraceError(line_no, e.what());
    }
    event_lines.push_back(line_no);
  }
  check_events(trace, &event_lines);
  return trace;
}

Trace parse_trace(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_trace(in);
}

Trace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file '" + path + "'");
  return parse_trace(in);
}

void validate_trace(const Trace& trace) { check_events(trace, nullptr); }

namespace {

struct EventWriter {
  std::ostream& out;
  void operator()(const CallEvent& e) const { out << "C " << e.thread << ' ' << e.method << '\n'; }
  void operator()(const ReturnEvent& e) const { out << "R " << e.thread << ' ' << e.method << '\n'; }
  void operator()(const AllocEvent& e) const {
    out << "A " << e.thread << ' ' << e.site << ' ' << e.size << ' ' << e.death_tick << '\n';
  }
  void operator()(const LockEvent& e) const { out << "L " << e.thread << ' ' << e.object << '\n'; }
};

}  // namespace

void write_trace(std::ostream& out, const Trace& trace) {
  for (const MethodDecl& m : trace.program.methods()) {
    out << "M " << m.id << ' ' << m.package << ' ' << m.signature << '\n';
  }
  for (const CallEdge& e : trace.program.calls()) out << "E " << e.caller << ' ' << e.callee << '\n';
  for (const SiteDecl& s : trace.program.sites()) out << "S " << s.source << ' ' << s.method << ' ' << s.line << '\n';
  EventWriter writer{out};
  for (const TraceEvent& ev : trace.events) std::visit(writer, ev);
}

std::string trace_to_string(const Trace& trace) {
  std::ostringstream out;
  write_trace(out, trace);
  return out.str();
}

void write_trace_file(const std::string& path, const Trace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file '" + path + "'");
  write_trace(out, trace);
}

uint64_t trace_fingerprint(const Trace& trace) { return fnv1a64(trace_to_string(trace)); }

}  // namespace rolp

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rolp {

using MethodId = uint32_t;
using SiteSource = uint32_t;  // trace-level allocation site number

struct Statement {
  enum class Kind { call, alloc };
  Kind kind;
  uint32_t target;  // callee MethodId or SiteSource
};

struct MethodDecl {
  MethodId id = 0;
  std::string package;
  std::string signature;
  std::vector<Statement> body;
};

struct CallEdge {
  MethodId caller = 0;
  MethodId callee = 0;
};

struct SiteDecl {
  SiteSource source = 0;
  MethodId method = 0;
  int64_t line = 0;
};

// Methods, call edges and allocation statements of a workload. Declaration
// order is kept so the model can be written back out verbatim.
class ProgramModel {
 public:
  // Each throws std::invalid_argument on duplicates or dangling references.
  void add_method(MethodId id, std::string package, std::string signature);
  void add_call(MethodId caller, MethodId callee);
  void add_site(SiteSource source, MethodId method, int64_t line);

  const MethodDecl* method(MethodId id) const;
  const SiteDecl* site(SiteSource source) const;

  const std::vector<MethodDecl>& methods() const { return _methods; }
  const std::vector<CallEdge>& calls() const { return _calls; }
  const std::vector<SiteDecl>& sites() const { return _sites; }

  // Methods no declared edge calls.
  std::vector<MethodId> entry_points() const;

  uint16_t method_hash(MethodId id) const;
  uint16_t site_id(SiteSource source) const;

  bool empty() const { return _methods.empty(); }

 private:
  std::vector<MethodDecl> _methods;
  std::vector<CallEdge> _calls;
  std::vector<SiteDecl> _sites;
  std::map<MethodId, std::size_t> _method_index;
  std::map<SiteSource, std::size_t> _site_index;
};

struct InstrumentationPlan {
  std::set<MethodId> profiled_methods;
  std::set<SiteSource> profiled_sites;
  uint64_t hot_threshold = 100;

  bool profiles_method(MethodId m) const { return profiled_methods.contains(m); }
  bool profiles_site(SiteSource s) const { return profiled_sites.contains(s); }
};

// Frames between `method` and the nearest allocation; nullopt when no
// allocation is reachable.
std::optional<unsigned> allocation_distance(const ProgramModel& program, MethodId method);
std::map<MethodId, std::optional<unsigned>> allocation_distances(const ProgramModel& program);

// `package` is in scope if it equals a filter entry or lies beneath one.
// An empty filter admits every package.
bool package_selected(const std::string& package, const std::vector<std::string>& filters);

InstrumentationPlan select_instrumented(const ProgramModel& program, unsigned max_alloc_frame,
                                        const std::vector<std::string>& packages,
                                        uint64_t hot_threshold = 100);

// Profiling activates on the call that brings the count to the threshold.
inline bool hot_gate(uint64_t invocation_count, uint64_t hot_threshold) {
  return invocation_count >= hot_threshold;
}

}  // namespace rolp

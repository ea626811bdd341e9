#include "rolp/static_analyzer.hpp"

#include <deque>
#include <stdexcept>

#include "rolp/hashing.hpp"

namespace rolp {

void ProgramModel::add_method(MethodId id, std::string package, std::string signature) {
  if (_method_index.contains(id)) throw std::invalid_argument("duplicate method id " + std::to_string(id));
  if (signature.empty()) throw std::invalid_argument("method " + std::to_string(id) + " has empty signature");
  _method_index.emplace(id, _methods.size());
  _methods.push_back(MethodDecl{id, std::move(package), std::move(signature), {}});
}

void ProgramModel::add_call(MethodId caller, MethodId callee) {
  auto it = _method_index.find(caller);
  if (it == _method_index.end() || !_method_index.contains(callee)) {
    throw std::invalid_argument("call edge " + std::to_string(caller) + " -> " + std::to_string(callee) +
                                " references an undeclared method");
  }
  _calls.push_back(CallEdge{caller, callee});
  _methods[it->second].body.push_back(Statement{Statement::Kind::call, callee});
}

void ProgramModel::add_site(SiteSource source, MethodId method, int64_t line) {
  if (_site_index.contains(source)) throw std::invalid_argument("duplicate site " + std::to_string(source));
  auto it = _method_index.find(method);
  if (it == _method_index.end()) {
    throw std::invalid_argument("site " + std::to_string(source) + " in undeclared method " + std::to_string(method));
  }
  _site_index.emplace(source, _sites.size());
  _sites.push_back(SiteDecl{source, method, line});
  _methods[it->second].body.push_back(Statement{Statement::Kind::alloc, source});
}

const MethodDecl* ProgramModel::method(MethodId id) const {
  auto it = _method_index.find(id);
  return it == _method_index.end() ? nullptr : &_methods[it->second];
}

const SiteDecl* ProgramModel::site(SiteSource source) const {
  auto it = _site_index.find(source);
  return it == _site_index.end() ? nullptr : &_sites[it->second];
}

std::vector<MethodId> ProgramModel::entry_points() const {
  std::set<MethodId> called;
  for (const CallEdge& e : _calls) called.insert(e.callee);
  std::vector<MethodId> out;
  for (const MethodDecl& m : _methods) {
    if (!called.contains(m.id)) out.push_back(m.id);
  }
  return out;
}

uint16_t ProgramModel::method_hash(MethodId id) const {
  const MethodDecl* m = method(id);
  if (!m) throw std::out_of_range("unknown method " + std::to_string(id));
  return rolp::method_hash(m->signature);
}

uint16_t ProgramModel::site_id(SiteSource source) const {
  const SiteDecl* s = site(source);
  if (!s) throw std::out_of_range("unknown site " + std::to_string(source));
  return rolp::site_id(method(s->method)->signature, s->line);
}

std::map<MethodId, std::optional<unsigned>> allocation_distances(const ProgramModel& program) {
  // Multi-source BFS backwards along call edges from every allocating method.
  std::map<MethodId, std::vector<MethodId>> callers;
  for (const CallEdge& e : program.calls()) callers[e.callee].push_back(e.caller);

  std::map<MethodId, std::optional<unsigned>> dist;
  std::deque<MethodId> queue;
  for (const MethodDecl& m : program.methods()) {
    dist[m.id] = std::nullopt;
    for (const Statement& s : m.body) {
      if (s.kind == Statement::Kind::alloc) {
        dist[m.id] = 0;
        queue.push_back(m.id);
        break;
      }
    }
  }
  while (!queue.empty()) {
    MethodId m = queue.front();
    queue.pop_front();
    unsigned next = *dist[m] + 1;
    for (MethodId caller : callers[m]) {
      if (!dist[caller]) {
        dist[caller] = next;
        queue.push_back(caller);
      }
    }
  }
  return dist;
}

std::optional<unsigned> allocation_distance(const ProgramModel& program, MethodId method) {
  auto all = allocation_distances(program);
  auto it = all.find(method);
  if (it == all.end()) throw std::out_of_range("unknown method " + std::to_string(method));
  return it->second;
}

bool package_selected(const std::string& package, const std::vector<std::string>& filters) {
  if (filters.empty()) return true;
  for (const std::string& f : filters) {
    if (package == f) return true;
    if (package.size() > f.size() && package.compare(0, f.size(), f) == 0 && package[f.size()] == '.') {
      return true;
    }
  }
  return false;
}

InstrumentationPlan select_instrumented(const ProgramModel& program, unsigned max_alloc_frame,
                                        const std::vector<std::string>& packages, uint64_t hot_threshold) {
  InstrumentationPlan plan;
  plan.hot_threshold = hot_threshold;
  auto dist = allocation_distances(program);
  for (const MethodDecl& m : program.methods()) {
    if (!package_selected(m.package, packages)) continue;
    const auto& d = dist[m.id];
    if (d && *d <= max_alloc_frame) plan.profiled_methods.insert(m.id);
    for (const Statement& s : m.body) {
      if (s.kind == Statement::Kind::alloc) plan.profiled_sites.insert(s.target);
    }
  }
  return plan;
}

}  // namespace rolp

#include "rolp/synthetic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <random>
#include <set>
#include <stdexcept>

#include "rolp/hashing.hpp"

namespace rolp {

std::string to_string(WorkloadKind kind) {
  switch (kind) {
    case WorkloadKind::generational: return "generational";
    case WorkloadKind::cache: return "cache";
    case WorkloadKind::mixed: return "mixed";
  }
  return "?";
}

WorkloadKind parse_workload_kind(const std::string& text) {
  if (text == "generational") return WorkloadKind::generational;
  if (text == "cache") return WorkloadKind::cache;
  if (text == "mixed") return WorkloadKind::mixed;
  throw std::invalid_argument("unknown workload kind '" + text + "' (expected generational, cache or mixed)");
}

SyntheticSpec SyntheticSpec::defaults(WorkloadKind kind) {
  SyntheticSpec spec;
  spec.kind = kind;
  switch (kind) {
    case WorkloadKind::generational:
      spec.long_lived_fraction = 0.0;
      spec.long_lived_site_fraction = 0.0;
      break;
    case WorkloadKind::cache:
      break;
    case WorkloadKind::mixed:
      spec.long_lived_fraction = 0.2;
      spec.long_lived_site_fraction = 0.0;
      break;
  }
  return spec;
}

void SyntheticSpec::validate() const {
  auto fraction = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
  };
  fraction(long_lived_fraction, "long_lived_fraction");
  fraction(long_lived_site_fraction, "long_lived_site_fraction");
  fraction(shared_site_share, "shared_site_share");
  fraction(lock_fraction, "lock_fraction");
  if (sites < 2) throw std::invalid_argument("need at least 2 allocation sites");
  if (threads == 0 || batch == 0) throw std::invalid_argument("threads and batch must be positive");
  if (short_mean_size < 16 || long_mean_size < 16) throw std::invalid_argument("mean sizes must be >= 16 bytes");
  if (young_turnover == 0) throw std::invalid_argument("young turnover must be positive");
  if (!(short_mean_lifetime > 0.0)) throw std::invalid_argument("short mean lifetime must be positive");
  if (!(long_lifetime_min > 0.0 && long_lifetime_min <= long_lifetime_max)) {
    throw std::invalid_argument("long lifetime range must satisfy 0 < min <= max");
  }

  if (kind == WorkloadKind::mixed) {
    if (long_lived_fraction > shared_site_share) {
      throw std::invalid_argument("mixed: long_lived_fraction exceeds the shared site's share of objects");
    }
    if (long_lived_fraction == 0.0 || long_lived_fraction == shared_site_share) {
      throw std::invalid_argument("mixed: the shared site needs both long- and short-lived callers");
    }
    return;
  }
  auto long_sites = static_cast<unsigned>(std::lround(long_lived_site_fraction * sites));
  if (long_lived_fraction > 0.0 && long_sites == 0) {
    throw std::invalid_argument("long_lived_fraction > 0 but long_lived_site_fraction selects no site");
  }
  if (long_lived_fraction < 1.0 && long_sites >= sites) {
    throw std::invalid_argument("short-lived objects requested but every site is long-lived");
  }
  if (long_lived_fraction == 0.0 && long_sites > 0) {
    throw std::invalid_argument("long-lived sites requested with long_lived_fraction = 0");
  }
}

namespace {

// Distribution helpers on raw engine output, so traces do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : _engine(seed) {}
  uint64_t next() { return _engine(); }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  uint64_t below(uint64_t n) { return n ? next() % n : 0; }
  bool chance(double p) { return uniform() < p; }
  double exponential(double mean) { return -std::log1p(-uniform()) * mean; }

 private:
  std::mt19937_64 _engine;
};

struct PendingAlloc {
  SiteSource site;
  AllocPath path;
  bool long_lived;
  uint64_t size;
  uint64_t lifetime;
};

struct Pending {
  TraceEvent event;
  bool is_alloc = false;
  PendingAlloc alloc{};
  bool is_lock = false;  // lock the thread's most recent allocation
};

class Builder {
 public:
  explicit Builder(const SyntheticSpec& spec) : _spec(spec), _rng(spec.seed) {}

  GeneratedWorkload build() {
    declare_program();
    emit_events();
    return std::move(_out);
  }

 private:
  MethodId method(const std::string& package, const std::string& name) {
    std::string signature = package + "." + name;
    for (unsigned salt = 1; _method_hashes.contains(method_hash(signature)); ++salt) {
      signature = package + "." + name + "$" + std::to_string(salt);
    }
    _method_hashes.insert(method_hash(signature));
    MethodId id = _next_method++;
    _out.trace.program.add_method(id, package, signature);
    return id;
  }

  SiteSource site(MethodId m) {
    const std::string& signature = _out.trace.program.method(m)->signature;
    int64_t line = 10 + _next_site;
    while (_site_ids.contains(site_id(signature, line))) ++line;
    _site_ids.insert(site_id(signature, line));
    SiteSource s = _next_site++;
    _out.trace.program.add_site(s, m, line);
    return s;
  }

  void declare_program() {
    ProgramModel& p = _out.trace.program;
    _root = method("org.sim.app", "Worker.run()");
    for (unsigned g = 0; g < 4; ++g) _getters.push_back(method("org.sim.util", "Config.get" + std::to_string(g) + "()"));
    const unsigned handlers = 8;
    for (unsigned h = 0; h < handlers; ++h) {
      _handlers.push_back(method("org.sim.app", "RequestHandler.handle" + std::to_string(h) + "()"));
      p.add_call(_root, _handlers.back());
      p.add_call(_handlers.back(), _getters[h % _getters.size()]);
    }

    if (_spec.kind == WorkloadKind::mixed) {
      _ingest = method("org.sim.app", "Ingest.put()");
      _query = method("org.sim.app", "Query.scan()");
      _shared_alloc = method("org.sim.data", "Buffers.alloc()");
      p.add_call(_root, _ingest);
      p.add_call(_root, _query);
      p.add_call(_ingest, _shared_alloc);
      p.add_call(_query, _shared_alloc);
      _out.shared_site = site(_shared_alloc);
    }

    const unsigned background = _spec.kind == WorkloadKind::mixed ? _spec.sites - 1 : _spec.sites;
    for (unsigned j = 0; j < background; ++j) {
      MethodId alloc = method("org.sim.data", "Store" + std::to_string(j) + ".make()");
      MethodId handler = _handlers[j % _handlers.size()];
      p.add_call(handler, alloc);
      _site_alloc_method.push_back(alloc);
      _site_handler.push_back(handler);
      _background_sites.push_back(site(alloc));
    }

    if (_spec.kind != WorkloadKind::mixed && _spec.long_lived_fraction > 0.0) {
      auto n_long = static_cast<std::size_t>(std::lround(_spec.long_lived_site_fraction * _spec.sites));
      std::vector<std::size_t> order(_background_sites.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[_rng.below(i + 1)]);
      std::set<std::size_t> chosen(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_long));
      for (std::size_t i = 0; i < _background_sites.size(); ++i) {
        (chosen.contains(i) ? _long_idx : _short_idx).push_back(i);
      }
      for (std::size_t i : _long_idx) _out.long_lived_sites.push_back(_background_sites[i]);
    } else {
      for (std::size_t i = 0; i < _background_sites.size(); ++i) _short_idx.push_back(i);
    }
  }

  uint64_t draw_size(uint64_t mean) {
    uint64_t lo = mean / 2;
    uint64_t size = lo + _rng.below(mean + 1);
    return std::max<uint64_t>(16, size & ~uint64_t{7});
  }

  PendingAlloc draw_alloc(SiteSource s, AllocPath path, bool long_lived) {
    const double turnover = static_cast<double>(_spec.young_turnover);
    double lifetime;
    if (long_lived) {
      lifetime = (_spec.long_lifetime_min + (_spec.long_lifetime_max - _spec.long_lifetime_min) * _rng.uniform()) * turnover;
    } else {
      lifetime = _rng.exponential(_spec.short_mean_lifetime * turnover);
    }
    uint64_t size = draw_size(long_lived ? _spec.long_mean_size : _spec.short_mean_size);
    return PendingAlloc{s, path, long_lived, size, static_cast<uint64_t>(lifetime)};
  }

  void push_call(std::deque<Pending>& q, ThreadId t, MethodId m) { q.push_back(Pending{CallEvent{t, m}}); }
  void push_return(std::deque<Pending>& q, ThreadId t, MethodId m) { q.push_back(Pending{ReturnEvent{t, m}}); }

  void push_allocs(std::deque<Pending>& q, ThreadId t, SiteSource s, AllocPath path, bool long_lived) {
    for (unsigned i = 0; i < _spec.batch; ++i) {
      Pending p{AllocEvent{t, s, 0, 0}};
      p.is_alloc = true;
      p.alloc = draw_alloc(s, path, long_lived);
      q.push_back(p);
      if (_rng.chance(_spec.lock_fraction)) {
        Pending l{LockEvent{t, 0}};
        l.is_lock = true;
        q.push_back(l);
      }
    }
  }

  void request(std::deque<Pending>& q, ThreadId t) {
    if (_spec.kind == WorkloadKind::mixed && _rng.chance(_spec.shared_site_share)) {
      bool ingest = _rng.chance(_spec.long_lived_fraction / _spec.shared_site_share);
      MethodId caller = ingest ? _ingest : _query;
      push_call(q, t, caller);
      push_call(q, t, _shared_alloc);
      push_allocs(q, t, _out.shared_site, ingest ? AllocPath::ingest : AllocPath::query, ingest);
      push_return(q, t, _shared_alloc);
      push_return(q, t, caller);
      return;
    }
    bool long_lived = _spec.kind == WorkloadKind::cache && !_long_idx.empty() &&
                      (_short_idx.empty() || _rng.chance(_spec.long_lived_fraction));
    const auto& pool = long_lived ? _long_idx : _short_idx;
    std::size_t idx = pool[_rng.below(pool.size())];
    MethodId handler = _site_handler[idx];
    MethodId getter = _getters[(handler - _handlers.front()) % _getters.size()];
    push_call(q, t, handler);
    push_call(q, t, getter);
    push_return(q, t, getter);
    push_call(q, t, _site_alloc_method[idx]);
    push_allocs(q, t, _background_sites[idx], AllocPath::direct, long_lived);
    push_return(q, t, _site_alloc_method[idx]);
    push_return(q, t, handler);
  }

  void emit(Pending& p, ThreadId t) {
    auto& events = _out.trace.events;
    if (p.is_alloc) {
      AllocEvent a = std::get<AllocEvent>(p.event);
      a.size = p.alloc.size;
      a.death_tick = _clock + p.alloc.lifetime;
      events.emplace_back(a);
      _last_alloc[t] = {_out.truth.size(), a.death_tick};
      _out.truth.push_back(ObjectTruth{_out.truth.size(), p.alloc.site, p.alloc.path, p.alloc.long_lived,
                                       p.alloc.size, p.alloc.lifetime});
      _clock += a.size;
    } else if (p.is_lock) {
      auto it = _last_alloc.find(t);
      if (it != _last_alloc.end() && _clock < it->second.second) {
        events.emplace_back(LockEvent{t, it->second.first});
      }
    } else {
      events.push_back(p.event);
    }
  }

  void emit_events() {
    const unsigned threads = _spec.threads;
    std::vector<std::deque<Pending>> queues(threads);
    std::vector<bool> started(threads, false);
    auto& events = _out.trace.events;

    while (events.size() < _spec.event_count) {
      auto t = static_cast<ThreadId>(_rng.below(threads));
      if (!started[t]) {
        events.emplace_back(CallEvent{t, _root});
        started[t] = true;
      }
      auto& q = queues[t];
      if (q.empty()) request(q, t);
      uint64_t burst = 1 + _rng.below(4);
      for (uint64_t i = 0; i < burst && !q.empty(); ++i) {
        emit(q.front(), t);
        q.pop_front();
      }
    }
    for (ThreadId t = 0; t < threads; ++t) {
      while (!queues[t].empty()) {
        emit(queues[t].front(), t);
        queues[t].pop_front();
      }
      if (started[t]) events.emplace_back(ReturnEvent{t, _root});
    }
  }

  const SyntheticSpec& _spec;
  Rng _rng;
  GeneratedWorkload _out;
  std::set<uint16_t> _method_hashes;
  std::set<uint16_t> _site_ids;
  MethodId _next_method = 1;
  SiteSource _next_site = 1;
  MethodId _root = 0, _ingest = 0, _query = 0, _shared_alloc = 0;
  std::vector<MethodId> _getters, _handlers, _site_alloc_method, _site_handler;
  std::vector<SiteSource> _background_sites;
  std::vector<std::size_t> _long_idx, _short_idx;
  std::map<ThreadId, std::pair<uint64_t, uint64_t>> _last_alloc;  // ordinal, death tick
  uint64_t _clock = 0;
};

}  // namespace

GeneratedWorkload generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  return Builder(spec).build();
}

LifetimeHistogram lifetime_histogram(const std::vector<ObjectTruth>& truth,
                                     const std::function<bool(const ObjectTruth&)>& filter) {
  LifetimeHistogram hist{};
  for (const ObjectTruth& o : truth) {
    if (filter && !filter(o)) continue;
    hist[std::bit_width(o.lifetime)] += 1;
  }
  return hist;
}

unsigned histogram_modes(const LifetimeHistogram& hist, double min_share) {
  uint64_t total = 0;
  for (uint64_t c : hist) total += c;
  if (total == 0) return 0;
  unsigned modes = 0;
  bool in_run = false;
  for (uint64_t c : hist) {
    bool significant = static_cast<double>(c) >= min_share * static_cast<double>(total);
    if (significant && !in_run) ++modes;
    in_run = significant;
  }
  return modes;
}

}  // namespace rolp

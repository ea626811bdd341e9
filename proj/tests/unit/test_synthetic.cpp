#include <doctest.h>

#include <map>

#include "rolp/hashing.hpp"
#include "rolp/simulator.hpp"
#include "rolp/synthetic.hpp"

using namespace rolp;

namespace {

SyntheticSpec spec(WorkloadKind kind, uint64_t events = 100000) {
  SyntheticSpec s = SyntheticSpec::defaults(kind);
  s.event_count = events;
  return s;
}

}  // namespace

TEST_CASE("same spec, same trace") {
  SyntheticSpec s = spec(WorkloadKind::cache);
  s.seed = 42;
  CHECK(trace_to_string(generate_synthetic(s).trace) == trace_to_string(generate_synthetic(s).trace));
  SyntheticSpec other = s;
  other.seed = 43;
  CHECK(trace_fingerprint(generate_synthetic(s).trace) != trace_fingerprint(generate_synthetic(other).trace));
}

TEST_CASE("generated traces validate and have collision-free ids") {
  for (WorkloadKind kind : {WorkloadKind::generational, WorkloadKind::cache, WorkloadKind::mixed}) {
    GeneratedWorkload w = generate_synthetic(spec(kind, 30000));
    CHECK_NOTHROW(validate_trace(w.trace));
    std::set<uint16_t> methods, sites;
    for (const MethodDecl& m : w.trace.program.methods()) methods.insert(w.trace.program.method_hash(m.id));
    for (const SiteDecl& s : w.trace.program.sites()) sites.insert(w.trace.program.site_id(s.source));
    CHECK(methods.size() == w.trace.program.methods().size());
    CHECK(sites.size() == w.trace.program.sites().size());
  }
}

TEST_CASE("generational objects die before the first collection opportunity") {
  SyntheticSpec s = spec(WorkloadKind::generational);
  GeneratedWorkload w = generate_synthetic(s);
  uint64_t short_lived = 0;
  for (const ObjectTruth& o : w.truth) short_lived += o.lifetime < s.young_turnover;
  CHECK(double(short_lived) >= 0.9 * double(w.truth.size()));
}

TEST_CASE("cache long-lived cohort comes from the long-lived sites") {
  SyntheticSpec s = spec(WorkloadKind::cache);
  GeneratedWorkload w = generate_synthetic(s);
  CHECK(w.long_lived_sites.size() == 4);
  std::set<SiteSource> long_sites(w.long_lived_sites.begin(), w.long_lived_sites.end());
  uint64_t long_lived = 0;
  for (const ObjectTruth& o : w.truth) {
    REQUIRE(o.long_lived == long_sites.contains(o.site));
    if (o.long_lived) {
      ++long_lived;
      REQUIRE(o.lifetime >= s.young_turnover);
    }
  }
  double fraction = double(long_lived) / double(w.truth.size());
  CHECK(fraction == doctest::Approx(0.3).epsilon(0.1));
}

TEST_CASE("mixed shared site is bimodal per site and unimodal per path") {
  GeneratedWorkload w = generate_synthetic(spec(WorkloadKind::mixed));
  auto at_site = [&](const ObjectTruth& o) { return o.site == w.shared_site; };
  CHECK(histogram_modes(lifetime_histogram(w.truth, at_site)) == 2);
  CHECK(histogram_modes(lifetime_histogram(
            w.truth, [&](const ObjectTruth& o) { return at_site(o) && o.path == AllocPath::ingest; })) == 1);
  CHECK(histogram_modes(lifetime_histogram(
            w.truth, [&](const ObjectTruth& o) { return at_site(o) && o.path == AllocPath::query; })) == 1);
  // and the two cohorts map to different lifetime classes
  const uint64_t young = SyntheticSpec{}.young_turnover;
  for (const ObjectTruth& o : w.truth) {
    if (!at_site(o)) continue;
    unsigned cls = lifetime_class_generation(o.lifetime, young, 4);
    REQUIRE((o.path == AllocPath::ingest) == (cls > 0));
  }
}

TEST_CASE("contradictory specs are rejected") {
  SyntheticSpec s = spec(WorkloadKind::cache);
  s.long_lived_fraction = 1.5;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = spec(WorkloadKind::cache);
  s.long_lived_site_fraction = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = spec(WorkloadKind::cache);
  s.long_lived_site_fraction = 1.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = spec(WorkloadKind::mixed);
  s.long_lived_fraction = 0.5;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = spec(WorkloadKind::generational);
  s.long_lived_site_fraction = 0.2;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  CHECK_THROWS_AS(parse_workload_kind("zipf"), std::invalid_argument);
}

TEST_CASE("histogram modes") {
  LifetimeHistogram h{};
  CHECK(histogram_modes(h) == 0);
  h[3] = 10;
  h[4] = 10;
  CHECK(histogram_modes(h) == 1);
  h[10] = 10;
  CHECK(histogram_modes(h) == 2);
}

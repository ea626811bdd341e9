#include <doctest.h>

#include <stdexcept>

#include "rolp/static_analyzer.hpp"

using namespace rolp;

namespace {

// A -> B -> C -> D, D allocates; G is a getter; X lives in another package.
ProgramModel chain() {
  ProgramModel p;
  p.add_method(1, "app", "app.A()");
  p.add_method(2, "app", "app.B()");
  p.add_method(3, "app", "app.C()");
  p.add_method(4, "app.data", "app.data.D()");
  p.add_method(5, "app", "app.Config.get()");
  p.add_method(6, "lib.ext", "lib.ext.X()");
  p.add_call(1, 2);
  p.add_call(2, 3);
  p.add_call(3, 4);
  p.add_call(2, 5);
  p.add_call(3, 6);
  p.add_site(1, 4, 10);
  p.add_site(2, 6, 3);
  return p;
}

}  // namespace

TEST_CASE("allocation distances along the chain") {
  ProgramModel p = chain();
  CHECK(allocation_distance(p, 4) == 0u);
  CHECK(allocation_distance(p, 3) == 1u);
  CHECK(allocation_distance(p, 2) == 2u);
  CHECK(allocation_distance(p, 1) == 3u);
  CHECK_FALSE(allocation_distance(p, 5).has_value());
  CHECK(allocation_distance(p, 6) == 0u);
}

TEST_CASE("recursion still reaches allocations") {
  ProgramModel p;
  p.add_method(1, "a", "a.f()");
  p.add_method(2, "a", "a.g()");
  p.add_method(3, "a", "a.h()");
  p.add_call(1, 2);
  p.add_call(2, 1);
  p.add_call(2, 3);
  p.add_site(1, 3, 1);
  CHECK(allocation_distance(p, 1) == 2u);
  CHECK(allocation_distance(p, 2) == 1u);
}

TEST_CASE("max_alloc_frame 2 keeps exactly the near methods") {
  InstrumentationPlan plan = select_instrumented(chain(), 2, {"app"});
  CHECK(plan.profiled_methods == std::set<MethodId>{2, 3, 4});
  CHECK(plan.profiled_sites == std::set<SiteSource>{1});
}

TEST_CASE("package filters are prefix matches on package segments") {
  CHECK(package_selected("org.apache.cassandra.db", {"org.apache.cassandra"}));
  CHECK(package_selected("org.apache.cassandra", {"org.apache.cassandra"}));
  CHECK_FALSE(package_selected("org.apache.cassandrax", {"org.apache.cassandra"}));
  CHECK(package_selected("anything", {}));

  InstrumentationPlan all = select_instrumented(chain(), 5, {});
  CHECK(all.profiled_methods == std::set<MethodId>{1, 2, 3, 4, 6});
  CHECK(all.profiled_sites == std::set<SiteSource>{1, 2});

  InstrumentationPlan no_data = select_instrumented(chain(), 5, {"app.A", "lib"});
  CHECK(no_data.profiled_methods == std::set<MethodId>{6});
}

TEST_CASE("a program without allocations yields an empty plan") {
  ProgramModel p;
  p.add_method(1, "a", "a.f()");
  p.add_method(2, "a", "a.g()");
  p.add_call(1, 2);
  InstrumentationPlan plan = select_instrumented(p, 10, {});
  CHECK(plan.profiled_methods.empty());
  CHECK(plan.profiled_sites.empty());
}

TEST_CASE("hot gate boundary") {
  CHECK_FALSE(hot_gate(99, 100));
  CHECK(hot_gate(100, 100));
  CHECK(hot_gate(1, 0));
  CHECK(hot_gate(0, 0));
}

TEST_CASE("model rejects dangling references") {
  ProgramModel p;
  p.add_method(1, "a", "a.f()");
  CHECK_THROWS_AS(p.add_method(1, "a", "a.g()"), std::invalid_argument);
  CHECK_THROWS_AS(p.add_call(1, 9), std::invalid_argument);
  CHECK_THROWS_AS(p.add_site(1, 9, 1), std::invalid_argument);
  p.add_site(1, 1, 1);
  CHECK_THROWS_AS(p.add_site(1, 1, 2), std::invalid_argument);
  CHECK(p.entry_points() == std::vector<MethodId>{1});
}

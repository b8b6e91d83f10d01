#include "doctest.h"
#include "support.hpp"

#include "fodd/oracle.hpp"
#include "fodd/solver.hpp"

using namespace fodd;
using testing::q;

namespace {

std::set<Rational> leaf_values(const Manager& mgr, NodeRef d) {
  std::set<Rational> out;
  for (NodeRef l : mgr.leaves(d)) out.insert(mgr.leaf_of(l).value);
  return out;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("schedule helpers") {
  MpiSchedule s;
  s.m = {1, 1, 2};
  CHECK(s.steps_for(1) == 1);
  CHECK(s.steps_for(3) == 2);
  CHECK(s.steps_for(9) == 2);
  CHECK_NOTHROW(s.validate());
  s.epsilon = 0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.epsilon = q(1, 10);
  s.m = {-1};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  CHECK(stopping_threshold(q(9, 10), q(1, 1000)) == q(1, 18000));
}

TEST_CASE("RMPI on EX1 converges to the exact classes") {
  Manager mgr;
  DomainSpec spec = testing::load(mgr, "ex1");
  SolveResult r = rmpi(mgr, spec);
  CHECK(r.trace.converged);
  CHECK(leaf_values(mgr, r.value) == std::set<Rational>{0, q(81, 10), 9, 10});
  for (int n = 1; n <= 2; ++n) {
    GroundMdp m = build_ground_mdp(mgr, spec, n);
    CompareReport rep = compare(mgr, r.value, m, exact_solve(m).values, 1e-9);
    CHECK(rep.ok());
  }
}

TEST_CASE("m schedule does not change the EX1 answer") {
  Manager mgr;
  DomainSpec spec = testing::load(mgr, "ex1");
  MpiSchedule a, b;
  b.m = {0};
  MpiSchedule c;
  c.m = {1, 1, 2};
  NodeRef va = rmpi(mgr, spec, a).value;
  CHECK(rmpi(mgr, spec, b).value == va);
  CHECK(rmpi(mgr, spec, c).value == va);
}

TEST_CASE("trace records one entry per step with norm bounds on greedy steps") {
  Manager mgr;
  DomainSpec spec = testing::load(mgr, "ex1");
  SolveResult r = rmpi(mgr, spec);
  REQUIRE(!r.trace.steps.empty());
  CHECK(r.trace.steps.front().kind == StepKind::initial);
  CHECK(semantic_equal(mgr, r.trace.steps.front().value, spec.reward, spec.vocabulary(), 2));
  for (std::size_t k = 0; k < r.trace.steps.size(); ++k) {
    const TraceStep& st = r.trace.steps[k];
    CHECK(st.generation == static_cast<int>(k));
    CHECK(st.norm_bound.has_value() == (st.kind == StepKind::greedy));
    CHECK(st.nodes == mgr.size(st.value));
  }
}

TEST_CASE("value iteration reaches the same EX1 values") {
  Manager mgr;
  DomainSpec spec = testing::load(mgr, "ex1");
  SolveResult vi = value_iteration(mgr, spec, q(1, 1000));
  CHECK(vi.trace.converged);
  CHECK(vi.value == rmpi(mgr, spec).value);
}

TEST_CASE("iteration cap is reported") {
  Manager mgr;
  DomainSpec spec = testing::load(mgr, "ex2");
  MpiSchedule s;
  s.max_outer = 2;
  SolveResult r = rmpi(mgr, spec, s);
  CHECK_FALSE(r.trace.converged);
  CHECK(r.trace.outer_values.size() <= 3);
}

TEST_CASE("norm bound is symmetric and bounds the ground difference") {
  Manager mgr;
  DomainSpec spec = testing::load(mgr, "ex3");
  SolveResult r = rmpi(mgr, spec);
  GroundMdp m = build_ground_mdp(mgr, spec, 2);
  for (std::size_t k = 1; k < r.trace.steps.size(); ++k) {
    NodeRef a = r.trace.steps[k].value, b = r.trace.steps[k - 1].value;
    Rational bound = norm_bound(mgr, a, b);
    CHECK(bound == norm_bound(mgr, b, a));
    auto ta = value_table(mgr, a, m), tb = value_table(mgr, b, m);
    for (std::size_t s = 0; s < ta.size(); ++s) REQUIRE(abs(ta[s] - tb[s]) <= bound);
  }
}

TEST_CASE("negative rewards raise a warning") {
  Manager mgr;
  DomainSpec spec = parse_domain(
      "domain neg\npredicates: p/1\ndiscount: 0.5\nabsorbing-goal: false\nreward: (if p(x) 1 -1)\n", mgr);
  SolveResult r = rmpi(mgr, spec);
  CHECK_FALSE(r.trace.warnings.empty());
}

}  // TEST_SUITE

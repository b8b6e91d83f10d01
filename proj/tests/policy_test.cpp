#include "doctest.h"
#include "support.hpp"

#include "fodd/error.hpp"
#include "fodd/oracle.hpp"
#include "fodd/policy.hpp"
#include "fodd/regression.hpp"

using namespace fodd;
using testing::atom;
using testing::q;

namespace {

// EX1 value classes after one greedy step from R, by hand: goal 10, one
// action away from the goal 9 (discount 0.9), anything else 0.
Rational ex1_first_greedy(const Interpretation& s) {
  int n = s.universe_size();
  Rational best = 0;
  for (int o = 0; o < n; ++o) {
    bool p1 = s.holds(atom("p1", o)), p2 = s.holds(atom("p2", o));
    bool q1 = s.holds(atom("q1", o)), q2 = s.holds(atom("q2", o));
    if (p1 && p2) return 10;
    if ((p1 && q2) || (p2 && q1)) best = 9;
  }
  return best;
}

}  // namespace

TEST_SUITE("policy") {

TEST_CASE("EX1 greedy step from the reward") {
  Manager mgr;
  DomainSpec spec = testing::load(mgr, "ex1");
  GreedyResult g = rel_greedy(mgr, spec, spec.reward);
  std::set<Rational> leaves;
  for (NodeRef l : mgr.leaves(g.value)) leaves.insert(mgr.leaf_of(l).value);
  CHECK(leaves == std::set<Rational>{0, 9, 10});
  for (int n = 1; n <= 2; ++n)
    for (const auto& s : enumerate_states(spec, n)) REQUIRE(map_max(mgr, g.value, s) == ex1_first_greedy(s));
  for (NodeRef l : mgr.leaves(g.policy)) CHECK(mgr.leaf_of(l).tag.has_value());
}

TEST_CASE("EX1 selected actions") {
  Manager mgr;
  DomainSpec spec = testing::load(mgr, "ex1");
  PolicyDiagram p{rel_greedy(mgr, spec, spec.reward).policy, 1};
  Selection goal = select_action(mgr, p, testing::state(1, {atom("p1", 0), atom("p2", 0)}));
  CHECK(goal.action.action == kNoopAction);
  CHECK(goal.value == 10);
  Selection near = select_action(mgr, p, testing::state(1, {atom("p1", 0), atom("q2", 0)}));
  CHECK(to_string(near.action) == "A2(1)");
  CHECK(near.value == 9);
  Selection none = select_action(mgr, p, Interpretation(1));
  CHECK(none.action.action == kNoopAction);
  CHECK(none.value == 0);
}

TEST_CASE("EX1 regress-policy step is a fixed point") {
  Manager mgr;
  DomainSpec spec = testing::load(mgr, "ex1");
  GreedyResult g = rel_greedy(mgr, spec, spec.reward);
  PolicyStep step = rel_regress_policy(mgr, spec, g.value, PolicyDiagram{g.policy, 1});
  CHECK(step.value == g.value);
  CHECK(semantic_equal(mgr, step.value, g.value, spec.vocabulary(), 2));
}

TEST_CASE("regress-policy rejects a foreign value function") {
  Manager mgr;
  DomainSpec spec = testing::load(mgr, "ex1");
  GreedyResult g = rel_greedy(mgr, spec, spec.reward);
  CHECK_THROWS_AS(rel_regress_policy(mgr, spec, spec.reward, PolicyDiagram{g.policy, 1}), Error);
}

TEST_CASE("EX2 overlapping partitions lift the regressed value") {
  Manager mgr;
  DomainSpec spec = testing::load(mgr, "ex2");
  const Rational g = spec.discount;
  GreedyResult w0 = rel_greedy(mgr, spec, spec.reward);
  PolicyDiagram pi{w0.policy, 1};

  // w_1^0 on a few single-object states, by hand
  auto s = [](std::vector<GroundAtom> atoms) { return testing::state(1, atoms); };
  CHECK(map_max(mgr, w0.value, s({atom("q1", 0)})) == 10 * g);
  CHECK(to_string(select_action(mgr, pi, s({atom("q1", 0)})).action) == "A1(1)");
  CHECK(map_max(mgr, w0.value, s({atom("p2", 0)})) == 5 + 20 * g);
  CHECK(map_max(mgr, w0.value, s({atom("p2", 0), atom("p3", 0)})) == 20 + 20 * g);
  CHECK(map_max(mgr, w0.value, s({atom("p1", 0)})) == 10 + 10 * g);
  CHECK(map_max(mgr, w0.value, s({atom("q2", 0)})) == 5 * g);

  Interpretation both = s({atom("q1", 0), atom("q2", 0)});
  CHECK(to_string(select_action(mgr, pi, both).action) == "A1(1)");
  PolicyStep w1 = rel_regress_policy(mgr, spec, w0.value, pi);
  Selection sel = select_action(mgr, w1.policy, both);
  CHECK(map_max(mgr, w1.value, both) == 5 * g + 20 * g * g);
  CHECK(sel.value == q(207, 10));
  CHECK(to_string(sel.action) == "A2(1)");

  GroundMdp m = build_ground_mdp(mgr, spec, 1);
  auto fixed = policy_backup(mgr, pi, m, value_table(mgr, w0.value, m));
  CHECK(fixed[static_cast<std::size_t>(m.index_of(both))] == 10 * g + 10 * g * g);
  CHECK(fixed[static_cast<std::size_t>(m.index_of(both))] == q(171, 10));
}

TEST_CASE("decision lists are sorted by value and end in a default") {
  Manager mgr;
  DomainSpec spec = testing::load(mgr, "ex1");
  GreedyResult g = rel_greedy(mgr, spec, spec.reward);
  auto rules = decision_list(mgr, spec, g.policy);
  REQUIRE(rules.size() >= 2);
  for (std::size_t i = 1; i < rules.size(); ++i) CHECK(rules[i - 1].value >= rules[i].value);
  CHECK(rules.back().condition == "true");
  CHECK(rules.back().action == "noop()");
  std::string text = format_decision_list(rules);
  CHECK(text.find("-> 10 (noop())") != std::string::npos);
  CHECK(text.find("-> 9 (A") != std::string::npos);
}

TEST_CASE("all-noop policy tags every leaf") {
  Manager mgr;
  DomainSpec spec = testing::load(mgr, "ex2");
  PolicyDiagram p = all_noop_policy(mgr, spec, spec.reward);
  for (NodeRef l : mgr.leaves(p.diagram)) {
    REQUIRE(mgr.leaf_of(l).tag);
    CHECK(mgr.leaf_of(l).tag->action == kNoopAction);
  }
}

}  // TEST_SUITE

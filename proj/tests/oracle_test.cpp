#include <cmath>

#include "doctest.h"
#include "support.hpp"

#include "fodd/error.hpp"
#include "fodd/oracle.hpp"

using namespace fodd;
using testing::atom;

TEST_SUITE("oracle") {

TEST_CASE("state counts") {
  Manager mgr;
  DomainSpec ex1 = testing::load(mgr, "ex1");
  DomainSpec ex2 = testing::load(mgr, "ex2");
  CHECK(enumerate_states(ex1, 1).size() == 16);
  CHECK(enumerate_states(ex2, 1).size() == 32);
  CHECK(enumerate_states(ex1, 2).size() == 256);
  CHECK_THROWS_AS(enumerate_states(ex2, 3), BudgetError);
}

TEST_CASE("ground actions in declaration order") {
  Manager mgr;
  DomainSpec ex1 = testing::load(mgr, "ex1");
  auto actions = ground_actions(ex1, 2);
  REQUIRE(actions.size() == 5);
  CHECK(to_string(actions[0]) == "A1(1)");
  CHECK(to_string(actions[1]) == "A1(2)");
  CHECK(to_string(actions.back()) == "noop");
}

TEST_CASE("transition rows are distributions and indices are stable") {
  Manager mgr;
  DomainSpec ex3 = testing::load(mgr, "ex3");
  GroundMdp a = build_ground_mdp(mgr, ex3, 2);
  GroundMdp b = build_ground_mdp(mgr, ex3, 2);
  for (std::size_t s = 0; s < a.states.size(); ++s) {
    REQUIRE(a.states[s].to_string() == b.states[s].to_string());
    CHECK(a.index_of(a.states[s]) == static_cast<int>(s));
    for (const auto& row : a.transitions[s]) {
      Rational total = 0;
      double weight = 0;
      for (const auto& o : row) {
        total += o.probability;
        weight += o.weight;
      }
      REQUIRE(total == 1);
      REQUIRE(std::abs(weight - 1) < 1e-12);
    }
  }
}

TEST_CASE("EX1 optimal values are discounted goal distances") {
  Manager mgr;
  DomainSpec ex1 = testing::load(mgr, "ex1");
  GroundMdp m = build_ground_mdp(mgr, ex1, 1);
  OracleSolution sol = exact_solve(m);
  auto value_of = [&](std::vector<GroundAtom> atoms) {
    return sol.values[static_cast<std::size_t>(m.index_of(testing::state(1, atoms)))];
  };
  CHECK(value_of({atom("p1", 0), atom("p2", 0)}) == doctest::Approx(10).epsilon(1e-12));
  CHECK(value_of({atom("p1", 0), atom("q2", 0)}) == doctest::Approx(9).epsilon(1e-9));
  CHECK(value_of({atom("q1", 0), atom("q2", 0)}) == doctest::Approx(8.1).epsilon(1e-9));
  CHECK(value_of({}) == doctest::Approx(0));
  CHECK(value_of({atom("q1", 0)}) == doctest::Approx(0));
}

TEST_CASE("oracle meets its own Bellman residual bound") {
  Manager mgr;
  for (const char* name : {"ex1", "ex2", "ex3"}) {
    DomainSpec spec = testing::load(mgr, name);
    GroundMdp m = build_ground_mdp(mgr, spec, 2);
    const double tol = 1e-9;
    OracleSolution sol = exact_solve(m, tol);
    double g = to_double(m.discount);
    double worst = 0;
    for (std::size_t s = 0; s < m.states.size(); ++s) {
      double best = -1e300;
      for (std::size_t a = 0; a < m.actions.size(); ++a)
        best = std::max(best, backup(m, static_cast<int>(s), static_cast<int>(a), sol.values));
      worst = std::max(worst, std::abs(best - sol.values[s]));
    }
    CHECK(worst <= tol * (1 - g) / (2 * g) + 1e-12);
  }
}

TEST_CASE("goal states keep exactly the reward in the ground model") {
  Manager mgr;
  DomainSpec ex1 = testing::load(mgr, "ex1");
  GroundMdp m = build_ground_mdp(mgr, ex1, 2);
  OracleSolution sol = exact_solve(m);
  for (std::size_t s = 0; s < m.states.size(); ++s)
    if (m.reward[s] == 10) CHECK(sol.values[s] == 10);
}

TEST_CASE("compare reports per-state differences") {
  Manager mgr;
  DomainSpec ex1 = testing::load(mgr, "ex1");
  GroundMdp m = build_ground_mdp(mgr, ex1, 1);
  CompareReport same = compare(mgr, ex1.reward, m, to_doubles(m.reward), 1e-9);
  CHECK(same.ok());
  CHECK(same.max_abs_diff == 0);
  OracleSolution sol = exact_solve(m);
  CompareReport lower = compare(mgr, ex1.reward, m, sol.values, 1e-9);
  CHECK_FALSE(lower.ok());
  for (double d : lower.diffs) CHECK(d <= 1e-9);
}

TEST_CASE("non-stationary rollouts") {
  Manager mgr;
  DomainSpec ex1 = testing::load(mgr, "ex1");
  GroundMdp m = build_ground_mdp(mgr, ex1, 1);
  int a2 = -1;
  for (std::size_t a = 0; a < m.actions.size(); ++a)
    if (to_string(m.actions[a]) == "A2(1)") a2 = static_cast<int>(a);
  REQUIRE(a2 >= 0);
  std::vector<int> table(m.states.size(), a2);
  auto u = nonstationary_value(m, {table});
  int s = m.index_of(testing::state(1, {atom("p1", 0), atom("q2", 0)}));
  CHECK(u[static_cast<std::size_t>(s)] == 9);
}

TEST_CASE("dump is deterministic structured text") {
  Manager mgr;
  DomainSpec ex1 = testing::load(mgr, "ex1");
  GroundMdp m = build_ground_mdp(mgr, ex1, 1);
  OracleSolution sol = exact_solve(m);
  std::string a = dump(m, sol.values, sol.policy);
  CHECK(a == dump(m, sol.values, sol.policy));
  CHECK(std::count(a.begin(), a.end(), '\n') >= 16);
}

}  // TEST_SUITE

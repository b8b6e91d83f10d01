#include "doctest.h"
#include "support.hpp"

#include "fodd/error.hpp"

using namespace fodd;
using testing::atom;

TEST_SUITE("semantics") {

TEST_CASE("fig1 diagram: single valuations and the max aggregate") {
  Manager mgr;
  DomainSpec fig = testing::load(mgr, "fig1");
  Interpretation s = testing::state(3, {atom("p", 0), atom("q", 1), atom("h", 2)});
  CHECK(evaluate(mgr, fig.reward, s, {{"x", 0}, {"y", 0}}) == 0);
  CHECK(evaluate(mgr, fig.reward, s, {{"x", 1}, {"y", 2}}) == 1);
  CHECK(map_max(mgr, fig.reward, s) == 1);
  CHECK(testing::naive_map(mgr, fig.reward, s) == 1);
  CHECK(map_max(mgr, fig.reward, testing::state(3, {atom("p", 0), atom("q", 1)})) == 0);
}

TEST_CASE("witness ties go to the lexicographically smallest valuation") {
  Manager mgr;
  Vocabulary v = testing::pqh();
  NodeRef d = parse_expression("(if p(x) 1 0)", mgr, v);
  Interpretation s = testing::state(3, {atom("p", 1), atom("p", 2)});
  MaxWitness w = map_max_witness(mgr, d, s);
  CHECK(w.value == 1);
  CHECK(w.valuation.at("x") == 1);
}

TEST_CASE("fixed variables are held constant") {
  Manager mgr;
  Vocabulary v = testing::pqh();
  NodeRef d = parse_expression("(if p(x) (if q(y) 3 1) 0)", mgr, v);
  Interpretation s = testing::state(2, {atom("p", 0), atom("q", 1)});
  CHECK(map_max(mgr, d, s) == 3);
  CHECK(map_max(mgr, d, s, {{"y", 0}}) == 1);
  CHECK(map_max(mgr, d, s, {{"x", 1}}) == 0);
}

TEST_CASE("compiled evaluation agrees with the naive oracle") {
  Manager mgr;
  std::mt19937 rng(11);
  Vocabulary v = testing::pqh();
  auto interps = enumerate_interpretations(v, 2);
  for (int i = 0; i < 40; ++i) {
    NodeRef d = testing::random_diagram(mgr, rng, 5);
    CompiledDiagram c(mgr, d);
    for (std::size_t k = 0; k < interps.size(); k += 3) {
      Rational want = testing::naive_map(mgr, d, interps[k]);
      REQUIRE(c.max_value(interps[k]) == want);
      REQUIRE(c.max(interps[k]).value == want);
    }
  }
}

TEST_CASE("enumeration counts and order") {
  Vocabulary four{{{"p1", 1}, {"p2", 1}, {"q1", 1}, {"q2", 1}}, {}};
  CHECK(enumerate_interpretations(four, 1).size() == 16);
  CHECK(enumerate_interpretations(four, 2).size() == 256);
  CHECK(ground_atom_count(four, 2) == 8);
  auto atoms = ground_atoms(four, 2);
  CHECK(to_string(atoms.front()) == "p1(1)");
  CHECK(to_string(atoms[1]) == "p1(2)");
  CHECK(enumerate_interpretations(four, 1).front().atoms().empty());
}

TEST_CASE("enumeration beyond the atom budget is refused") {
  Vocabulary four{{{"p1", 1}, {"p2", 1}, {"q1", 1}, {"q2", 1}}, {}};
  try {
    enumerate_interpretations(four, 4);
    FAIL("no refusal");
  } catch (const BudgetError& e) {
    CHECK(e.atoms() == 16);
    CHECK(e.budget() == 12);
  }
}

TEST_CASE("semantic_equal distinguishes by max aggregation") {
  Manager mgr;
  Vocabulary v = testing::pqh();
  NodeRef a = parse_expression("(if p(x) 1 0)", mgr, v);
  NodeRef b = parse_expression("(if p(y) 1 0)", mgr, v);
  NodeRef c = parse_expression("(if p(x) (if q(x) 1 0) 0)", mgr, v);
  CHECK(semantic_equal(mgr, a, b, v, 2));
  CHECK_FALSE(semantic_equal(mgr, a, c, v, 2));
}

TEST_CASE("unmapped constants are an evaluation error") {
  Manager mgr;
  Vocabulary v{{{"p", 1}}, {"c"}};
  NodeRef d = parse_expression("(if p(c) 1 0)", mgr, v);
  CHECK_THROWS_AS(map_max(mgr, d, Interpretation(2)), EvaluationError);
  Interpretation s(2);
  s.map_constant("c", 1);
  s.add(atom("p", 1));
  CHECK(map_max(mgr, d, s) == 1);
}

}  // TEST_SUITE

#include "doctest.h"
#include "support.hpp"

#include "fodd/error.hpp"

using namespace fodd;
using testing::q;

namespace {

Label atom(const std::string& p, const std::string& v) { return Label::atom(p, {Term::variable(v)}); }

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("leaves are hash-consed by exact value and tag") {
  Manager mgr;
  CHECK(mgr.leaf(q(1, 2)) == mgr.leaf(q(2, 4)));
  CHECK(mgr.leaf(q(1, 2)) != mgr.leaf(q(1, 2), noop_tag()));
  CHECK(mgr.leaf(q(1, 2), noop_tag()) == mgr.leaf(q(1, 2), noop_tag()));
}

TEST_CASE("inner nodes are unique and redundant tests vanish") {
  Manager mgr;
  NodeRef a = mgr.mk_node(atom("p", "x"), mgr.one(), mgr.zero());
  NodeRef b = mgr.mk_node(atom("p", "x"), mgr.one(), mgr.zero());
  CHECK(a == b);
  CHECK(mgr.mk_node(atom("p", "x"), mgr.one(), mgr.one()) == mgr.one());
  CHECK(mgr.size(a) == 3);
}

TEST_CASE("order violations and trivial equalities are rejected") {
  Manager mgr;
  NodeRef child = mgr.indicator(atom("a", "x"));
  CHECK_THROWS_AS(mgr.mk_node(atom("b", "x"), child, mgr.zero()), OrderError);
  CHECK_THROWS_AS(mgr.mk_node(Label::equality(Term::variable("x"), Term::variable("x")), mgr.one(), mgr.zero()),
                  OrderError);
  CHECK(mgr.indicator(Label::equality(Term::variable("x"), Term::variable("x"))) == mgr.one());
}

TEST_CASE("apply combines leaves pointwise for a fixed valuation") {
  Manager mgr;
  NodeRef a = mgr.ite(mgr.indicator(atom("p", "x")), mgr.leaf(3), mgr.leaf(1));
  NodeRef b = mgr.ite(mgr.indicator(atom("q", "x")), mgr.leaf(q(1, 2)), mgr.leaf(2));
  Interpretation s = testing::state(1, {testing::atom("p", 0)});
  Valuation val{{"x", 0}};
  CHECK(evaluate(mgr, mgr.apply(ApplyOp::add, a, b), s, val) == 5);
  CHECK(evaluate(mgr, mgr.apply(ApplyOp::subtract, a, b), s, val) == 1);
  CHECK(evaluate(mgr, mgr.apply(ApplyOp::multiply, a, b), s, val) == 6);
  CHECK(evaluate(mgr, mgr.apply(ApplyOp::max, a, b), s, val) == 3);
  CHECK(evaluate(mgr, mgr.apply(ApplyOp::min, a, b), s, val) == 2);
  CHECK(evaluate(mgr, mgr.scale(a, q(9, 10)), s, val) == q(27, 10));
}

TEST_CASE("max keeps the tag of the larger operand") {
  Manager mgr;
  NodeRef a = mgr.leaf(9, ActionTag{"A1", {Term::variable("x")}});
  NodeRef b = mgr.leaf(q(9, 2), ActionTag{"A2", {Term::variable("x")}});
  NodeRef m = mgr.apply(ApplyOp::max, a, b);
  REQUIRE(mgr.leaf_of(m).tag);
  CHECK(mgr.leaf_of(m).tag->action == "A1");
  CHECK(mgr.strip_tags(m) == mgr.leaf(9));
}

TEST_CASE("ite rejects non-indicator conditions") {
  Manager mgr;
  CHECK_THROWS_AS(mgr.ite(mgr.leaf(2), mgr.one(), mgr.zero()), Error);
}

TEST_CASE("standardize_apart renames every variable away from the input") {
  Manager mgr;
  NodeRef d = mgr.ite(mgr.indicator(atom("p", "x")), mgr.indicator(atom("q", "y")), mgr.zero());
  NodeRef e = mgr.standardize_apart(d);
  auto before = mgr.variables(d);
  auto after = mgr.variables(e);
  CHECK(after.size() == 2);
  for (const auto& v : after) CHECK(before.count(v) == 0);
}

TEST_CASE("substitution refuses to capture a variable") {
  Manager mgr;
  NodeRef d = mgr.ite(mgr.indicator(atom("p", "x")), mgr.indicator(atom("q", "y")), mgr.zero());
  CHECK_THROWS_AS(mgr.substitute(d, Binding{{"x", Term::variable("y")}}), CaptureError);
  NodeRef c = mgr.substitute(d, Binding{{"x", Term::variable("z")}});
  CHECK(mgr.variables(c) == std::set<std::string>{"y", "z"});
}

TEST_CASE("reduce never grows a diagram and the store passes audit") {
  Manager mgr;
  std::mt19937 rng(7);
  for (int i = 0; i < 50; ++i) {
    NodeRef d = testing::random_diagram(mgr, rng, 5);
    CHECK(mgr.size(mgr.reduce(d)) <= mgr.size(d));
  }
  CHECK_NOTHROW(mgr.audit());
}

TEST_CASE("leaf statistics") {
  Manager mgr;
  NodeRef d = mgr.ite(mgr.indicator(atom("p", "x")), mgr.leaf(-3), mgr.leaf(2));
  CHECK(mgr.max_abs_leaf(d) == 3);
  CHECK(mgr.min_leaf(d) == -3);
  CHECK(mgr.max_leaf(d) == 2);
  CHECK(mgr.leaves(d).size() == 2);
}

TEST_CASE("rational parsing and rendering") {
  CHECK(parse_rational("81/10") == q(81, 10));
  CHECK(parse_rational("0.9") == q(9, 10));
  CHECK(parse_rational("-1.25") == q(-5, 4));
  CHECK(parse_rational("010") == 10);
  CHECK(to_exact_string(q(81, 10)) == "81/10");
  CHECK(to_decimal_string(q(81, 10)) == "8.1");
  CHECK(to_decimal_string(q(1, 3)) == "0.333333333333333");
  CHECK(compare(q(1, 3), q(1, 2)) < 0);
  CHECK(compare(q(-1, 3), q(-1, 2)) > 0);
  CHECK(compare(q(2, 4), q(1, 2)) == 0);
}

}  // TEST_SUITE

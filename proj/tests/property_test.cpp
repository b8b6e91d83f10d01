#include "doctest.h"
#include "support.hpp"

#include "fodd/invariants.hpp"
#include "fodd/rules.hpp"

using namespace fodd;

namespace {

std::vector<Interpretation> small_interpretations() {
  std::vector<Interpretation> out;
  for (int n = 1; n <= 2; ++n)
    for (auto& s : enumerate_interpretations(testing::pqh(), n)) out.push_back(std::move(s));
  return out;
}

}  // namespace

TEST_SUITE("property") {

TEST_CASE("reduce preserves max aggregation on 200 random diagrams") {
  Manager mgr;
  std::mt19937 rng(2024);
  auto interps = small_interpretations();
  int failures = 0;
  for (int i = 0; i < 200; ++i) {
    NodeRef d = testing::random_diagram(mgr, rng, 6);
    NodeRef r = mgr.reduce(d);
    CHECK(mgr.size(r) <= mgr.size(d));
    for (const auto& s : interps)
      if (testing::naive_map(mgr, r, s) != testing::naive_map(mgr, d, s)) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("compaction preserves max aggregation on random diagrams") {
  Manager mgr;
  std::mt19937 rng(99);
  auto interps = small_interpretations();
  for (int i = 0; i < 100; ++i) {
    NodeRef d = testing::random_diagram(mgr, rng, 5);
    NodeRef c = compact(mgr, d);
    for (const auto& s : interps) REQUIRE(testing::naive_map(mgr, c, s) == testing::naive_map(mgr, d, s));
  }
}

TEST_CASE("apply is pointwise under every valuation") {
  Manager mgr;
  std::mt19937 rng(5);
  Interpretation s = testing::state(2, {testing::atom("p", 0), testing::atom("q", 1), testing::atom("h", 1)});
  for (int i = 0; i < 60; ++i) {
    NodeRef a = testing::random_diagram(mgr, rng, 4), b = testing::random_diagram(mgr, rng, 4);
    NodeRef sum = mgr.apply(ApplyOp::add, a, b), mx = mgr.apply(ApplyOp::max, a, b);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        Valuation v{{"x", x}, {"y", y}};
        Rational ea = evaluate(mgr, a, s, v), eb = evaluate(mgr, b, s, v);
        REQUIRE(evaluate(mgr, sum, s, v) == ea + eb);
        REQUIRE(evaluate(mgr, mx, s, v) == std::max(ea, eb));
      }
  }
}

TEST_CASE("subsumption implies the general rule fires wherever the specific one does") {
  Manager mgr;
  std::mt19937 rng(17);
  auto interps = small_interpretations();
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    auto general = path_rules(mgr, testing::random_diagram(mgr, rng, 3));
    auto specific = path_rules(mgr, testing::random_diagram(mgr, rng, 4));
    for (const auto& g : general)
      for (const auto& sp : specific) {
        if (!simplify_rule(g) || !simplify_rule(sp) || !subsumes(g, sp)) continue;
        ++checked;
        Rule gg = g, ss = sp;
        gg.value = ss.value = 1;
        NodeRef dg = build_from_rules(mgr, compact_rule_list({gg}));
        NodeRef ds = build_from_rules(mgr, compact_rule_list({ss}));
        for (const auto& s : interps) REQUIRE(testing::naive_map(mgr, dg, s) >= testing::naive_map(mgr, ds, s));
      }
  }
  CHECK(checked > 0);
}

TEST_CASE("invariant suite passes on EX1 and EX3 at universe 2") {
  for (const char* name : {"ex1", "ex3"}) {
    CAPTURE(name);
    Manager mgr;
    DomainSpec spec = testing::load(mgr, name);
    SuiteConfig cfg{2, MpiSchedule{}, 1e-9};
    SuiteReport report = run_invariant_suite(mgr, spec, cfg);
    for (const auto& c : report.checks) {
      CAPTURE(c.detail);
      CHECK_MESSAGE(c.passed, c.name);
    }
  }
}

}  // TEST_SUITE

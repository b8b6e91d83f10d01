// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "support.hpp"

#include "fodd/invariants.hpp"
#include "fodd/oracle.hpp"
#include "fodd/policy.hpp"
#include "fodd/regression.hpp"
#include "fodd/solver.hpp"

using namespace fodd;
using testing::atom;
using testing::q;

namespace {

struct Verdict {
  bool ok = true;
  std::ostringstream note;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) note << "failed: " << what;
    ok = ok && cond;
  }
};

std::set<Rational> leaf_values(const Manager& mgr, NodeRef d) {
  std::set<Rational> out;
  for (NodeRef l : mgr.leaves(d)) out.insert(mgr.leaf_of(l).value);
  return out;
}

std::string rules_text(const std::vector<DecisionRule>& rules) { return format_decision_list(rules); }

// value, action name of the decision-list entry with the given condition
std::optional<std::pair<Rational, std::string>> entry(const std::vector<DecisionRule>& rules,
                                                      const std::string& condition) {
  for (const auto& r : rules)
    if (r.condition == condition) return std::make_pair(r.value, r.action);
  return std::nullopt;
}

bool has_partition(const std::vector<DecisionRule>& rules, const Rational& value, const std::string& action) {
  for (const auto& r : rules)
    if (r.value == value && r.action.rfind(action, 0) == 0) return true;
  return false;
}

// EX1 after one greedy step from R: 10 at the goal, 9 one action away, else 0.
Rational ex1_first_greedy(const Interpretation& s) {
  Rational best = 0;
  for (int o = 0; o < s.universe_size(); ++o) {
    bool p1 = s.holds(atom("p1", o)), p2 = s.holds(atom("p2", o));
    bool q1 = s.holds(atom("q1", o)), q2 = s.holds(atom("q2", o));
    if (p1 && p2) return 10;
    if ((p1 && q2) || (p2 && q1)) best = 9;
  }
  return best;
}

void criterion1(Verdict& v) {
  Manager mgr;
  DomainSpec fig = testing::load(mgr, "fig1");
  Interpretation s = testing::state(3, {atom("p", 0), atom("q", 1), atom("h", 2)});
  Rational got = map_max(mgr, fig.reward, s);
  v.require(got == 1, "MAP = " + to_exact_string(got));
  v.require(testing::naive_map(mgr, fig.reward, s) == 1, "naive oracle disagrees");
  v.note << "MAP of fig1 on {p(1), q(2), h(3)} = " << to_exact_string(got);
}

void criterion2(Verdict& v) {
  Manager mgr;
  DomainSpec spec = testing::load(mgr, "ex1");
  GreedyResult w0 = rel_greedy(mgr, spec, spec.reward);
  for (int n = 1; n <= 2; ++n)
    for (const auto& s : enumerate_states(spec, n))
      if (map_max(mgr, w0.value, s) != ex1_first_greedy(s)) {
        v.require(false, "greedy(R) at " + s.to_string());
        break;
      }
  v.require(leaf_values(mgr, w0.value).count(9) == 1, "leaf 9 missing after reduction");
  PolicyStep w1 = rel_regress_policy(mgr, spec, w0.value, PolicyDiagram{w0.policy, 1});
  v.require(w1.value == w0.value, "regress-policy step is not a fixed point");
  SolveResult r = rmpi(mgr, spec);
  v.require(r.trace.converged, "RMPI did not converge");
  v.require(leaf_values(mgr, r.value) == std::set<Rational>{0, q(81, 10), 9, 10}, "final classes differ");
  double worst = 0;
  for (int n = 1; n <= 2; ++n) {
    GroundMdp m = build_ground_mdp(mgr, spec, n);
    CompareReport rep = compare(mgr, r.value, m, exact_solve(m).values, 1e-9);
    worst = std::max(worst, rep.max_abs_diff);
    v.require(rep.ok(), "RMPI differs from V* at n = " + std::to_string(n));
  }
  if (v.ok) v.note << "EX1 classes {10, 9, 8.1, 0}, fixed point after one regress step, max |V - V*| = " << worst;
}

void criterion3(Verdict& v) {
  Manager mgr;
  DomainSpec spec = testing::load(mgr, "ex2");
  const Rational g = spec.discount;
  GreedyResult w0 = rel_greedy(mgr, spec, spec.reward);
  PolicyDiagram pi{w0.policy, 1};
  auto list0 = decision_list(mgr, spec, w0.policy);
  // partitions of w_1^0 with their hand-derived values and actions
  v.require(has_partition(list0, 20 + 20 * g, "noop"), "missing 20 + 20g (noop)");
  v.require(has_partition(list0, 5 + 20 * g, "A2"), "missing 5 + 20g (A2)");
  v.require(has_partition(list0, 20 * g, "A2"), "missing 20g (A2)");
  v.require(has_partition(list0, 10 + 10 * g, "noop"), "missing 10 + 10g (noop)");
  v.require(has_partition(list0, 10 * g, "A1"), "missing 10g (A1)");
  v.require(has_partition(list0, 5 * g, "A2"), "missing 5g (A2)");
  GroundMdp m = build_ground_mdp(mgr, spec, 1);
  auto ground0 = bellman_backup(m, value_table(mgr, spec.reward, m));
  v.require(value_table(mgr, w0.value, m) == ground0, "w_1^0 differs from the ground backup of R");
  Interpretation only_q1 = testing::state(1, {atom("q1", 0)});
  v.require(map_max(mgr, w0.value, only_q1) == 10 * g, "q1-only state is not 10g");
  v.require(to_string(select_action(mgr, pi, only_q1).action) == "A1(1)", "q1-only state does not pick A1(1)");

  Interpretation s = testing::state(1, {atom("q1", 0), atom("q2", 0)});
  PolicyStep w1 = rel_regress_policy(mgr, spec, w0.value, pi);
  Selection sel = select_action(mgr, w1.policy, s);
  Rational value = map_max(mgr, w1.value, s);
  auto fixed = policy_backup(mgr, pi, m, value_table(mgr, w0.value, m));
  Rational backup = fixed[static_cast<std::size_t>(m.index_of(s))];
  v.require(value == 5 * g + 20 * g * g && value == q(207, 10), "w_1^1(s) = " + to_exact_string(value));
  v.require(to_string(sel.action) == "A2(1)", "select_action = " + to_string(sel.action));
  v.require(backup == 10 * g + 10 * g * g && backup == q(171, 10), "fixed-policy backup = " + to_exact_string(backup));
  v.require(value > backup, "no strict inequality");
  auto list1 = decision_list(mgr, spec, w1.policy.diagram);
  auto e_q2 = entry(list1, "q2(v1)"), e_q1 = entry(list1, "q1(v1)");
  v.require(e_q2 && e_q1 && e_q2->first > e_q1->first, "q2 and q1 partitions did not switch places");
  if (v.ok)
    v.note << "EX2 w_1^1({q1(1), q2(1)}) = " << to_decimal_string(value) << " via " << to_string(sel.action)
           << ", fixed-policy backup " << to_decimal_string(backup);
  else
    std::cerr << rules_text(list1);
}

MpiSchedule suite_schedule() {
  MpiSchedule s;
  s.epsilon = q(1, 10);
  return s;
}

void criterion4(Verdict& v) {
  std::size_t checks = 0;
  for (const char* name : {"ex1", "ex2", "ex3"}) {
    Manager mgr;
    DomainSpec spec = testing::load(mgr, name);
    SuiteReport report = run_invariant_suite(mgr, spec, SuiteConfig{2, suite_schedule(), 1e-9});
    for (const auto& c : report.checks) {
      ++checks;
      v.require(c.passed, std::string(name) + " " + c.name + ": " + c.detail);
    }
  }
  if (v.ok) v.note << checks << " invariant checks on EX1, EX2, EX3 at n = 1, 2 (epsilon 0.1)";
}

void criterion5(Verdict& v) {
  std::size_t checks = 0;
  for (const char* name : {"ex1", "ex3"}) {
    Manager mgr;
    DomainSpec spec = testing::load(mgr, name);
    NodeRef w = rmpi(mgr, spec).value;
    for (int n = 1; n <= 2; ++n) {
      GroundMdp m = build_ground_mdp(mgr, spec, n);
      CheckResult c = check_regression(mgr, spec, w, m);
      ++checks;
      v.require(c.passed, std::string(name) + ": " + c.detail);
    }
  }
  if (v.ok) v.note << "symbolic Q equals the ground backup for EX1, EX3 at n = 1, 2; replacement and combination routes agree";
}

void criterion6(Verdict& v) {
  Manager mgr;
  std::mt19937 rng(2024);
  std::vector<Interpretation> interps;
  for (int n = 1; n <= 2; ++n)
    for (auto& s : enumerate_interpretations(testing::pqh(), n)) interps.push_back(std::move(s));
  int failures = 0;
  for (int i = 0; i < 200; ++i) {
    NodeRef d = testing::random_diagram(mgr, rng, 6);
    NodeRef r = mgr.reduce(d);
    if (mgr.size(r) > mgr.size(d)) ++failures;
    for (const auto& s : interps)
      if (testing::naive_map(mgr, r, s) != testing::naive_map(mgr, d, s)) ++failures;
  }
  v.require(failures == 0, std::to_string(failures) + " failures");
  if (v.ok) v.note << "200 random diagrams over p, q, h; reduce preserves MAP on " << interps.size() << " interpretations";
}

void criterion7(Verdict& v) {
  std::size_t pairs = 0;
  for (const char* name : {"ex1", "ex2", "ex3"}) {
    Manager mgr;
    DomainSpec spec = testing::load(mgr, name);
    MpiSchedule schedule = std::string(name) == "ex1" ? MpiSchedule{} : suite_schedule();
    SolveTrace trace = rmpi(mgr, spec, schedule).trace;
    SolveTrace vi = value_iteration(mgr, spec, schedule.epsilon, schedule.max_outer).trace;
    for (int n = 1; n <= 2; ++n) {
      GroundMdp m = build_ground_mdp(mgr, spec, n);
      for (const SolveTrace* t : {&trace, &vi}) {
        CheckResult c = check_norm_bound(mgr, *t, ground_trace(mgr, *t, m));
        pairs += t->steps.size() - 1;
        v.require(c.passed, std::string(name) + ": " + c.detail);
      }
    }
  }
  if (v.ok) v.note << pairs << " consecutive iterate pairs (RMPI and VI, n = 1, 2) with norm_bound >= sup";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double budget_s;
    std::function<void(Verdict&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, 1, criterion1},  {2, 10, criterion2}, {3, 10, criterion3}, {4, 60, criterion4},
      {5, 60, criterion5}, {6, 30, criterion6}, {7, 120, criterion7},
  };
  bool all = true;
  for (const auto& c : criteria) {
    Verdict v;
    auto start = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= c.budget_s) v.require(false, "runtime over budget");
    all = all && v.ok;
    std::printf("criterion %d: %s  %s (%.2f s, budget %.0f s)\n", c.id, v.ok ? "PASS" : "FAIL", v.note.str().c_str(),
                secs, c.budget_s);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}

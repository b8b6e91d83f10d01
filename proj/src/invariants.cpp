#include "fodd/invariants.hpp"

#include <cmath>
#include <sstream>

namespace fodd {

namespace {

CheckResult make(std::string name, bool ok, std::string detail) {
  return CheckResult{std::move(name), ok, std::move(detail)};
}

std::string at_state(const GroundMdp& m, int generation, std::size_t s, const Rational& got, const Rational& want) {
  std::ostringstream os;
  os << "y^" << generation << " at " << m.states[s].to_string() << ": " << to_decimal_string(got) << " vs "
     << to_decimal_string(want);
  return os.str();
}

std::vector<Rational> backup_with(const GroundMdp& m, const std::vector<int>& actions, const std::vector<Rational>& v) {
  std::vector<Rational> out;
  out.reserve(m.states.size());
  for (std::size_t s = 0; s < m.states.size(); ++s) out.push_back(backup(m, static_cast<int>(s), actions[s], v));
  return out;
}

std::string summary(std::size_t count, const char* what) {
  return std::to_string(count) + " " + what + " checked";
}

}  // namespace

GroundTrace ground_trace(const Manager& mgr, const SolveTrace& trace, const GroundMdp& m) {
  GroundTrace g;
  for (const auto& step : trace.steps) {
    g.values.push_back(value_table(mgr, step.value, m));
    g.actions.push_back(policy_actions(mgr, step.policy, m));
  }
  return g;
}

CheckResult check_greedy_backup(const SolveTrace& trace, const GroundTrace& g, const GroundMdp& m) {
  std::size_t count = 0;
  for (std::size_t k = 1; k < trace.steps.size(); ++k) {
    if (trace.steps[k].kind != StepKind::greedy) continue;
    ++count;
    auto expected = backup_with(m, g.actions[k], g.values[k - 1]);
    for (std::size_t s = 0; s < m.states.size(); ++s)
      if (expected[s] != g.values[k][s])
        return make("greedy-backup", false, at_state(m, static_cast<int>(k), s, g.values[k][s], expected[s]));
  }
  return make("greedy-backup", true, summary(count, "greedy steps"));
}

CheckResult check_bellman(const SolveTrace& trace, const GroundTrace& g, const GroundMdp& m) {
  std::size_t count = 0;
  for (std::size_t k = 1; k < trace.steps.size(); ++k) {
    if (trace.steps[k].kind != StepKind::greedy) continue;
    ++count;
    auto expected = bellman_backup(m, g.values[k - 1]);
    for (std::size_t s = 0; s < m.states.size(); ++s)
      if (expected[s] != g.values[k][s])
        return make("bellman", false, at_state(m, static_cast<int>(k), s, g.values[k][s], expected[s]));
  }
  return make("bellman", true, summary(count, "greedy steps"));
}

CheckResult check_fixed_policy_upper(const SolveTrace& trace, const GroundTrace& g, const GroundMdp& m,
                               StrictWitness* witness) {
  std::size_t count = 0;
  for (std::size_t k = 1; k < trace.steps.size(); ++k) {
    if (trace.steps[k].kind != StepKind::regress_policy) continue;
    ++count;
    auto fixed = backup_with(m, g.actions[k - 1], g.values[k - 1]);
    for (std::size_t s = 0; s < m.states.size(); ++s) {
      if (less(g.values[k][s], fixed[s]))
        return make("fixed-policy-upper", false, at_state(m, static_cast<int>(k), s, g.values[k][s], fixed[s]));
      if (witness && less(fixed[s], g.values[k][s])) {
        Rational gap = g.values[k][s] - fixed[s];
        // earliest generation, then the largest gap
        if (!witness->found || (witness->generation == static_cast<int>(k) && less(witness->value - witness->backup, gap))) {
          *witness = StrictWitness{true, m.universe, static_cast<int>(k), static_cast<int>(s), g.values[k][s], fixed[s]};
        }
      }
    }
  }
  std::string detail = summary(count, "regress-policy steps");
  if (witness && witness->found)
    detail += "; strict at " + at_state(m, witness->generation, static_cast<std::size_t>(witness->state),
                                        witness->value, witness->backup);
  return make("fixed-policy-upper", true, detail);
}

CheckResult check_own_policy_backup(const SolveTrace& trace, const GroundTrace& g, const GroundMdp& m) {
  std::size_t count = 0;
  for (std::size_t k = 1; k < trace.steps.size(); ++k) {
    if (trace.steps[k].kind != StepKind::regress_policy) continue;
    ++count;
    auto own = backup_with(m, g.actions[k], g.values[k - 1]);
    for (std::size_t s = 0; s < m.states.size(); ++s)
      if (own[s] != g.values[k][s])
        return make("own-policy-backup", false, at_state(m, static_cast<int>(k), s, g.values[k][s], own[s]));
  }
  return make("own-policy-backup", true, summary(count, "regress-policy steps"));
}

CheckResult check_rollout_bound(const GroundTrace& g, const GroundMdp& m) {
  std::vector<Rational> u = m.reward;
  for (std::size_t k = 1; k < g.values.size(); ++k) {
    u = backup_with(m, g.actions[k], u);
    for (std::size_t s = 0; s < m.states.size(); ++s)
      if (to_double(u[s]) < to_double(g.values[k][s]) - 1e-9)
        return make("rollout-bound", false, at_state(m, static_cast<int>(k), s, u[s], g.values[k][s]));
  }
  return make("rollout-bound", true, summary(g.values.size() - 1, "rollouts"));
}

CheckResult check_below_optimal(const GroundTrace& g, const OracleSolution& optimal) {
  for (std::size_t k = 0; k < g.values.size(); ++k)
    for (std::size_t s = 0; s < g.values[k].size(); ++s)
      if (to_double(g.values[k][s]) > optimal.values[s] + 1e-9) {
        std::ostringstream os;
        os << "y^" << k << " state " << s << ": " << to_decimal_string(g.values[k][s]) << " > V* "
           << optimal.values[s];
        return make("below-optimal", false, os.str());
      }
  return make("below-optimal", true, summary(g.values.size(), "iterates"));
}

CheckResult check_monotone(const GroundTrace& g) {
  for (std::size_t k = 1; k < g.values.size(); ++k)
    for (std::size_t s = 0; s < g.values[k].size(); ++s)
      if (less(g.values[k][s], g.values[k - 1][s])) {
        std::ostringstream os;
        os << "y^" << k << " state " << s << ": " << to_decimal_string(g.values[k][s]) << " < "
           << to_decimal_string(g.values[k - 1][s]);
        return make("monotone", false, os.str());
      }
  return make("monotone", true, summary(g.values.size() - 1, "consecutive pairs"));
}

CheckResult check_dominates_vi(const Manager& mgr, const SolveTrace& rmpi_trace, const SolveTrace& vi_trace,
                         const GroundMdp& m) {
  std::size_t n = std::min(rmpi_trace.outer_values.size(), vi_trace.outer_values.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto a = value_table(mgr, rmpi_trace.outer_values[i], m);
    auto b = value_table(mgr, vi_trace.outer_values[i], m);
    for (std::size_t s = 0; s < a.size(); ++s)
      if (less(a[s], b[s])) {
        std::ostringstream os;
        os << "V_" << i << " at " << m.states[s].to_string() << ": " << to_decimal_string(a[s]) << " < VI "
           << to_decimal_string(b[s]);
        return make("dominates-vi", false, os.str());
      }
  }
  return make("dominates-vi", true, summary(n, "outer iterates"));
}

CheckResult check_convergence(const Manager& mgr, const SolveResult& result, const OracleSolution& optimal,
                           const GroundMdp& m, const Rational& epsilon) {
  if (!result.trace.converged) return make("convergence", false, "solver hit the iteration cap");
  CompareReport report = compare(mgr, result.value, m, optimal.values, to_double(epsilon) + 1e-9);
  std::ostringstream os;
  os << "max |V - V*| = " << report.max_abs_diff << " (bound " << to_decimal_string(epsilon) << ")";
  if (!report.ok()) os << "; worst at " << m.states[static_cast<std::size_t>(report.offending.front())].to_string();
  return make("convergence", report.ok(), os.str());
}

CheckResult check_reduction(Manager& mgr, const SolveTrace& trace, const GroundMdp& m) {
  for (const auto& step : trace.steps) {
    auto base = value_table(mgr, step.value, m);
    NodeRef reduced = mgr.reduce(step.value);
    if (mgr.size(reduced) > mgr.size(step.value))
      return make("reduction", false, "reduce enlarged y^" + std::to_string(step.generation));
    for (NodeRef variant : {reduced, compact(mgr, step.value)}) {
      auto other = value_table(mgr, variant, m);
      for (std::size_t s = 0; s < base.size(); ++s)
        if (other[s] != base[s])
          return make("reduction", false, at_state(m, step.generation, s, other[s], base[s]));
    }
  }
  return make("reduction", true, summary(trace.steps.size(), "iterates"));
}

CheckResult check_norm_bound(Manager& mgr, const SolveTrace& trace, const GroundTrace& g) {
  for (std::size_t k = 1; k < trace.steps.size(); ++k) {
    Rational bound = norm_bound(mgr, trace.steps[k].value, trace.steps[k - 1].value);
    Rational sup = 0;
    for (std::size_t s = 0; s < g.values[k].size(); ++s) sup = std::max(sup, Rational(abs(g.values[k][s] - g.values[k - 1][s])));
    if (bound < sup)
      return make("norm-bound", false,
                  "y^" + std::to_string(k) + ": bound " + to_decimal_string(bound) + " < sup " + to_decimal_string(sup));
  }
  return make("norm-bound", true, summary(trace.steps.size() - 1, "consecutive pairs"));
}

CheckResult check_regression(Manager& mgr, const DomainSpec& spec, NodeRef v, const GroundMdp& m) {
  std::size_t count = 0;
  for (NodeRef value : {spec.reward, v}) {
    auto table = value_table(mgr, value, m);
    for (const auto& action : spec.actions) {
      QDiagram q = q_function(mgr, spec, value, action);
      QDiagram q_rep = q_function(mgr, spec, value, action, RegressionRoute::replacement);
      Vocabulary vocab = spec.vocabulary();
      if (ground_atom_count(vocab, m.universe) <= default_atom_budget() &&
          !semantic_equal(mgr, q.diagram, q_rep.diagram, vocab, m.universe))
        return make("regression", false, "block replacement and block combination differ for " + action.name);
      CompiledDiagram compiled(mgr, q.diagram);
      for (std::size_t a = 0; a < m.actions.size(); ++a) {
        if (m.actions[a].action != action.name) continue;
        Valuation fixed;
        for (std::size_t i = 0; i < action.params.size(); ++i) fixed[action.params[i]] = m.actions[a].args[i];
        for (std::size_t s = 0; s < m.states.size(); ++s) {
          ++count;
          Rational symbolic = compiled.max_value(m.states[s], fixed);
          Rational ground = backup(m, static_cast<int>(s), static_cast<int>(a), table);
          if (symbolic != ground)
            return make("regression", false,
                        "Q of " + to_string(m.actions[a]) + " at " + m.states[s].to_string() + ": " +
                            to_decimal_string(symbolic) + " vs " + to_decimal_string(ground));
        }
      }
    }
  }
  return make("regression", true, summary(count, "(state, ground action) pairs"));
}

bool SuiteReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

SuiteReport run_invariant_suite(Manager& mgr, const DomainSpec& spec, const SuiteConfig& config) {
  SuiteReport report;
  SolveResult r = rmpi(mgr, spec, config.schedule);
  SolveResult vi = value_iteration(mgr, spec, config.schedule.epsilon, config.schedule.max_outer);
  for (int n = 1; n <= config.universe; ++n) {
    GroundMdp m = build_ground_mdp(mgr, spec, n);
    OracleSolution optimal = exact_solve(m, config.oracle_tol);
    GroundTrace g = ground_trace(mgr, r.trace, m);
    GroundTrace gv = ground_trace(mgr, vi.trace, m);
    StrictWitness witness;
    std::vector<CheckResult> checks{
        check_greedy_backup(r.trace, g, m),
        check_bellman(vi.trace, gv, m),
        check_fixed_policy_upper(r.trace, g, m, &witness),
        check_own_policy_backup(r.trace, g, m),
        check_rollout_bound(g, m),
        check_below_optimal(g, optimal),
        check_monotone(g),
        check_dominates_vi(mgr, r.trace, vi.trace, m),
        check_convergence(mgr, r, optimal, m, config.schedule.epsilon),
        check_reduction(mgr, r.trace, m),
        check_norm_bound(mgr, r.trace, g),
        check_regression(mgr, spec, r.value, m),
    };
    for (auto& c : checks) {
      c.name += "[n=" + std::to_string(n) + "]";
      report.checks.push_back(std::move(c));
    }
    if (!report.witness.found) report.witness = witness;
  }
  return report;
}

}  // namespace fodd

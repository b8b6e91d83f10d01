#include "fodd/solver.hpp"

#include <stdexcept>

namespace fodd {

int MpiSchedule::steps_for(int outer) const {
  if (m.empty()) return 1;
  std::size_t i = static_cast<std::size_t>(std::max(outer, 1) - 1);
  return i < m.size() ? m[i] : m.back();
}

void MpiSchedule::validate() const {
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  if (max_outer < 1) throw std::invalid_argument("the outer iteration cap must be at least 1");
  for (int k : m)
    if (k < 0) throw std::invalid_argument("m-schedule entries must be non-negative");
}

const char* to_string(StepKind kind) {
  switch (kind) {
    case StepKind::initial: return "initial";
    case StepKind::greedy: return "greedy";
    case StepKind::regress_policy: return "regress-policy";
  }
  return "unknown";
}

Rational norm_bound(Manager& mgr, NodeRef a, NodeRef b) {
  return mgr.max_abs_leaf(mgr.apply(ApplyOp::subtract, mgr.strip_tags(a), mgr.strip_tags(b)));
}

Rational stopping_threshold(const Rational& discount, const Rational& epsilon) {
  return epsilon * (1 - discount) / (2 * discount);
}

namespace {

class Run {
 public:
  Run(Manager& mgr, const DomainSpec& spec, const Rational& epsilon) : mgr_(mgr), spec_(spec) {
    result_.trace.threshold = stopping_threshold(spec.discount, epsilon);
    NodeRef v0 = compact(mgr, spec.reward);
    if (mgr.min_leaf(v0) < 0) {
      result_.trace.warnings.push_back("reward has negative leaves; monotonicity of the iterates is not guaranteed");
      GreedyResult g = rel_greedy(mgr, spec, v0);
      if (mgr.min_leaf(mgr.apply(ApplyOp::subtract, g.value, v0)) < 0)
        result_.trace.warnings.push_back("greedy(V_0) >= V_0 could not be established leaf-wise");
    }
    record(StepKind::initial, v0, all_noop_policy(mgr, spec, v0), std::nullopt);
    result_.trace.outer_values.push_back(v0);
    result_.value = v0;
  }

  /// Greedy step against the current V_n; true when the stopping rule fires.
  bool greedy(GreedyResult& out) {
    out = rel_greedy(mgr_, spec_, result_.value);
    ++outer_;
    Rational bound = norm_bound(mgr_, out.value, result_.value);
    record(StepKind::greedy, out.value, PolicyDiagram{out.policy, 0}, bound);
    if (bound <= result_.trace.threshold) {
      result_.policy = result_.trace.steps.back().policy;
      result_.trace.converged = true;
      return true;
    }
    return false;
  }

  void regress(NodeRef& w, PolicyDiagram& p) {
    PolicyStep step = rel_regress_policy(mgr_, spec_, w, p);
    w = step.value;
    p = step.policy;
    record(StepKind::regress_policy, w, p, std::nullopt);
  }

  void advance(NodeRef v) {
    result_.value = v;
    result_.trace.outer_values.push_back(v);
  }

  void give_up() { result_.policy = result_.trace.steps.back().policy; }

  SolveResult take() { return std::move(result_); }

 private:
  void record(StepKind kind, NodeRef value, PolicyDiagram policy, std::optional<Rational> bound) {
    TraceStep step;
    step.generation = static_cast<int>(result_.trace.steps.size());
    step.outer = outer_;
    step.kind = kind;
    step.value = value;
    policy.generation = step.generation;
    step.policy = policy;
    step.nodes = mgr_.size(value);
    step.max_leaf = mgr_.max_leaf(value);
    step.norm_bound = std::move(bound);
    result_.trace.steps.push_back(std::move(step));
  }

  Manager& mgr_;
  const DomainSpec& spec_;
  SolveResult result_;
  int outer_ = 0;
};

}  // namespace

SolveResult rmpi(Manager& mgr, const DomainSpec& spec, const MpiSchedule& schedule) {
  schedule.validate();
  Run run(mgr, spec, schedule.epsilon);
  for (int n = 0; n < schedule.max_outer; ++n) {
    GreedyResult g;
    if (run.greedy(g)) return run.take();
    if (n + 1 == schedule.max_outer) break;
    NodeRef w = g.value;
    PolicyDiagram p{g.policy, 0};
    for (int k = 0; k < schedule.steps_for(n + 1); ++k) run.regress(w, p);
    run.advance(w);
  }
  run.give_up();
  return run.take();
}

SolveResult value_iteration(Manager& mgr, const DomainSpec& spec, const Rational& epsilon, int max_iterations) {
  MpiSchedule check{{0}, epsilon, max_iterations};
  check.validate();
  Run run(mgr, spec, epsilon);
  for (int n = 0; n < max_iterations; ++n) {
    GreedyResult g;
    if (run.greedy(g)) return run.take();
    if (n + 1 < max_iterations) run.advance(g.value);
  }
  run.give_up();
  return run.take();
}

}  // namespace fodd

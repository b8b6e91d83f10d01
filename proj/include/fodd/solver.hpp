#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fodd/policy.hpp"

namespace fodd {

struct MpiSchedule {
  /// m_1, m_2, ...; the last entry repeats.
  std::vector<int> m{1};
  Rational epsilon = Rational(1, 1000);
  int max_outer = 100;

  int steps_for(int outer) const;  // outer is 1-based
  void validate() const;           // throws std::invalid_argument
};

enum class StepKind { initial, greedy, regress_policy };
const char* to_string(StepKind kind);

struct TraceStep {
  int generation = 0;  // index k of y^k
  int outer = 0;       // n of the outer loop
  StepKind kind = StepKind::initial;
  NodeRef value;
  PolicyDiagram policy;
  std::size_t nodes = 0;
  Rational max_leaf;
  std::optional<Rational> norm_bound;  // greedy steps only
};

struct SolveTrace {
  std::vector<TraceStep> steps;        // y^0, y^1, ...
  std::vector<NodeRef> outer_values;   // V_0, V_1, ...
  std::vector<std::string> warnings;
  bool converged = false;
  Rational threshold;
};

struct SolveResult {
  NodeRef value;
  PolicyDiagram policy;
  SolveTrace trace;
};

/// max_abs_leaf(a - b): an upper bound on the state-wise sup difference.
Rational norm_bound(Manager& mgr, NodeRef a, NodeRef b);

/// epsilon * (1 - g) / (2 g)
Rational stopping_threshold(const Rational& discount, const Rational& epsilon);

/// Relational modified policy iteration. V_0 = R, policy no-op; each outer
/// step runs greedy, stops once the norm bound reaches the threshold
/// (returning V_n with the greedy policy), and otherwise applies m_{n+1}
/// regress-policy steps, refreshing the policy at every step.
SolveResult rmpi(Manager& mgr, const DomainSpec& spec, const MpiSchedule& schedule = {});

/// Repeated greedy steps from V_0 = R with the same stopping rule.
SolveResult value_iteration(Manager& mgr, const DomainSpec& spec, const Rational& epsilon, int max_iterations = 100);

}  // namespace fodd

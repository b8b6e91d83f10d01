#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fodd/policy.hpp"

namespace fodd {

/// Explicit MDP over every interpretation of a fixed universe.
struct GroundMdp {
  struct Outcome {
    int state;
    Rational probability;
    double weight;  // probability as double
  };

  int universe = 1;
  std::vector<GroundAtom> atoms;
  std::vector<Interpretation> states;
  std::vector<GroundAction> actions;  // declaration order, tuples lexicographic
  std::vector<std::vector<std::vector<Outcome>>> transitions;  // [state][action]
  std::vector<Rational> reward;
  Rational discount;
  bool absorbing_goal = false;
  std::vector<std::string> constants;

  /// Index of the state with the same true atoms and constant map.
  int index_of(const Interpretation& s) const;
};

/// All interpretations over {1..n} in a fixed order. Throws BudgetError.
std::vector<Interpretation> enumerate_states(const DomainSpec& spec, int n,
                                             std::size_t atom_budget = default_atom_budget());

/// Every ground action of `spec` over a universe of n objects.
std::vector<GroundAction> ground_actions(const DomainSpec& spec, int n);

/// Successor distribution; equal successors are aggregated.
std::vector<std::pair<Interpretation, Rational>> transition(Manager& mgr, const DomainSpec& spec,
                                                           const Interpretation& s, const GroundAction& a);

GroundMdp build_ground_mdp(Manager& mgr, const DomainSpec& spec, int n,
                           std::size_t atom_budget = default_atom_budget());

/// r + discount * E[v(s')], or max(r, discount * E[v(s')]) for absorbing goals.
Rational backup(const GroundMdp& m, int s, int a, const std::vector<Rational>& v);
double backup(const GroundMdp& m, int s, int a, const std::vector<double>& v);

struct OracleSolution {
  std::vector<double> values;
  std::vector<int> policy;  // ground action index per state
  int iterations = 0;
  double residual = 0;
};

/// Value iteration until the Bellman residual is <= tol * (1 - g) / (2 g).
OracleSolution exact_solve(const GroundMdp& m, double tol = 1e-9);

/// map_max of d on every state.
std::vector<Rational> value_table(const Manager& mgr, NodeRef d, const GroundMdp& m);
std::vector<double> to_doubles(const std::vector<Rational>& values);

struct CompareReport {
  double max_abs_diff = 0;
  std::vector<int> offending;  // states with |diff| > tol
  std::vector<double> diffs;   // map_max(d, s) - table(s)
  bool ok() const { return offending.empty(); }
};

CompareReport compare(const Manager& mgr, NodeRef d, const GroundMdp& m, const std::vector<double>& table,
                      double tol);

/// Ground action chosen by select_action on every state.
std::vector<int> policy_actions(const Manager& mgr, const PolicyDiagram& p, const GroundMdp& m);

/// One-step backup of w under the ground policy induced by p.
std::vector<Rational> policy_backup(const Manager& mgr, const PolicyDiagram& p, const GroundMdp& m,
                                    const std::vector<Rational>& w);

/// Greedy one-step backup: max over all ground actions.
std::vector<Rational> bellman_backup(const GroundMdp& m, const std::vector<Rational>& w);

/// Value of the stationary ground policy induced by p, by iterative
/// evaluation to the same tolerance rule as exact_solve.
std::vector<double> policy_value_oracle(const Manager& mgr, const PolicyDiagram& p, const GroundMdp& m,
                                        double tol = 1e-9);

/// Executes action tables[k-1], ..., tables[0] for k = tables.size() steps
/// and collects the reward of the final state: U_0 = r,
/// U_j = backup(U_{j-1}) under tables[j-1]. Exact.
std::vector<Rational> nonstationary_value(const GroundMdp& m, const std::vector<std::vector<int>>& tables);

/// Structured text: one line per state with its atoms, value and action.
std::string dump(const GroundMdp& m, const std::vector<double>& values, const std::vector<int>& policy);

}  // namespace fodd

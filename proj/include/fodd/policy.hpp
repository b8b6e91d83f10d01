#pragma once

#include <string>
#include <vector>

#include "fodd/regression.hpp"

namespace fodd {

/// Diagram whose leaves all carry (value, action tag), plus the index of
/// the value-function generation that produced it.
struct PolicyDiagram {
  NodeRef diagram;
  int generation = 0;
};

struct GroundAction {
  std::string action;
  std::vector<int> args;  // objects, 0-based

  auto operator<=>(const GroundAction&) const = default;
  bool operator==(const GroundAction&) const = default;
};

/// "A2(1)" with 1-based objects; "noop" without parentheses for 0-ary.
std::string to_string(const GroundAction& action);

struct Selection {
  GroundAction action;
  Rational value;
};

/// Action of a maximizing leaf. Ties: smallest leaf NodeRef, then the
/// lexicographically smallest valuation.
Selection select_action(const Manager& mgr, const PolicyDiagram& p, const Interpretation& s);
Selection select_action(const Manager& mgr, const CompiledDiagram& policy, const Interpretation& s);

struct PolicyStep {
  NodeRef value;
  PolicyDiagram policy;
};

/// One regress-policy step: every decision-list partition C -> A(y) of p
/// (see decision_list) contributes C & Q^A_w[params := y]; the max over
/// partitions is compacted as value and as policy. Partitions overlap, so
/// a state can take the regressed value of a partition that p itself did
/// not select. Throws Error when `w` is not the value view of `p` or a
/// leaf has no tag.
PolicyStep rel_regress_policy(Manager& mgr, const DomainSpec& spec, NodeRef w, const PolicyDiagram& p);

/// v with every leaf tagged no-op.
PolicyDiagram all_noop_policy(Manager& mgr, const DomainSpec& spec, NodeRef v);

struct DecisionRule {
  std::string condition;
  Rational value;
  std::string action;
};

/// Rules sorted by value descending; the last rule ("true") is the default.
std::vector<DecisionRule> decision_list(const Manager& mgr, const DomainSpec& spec, NodeRef policy);

/// One line per rule: "<condition> -> <value> (<action>)".
std::string format_decision_list(const std::vector<DecisionRule>& rules);

}  // namespace fodd

#pragma once

#include <string>
#include <vector>

#include "fodd/domain.hpp"
#include "fodd/rules.hpp"

namespace fodd {

/// Q-function of one action schema. Leaves are tagged with the schema
/// A(x1..xn); the action parameters are free variables of `diagram`.
struct QDiagram {
  std::string action;
  std::vector<std::string> params;
  NodeRef diagram;
};

enum class RegressionRoute {
  combination,  // bottom-up if-then-else over instantiated TVDs
  replacement,  // graft TVDs in place, then re-normalize (cross-check only)
};

/// Value after executing the deterministic alternative `alt` of `action`
/// with arguments `action_args`. `v` must not share variables with the
/// action arguments. Equality labels pass through unchanged.
NodeRef regress_deterministic(Manager& mgr, const DomainSpec& spec, NodeRef v, const ActionModel& action,
                              const Alternative& alt, const std::vector<Term>& action_args,
                              RegressionRoute route = RegressionRoute::combination);

/// R + discount * sum_j prob_j * regress(v, A_j), or in absorbing-goal mode
/// max(R, discount * sum_j ...). R and every regressed copy of v are
/// standardized apart; only the action parameters are shared.
QDiagram q_function(Manager& mgr, const DomainSpec& spec, NodeRef v, const ActionModel& action,
                    RegressionRoute route = RegressionRoute::combination);

/// Renames the action parameters to fresh variables so that max
/// aggregation also ranges over the action's arguments.
NodeRef object_max(Manager& mgr, const QDiagram& q);

/// Tag-aware compaction used for every policy diagram of `spec`.
CompactOptions policy_compact_options(const DomainSpec& spec);

struct GreedyResult {
  NodeRef value;   // untagged
  NodeRef policy;  // every leaf tagged
};

/// max over all actions of object_max(Q^A_v). Ties keep the earlier action
/// in the fold (no-op first, then declaration order).
GreedyResult rel_greedy(Manager& mgr, const DomainSpec& spec, NodeRef v);

}  // namespace fodd

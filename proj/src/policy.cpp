#include "fodd/policy.hpp"

#include <map>
#include <sstream>

#include "fodd/error.hpp"

namespace fodd {

std::string to_string(const GroundAction& action) {
  if (action.args.empty()) return action.action;
  std::string out = action.action + "(";
  for (std::size_t i = 0; i < action.args.size(); ++i) out += (i ? "," : "") + std::to_string(action.args[i] + 1);
  return out + ")";
}

Selection select_action(const Manager& mgr, const PolicyDiagram& p, const Interpretation& s) {
  return select_action(mgr, CompiledDiagram(mgr, p.diagram), s);
}

Selection select_action(const Manager& mgr, const CompiledDiagram& policy, const Interpretation& s) {
  MaxWitness w = policy.max(s);
  const Leaf& leaf = mgr.leaf_of(w.leaf);
  if (!leaf.tag) throw Error("policy leaf " + to_exact_string(leaf.value) + " has no action tag");
  GroundAction action{leaf.tag->action, {}};
  for (const Term& t : leaf.tag->args) {
    if (t.is_variable()) {
      action.args.push_back(w.valuation.at(t.name));
    } else {
      auto object = s.constant(t.name);
      if (!object) throw EvaluationError("constant '" + t.name + "' is not mapped");
      action.args.push_back(*object);
    }
  }
  return Selection{std::move(action), w.value};
}

PolicyStep rel_regress_policy(Manager& mgr, const DomainSpec& spec, NodeRef w, const PolicyDiagram& p) {
  if (compact(mgr, w) != compact(mgr, mgr.strip_tags(p.diagram)))
    throw Error("regress-policy called with a value function that is not the policy's value view");
  // Each decision-list partition of the policy is regressed through its
  // own action on its own: partitions overlap, so a state may pick up the
  // regressed value of a partition that lost the max in p. The result is
  // the max over (partition, Q rule) pairs. Q rules are compacted with the
  // action parameters fixed, which keeps the maximum for each binding.
  CompactOptions options = policy_compact_options(spec);
  RuleSet partitions = compact_rules(mgr, p.diagram, options);
  partitions.rules.push_back(Rule{{}, partitions.default_value, options.default_tag});
  std::map<std::string, std::vector<Rule>> q_rules;
  std::vector<Rule> rules;
  for (const Rule& path : partitions.rules) {
    if (!path.tag) throw Error("policy leaf " + to_exact_string(path.value) + " has no action tag");
    const ActionTag& tag = *path.tag;
    const ActionModel* action = spec.find_action(tag.action);
    if (!action) throw Error("policy refers to unknown action " + tag.action);
    if (action->params.size() != tag.args.size()) throw Error("policy tag " + to_string(tag) + " has wrong arity");
    auto it = q_rules.find(action->name);
    if (it == q_rules.end()) {
      CompactOptions fixed = options;
      fixed.fold_default = false;
      fixed.frozen.insert(action->params.begin(), action->params.end());
      NodeRef q = q_function(mgr, spec, w, *action).diagram;
      it = q_rules.emplace(action->name, compact_rules(mgr, q, fixed).rules).first;
    }
    for (const Rule& qr : it->second) {
      Binding binding;
      for (std::size_t i = 0; i < tag.args.size(); ++i) binding.emplace(action->params[i], tag.args[i]);
      for (const auto& v : variables_of(qr))
        if (!binding.count(v)) binding.emplace(v, Term::variable(mgr.fresh_variable()));
      Rule joint = rename_variables(qr, binding);
      joint.literals.insert(joint.literals.end(), path.literals.begin(), path.literals.end());
      if (auto s = simplify_rule(std::move(joint))) rules.push_back(std::move(*s));
    }
  }
  NodeRef policy = build_from_rules(mgr, compact_rule_list(std::move(rules), options), options);
  NodeRef value = compact(mgr, mgr.strip_tags(policy));
  return PolicyStep{value, PolicyDiagram{policy, p.generation + 1}};
}

PolicyDiagram all_noop_policy(Manager& mgr, const DomainSpec& spec, NodeRef v) {
  return PolicyDiagram{compact(mgr, mgr.tag_leaves(mgr.strip_tags(v), noop_tag()), policy_compact_options(spec)), 0};
}

std::vector<DecisionRule> decision_list(const Manager& mgr, const DomainSpec& spec, NodeRef policy) {
  CompactOptions options = policy_compact_options(spec);
  RuleSet rules = compact_rules(mgr, policy, options);
  std::vector<DecisionRule> out;
  for (const Rule& r : rules.rules)
    out.push_back({condition_string(r.literals), r.value, r.tag ? to_string(*r.tag) : std::string(kNoopAction)});
  out.push_back({"true", rules.default_value, to_string(options.default_tag)});
  return out;
}

std::string format_decision_list(const std::vector<DecisionRule>& rules) {
  std::ostringstream os;
  for (const auto& r : rules) os << r.condition << " -> " << to_decimal_string(r.value) << " (" << r.action << ")\n";
  return os.str();
}

}  // namespace fodd

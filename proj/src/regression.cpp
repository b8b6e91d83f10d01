#include "fodd/regression.hpp"

#include <map>
#include <optional>
#include <unordered_map>

#include "fodd/error.hpp"

namespace fodd {

namespace {

NodeRef instantiated_tvd(Manager& mgr, const DomainSpec& spec, const ActionModel& action, const Alternative& alt,
                         const Label& label, const std::vector<Term>& action_args) {
  Tvd tvd = spec.tvd(mgr, action, alt, label.predicate);
  return instantiate_tvd(mgr, tvd, label.args, action_args);
}

NodeRef regress_combination(Manager& mgr, const DomainSpec& spec, NodeRef v, const ActionModel& action,
                            const Alternative& alt, const std::vector<Term>& action_args) {
  std::unordered_map<std::uint32_t, NodeRef> memo;
  std::function<NodeRef(NodeRef)> rec = [&](NodeRef x) -> NodeRef {
    if (mgr.is_leaf(x)) return x;
    if (auto it = memo.find(x.index); it != memo.end()) return it->second;
    NodeRef hi = rec(mgr.hi(x));
    NodeRef lo = rec(mgr.lo(x));
    const Label& label = mgr.label_of(x);
    NodeRef cond = label.is_atom() ? instantiated_tvd(mgr, spec, action, alt, label, action_args)
                                   : mgr.indicator(label);
    NodeRef out = mgr.ite(cond, hi, lo);
    memo.emplace(x.index, out);
    return out;
  };
  return rec(v);
}

// Unordered graph produced by grafting TVDs into v without reordering.
class RawGraph {
 public:
  struct Node {
    bool leaf = false;
    NodeRef value;
    Label label;
    int hi = -1, lo = -1;
  };

  int add_leaf(NodeRef value) {
    nodes_.push_back({true, value, {}, -1, -1});
    return static_cast<int>(nodes_.size()) - 1;
  }
  int add_inner(const Label& label, int hi, int lo) {
    nodes_.push_back({false, {}, label, hi, lo});
    return static_cast<int>(nodes_.size()) - 1;
  }
  const Node& at(int i) const { return nodes_[static_cast<std::size_t>(i)]; }

  /// Shannon expansion over the smallest label still reachable under the
  /// partial assignment; yields the canonical ordered diagram.
  NodeRef normalize(Manager& mgr, int root) {
    std::map<Label, bool> assignment;
    return expand(mgr, root, assignment);
  }

 private:
  int follow(int i, const std::map<Label, bool>& assignment) const {
    while (!at(i).leaf) {
      auto it = assignment.find(at(i).label);
      if (it == assignment.end()) break;
      i = it->second ? at(i).hi : at(i).lo;
    }
    return i;
  }

  std::optional<Label> smallest_open(int root, const std::map<Label, bool>& assignment) const {
    std::optional<Label> best;
    std::vector<int> stack{root};
    std::vector<char> seen(nodes_.size(), 0);
    while (!stack.empty()) {
      int i = follow(stack.back(), assignment);
      stack.pop_back();
      if (seen[static_cast<std::size_t>(i)] || at(i).leaf) continue;
      seen[static_cast<std::size_t>(i)] = 1;
      if (!best || at(i).label < *best) best = at(i).label;
      stack.push_back(at(i).hi);
      stack.push_back(at(i).lo);
    }
    return best;
  }

  NodeRef expand(Manager& mgr, int root, std::map<Label, bool>& assignment) {
    int start = follow(root, assignment);
    if (at(start).leaf) return at(start).value;
    Label label = *smallest_open(start, assignment);
    assignment[label] = true;
    NodeRef hi = expand(mgr, start, assignment);
    assignment[label] = false;
    NodeRef lo = expand(mgr, start, assignment);
    assignment.erase(label);
    return mgr.mk_node(label, hi, lo);
  }

  std::vector<Node> nodes_;
};

NodeRef regress_replacement(Manager& mgr, const DomainSpec& spec, NodeRef v, const ActionModel& action,
                            const Alternative& alt, const std::vector<Term>& action_args) {
  RawGraph raw;
  std::unordered_map<std::uint32_t, int> memo;
  std::function<int(NodeRef, int, int)> graft = [&](NodeRef t, int hi, int lo) -> int {
    if (mgr.is_leaf(t)) return mgr.leaf_of(t).value == 1 ? hi : lo;
    return raw.add_inner(mgr.label_of(t), graft(mgr.hi(t), hi, lo), graft(mgr.lo(t), hi, lo));
  };
  std::function<int(NodeRef)> rec = [&](NodeRef x) -> int {
    if (auto it = memo.find(x.index); it != memo.end()) return it->second;
    int out;
    if (mgr.is_leaf(x)) {
      out = raw.add_leaf(x);
    } else {
      int hi = rec(mgr.hi(x));
      int lo = rec(mgr.lo(x));
      const Label& label = mgr.label_of(x);
      out = label.is_atom() ? graft(instantiated_tvd(mgr, spec, action, alt, label, action_args), hi, lo)
                            : raw.add_inner(label, hi, lo);
    }
    memo.emplace(x.index, out);
    return out;
  };
  return raw.normalize(mgr, rec(v));
}

std::vector<Term> parameter_terms(const ActionModel& action) {
  std::vector<Term> out;
  for (const auto& p : action.params) out.push_back(Term::variable(p));
  return out;
}

}  // namespace

NodeRef regress_deterministic(Manager& mgr, const DomainSpec& spec, NodeRef v, const ActionModel& action,
                              const Alternative& alt, const std::vector<Term>& action_args, RegressionRoute route) {
  auto vars = mgr.variables(v);
  for (const auto& t : action_args)
    if (t.is_variable() && vars.count(t.name))
      throw CaptureError("value diagram shares variable '" + t.name + "' with the action arguments");
  return route == RegressionRoute::combination ? regress_combination(mgr, spec, v, action, alt, action_args)
                                               : regress_replacement(mgr, spec, v, action, alt, action_args);
}

QDiagram q_function(Manager& mgr, const DomainSpec& spec, NodeRef v, const ActionModel& action,
                    RegressionRoute route) {
  std::vector<Term> args = parameter_terms(action);
  NodeRef expected = mgr.zero();
  for (const auto& alt : action.alternatives) {
    NodeRef copy = mgr.standardize_apart(mgr.strip_tags(v));
    NodeRef regressed = regress_deterministic(mgr, spec, copy, action, alt, args, route);
    expected = mgr.apply(ApplyOp::add, expected, mgr.apply(ApplyOp::multiply, alt.probability, regressed));
  }
  NodeRef discounted = mgr.scale(expected, spec.discount);
  NodeRef reward = mgr.standardize_apart(spec.reward);
  NodeRef q = spec.absorbing_goal ? mgr.apply(ApplyOp::max, reward, discounted)
                                  : mgr.apply(ApplyOp::add, reward, discounted);
  q = mgr.tag_leaves(mgr.reduce(q), action.schema());
  return QDiagram{action.name, action.params, q};
}

NodeRef object_max(Manager& mgr, const QDiagram& q) {
  Binding binding;
  for (const auto& p : q.params) binding.emplace(p, Term::variable(mgr.fresh_variable()));
  return mgr.substitute(q.diagram, binding);
}

CompactOptions policy_compact_options(const DomainSpec& spec) {
  CompactOptions options;
  options.keep_tags = true;
  options.tag_rank = [&spec](const ActionTag& tag) { return spec.tag_rank(tag); };
  options.default_tag = noop_tag();
  return options;
}

GreedyResult rel_greedy(Manager& mgr, const DomainSpec& spec, NodeRef v) {
  std::vector<const ActionModel*> order{&spec.noop()};
  for (const auto& a : spec.actions)
    if (a.name != kNoopAction) order.push_back(&a);
  // max aggregation distributes over pointwise max, so the rules of the
  // combined diagram are the union of the per-action rules
  std::vector<Rule> rules;
  Rational noop_floor;
  for (const ActionModel* a : order) {
    NodeRef q = object_max(mgr, q_function(mgr, spec, v, *a));
    if (a == order.front()) noop_floor = mgr.min_leaf(q);
    for (Rule& r : path_rules(mgr, q)) rules.push_back(std::move(r));
  }
  Rational floor = noop_floor;
  for (const Rule& r : rules) floor = std::min(floor, r.value);
  CompactOptions options = policy_compact_options(spec);
  options.default_covers = noop_floor == floor;
  NodeRef policy = build_from_rules(mgr, compact_rule_list(std::move(rules), options), options);
  NodeRef value = compact(mgr, mgr.strip_tags(policy));
  return GreedyResult{value, policy};
}

}  // namespace fodd

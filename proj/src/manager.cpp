#include "fodd/manager.hpp"

#include <algorithm>
#include <sstream>

#include "fodd/error.hpp"

namespace fodd {

namespace {

std::string leaf_key(const Rational& value, const std::optional<ActionTag>& tag) {
  std::string key = to_exact_string(value);
  if (tag) key += "|" + to_string(*tag);
  return key;
}

Term apply_binding(const Term& t, const Binding& binding) {
  if (!t.is_variable()) return t;
  auto it = binding.find(t.name);
  return it == binding.end() ? t : it->second;
}

bool is_untagged(const Leaf& leaf, int value) { return !leaf.tag && leaf.value == value; }

}  // namespace

Manager::Manager() {
  nodes_.reserve(1024);
  zero();
  one();
}

std::uint32_t Manager::intern_label(const Label& label) {
  auto [it, inserted] = label_index_.try_emplace(label, static_cast<std::uint32_t>(label_table_.size()));
  if (inserted) label_table_.push_back(label);
  return it->second;
}

NodeRef Manager::leaf(const Rational& value, std::optional<ActionTag> tag) {
  std::string key = leaf_key(value, tag);
  if (auto it = leaf_nodes_.find(key); it != leaf_nodes_.end()) return it->second;
  auto leaf_id = static_cast<std::uint32_t>(leaf_table_.size());
  leaf_table_.push_back(Leaf{value, std::move(tag)});
  NodeRef ref{static_cast<std::uint32_t>(nodes_.size())};
  nodes_.push_back(Node{true, leaf_id, 0, {}, {}});
  leaf_nodes_.emplace(std::move(key), ref);
  return ref;
}

NodeRef Manager::mk_node(const Label& label, NodeRef hi, NodeRef lo) {
  if (label.is_trivial()) throw OrderError("trivial equality " + to_string(label) + " used as a node label");
  if (hi == lo) return hi;
  for (NodeRef child : {hi, lo}) {
    if (!is_leaf(child) && !(label < label_of(child)))
      throw OrderError("label order violation: " + to_string(label) + " must precede child label " +
                       to_string(label_of(child)));
  }
  std::uint32_t label_id = intern_label(label);
  auto key = std::make_tuple(label_id, hi.index, lo.index);
  if (auto it = unique_.find(key); it != unique_.end()) return it->second;
  NodeRef ref{static_cast<std::uint32_t>(nodes_.size())};
  nodes_.push_back(Node{false, 0, label_id, hi, lo});
  unique_.emplace(key, ref);
  return ref;
}

NodeRef Manager::indicator(const Label& label) {
  if (label.is_trivial()) return one();
  return mk_node(label, one(), zero());
}

bool Manager::is_leaf(NodeRef d) const { return nodes_.at(d.index).is_leaf; }

const Leaf& Manager::leaf_of(NodeRef d) const {
  const Node& n = nodes_.at(d.index);
  if (!n.is_leaf) throw Error("leaf_of called on an inner node");
  return leaf_table_[n.leaf_id];
}

const Label& Manager::label_of(NodeRef d) const {
  const Node& n = nodes_.at(d.index);
  if (n.is_leaf) throw Error("label_of called on a leaf");
  return label_table_[n.label_id];
}

NodeRef Manager::hi(NodeRef d) const { return nodes_.at(d.index).hi; }
NodeRef Manager::lo(NodeRef d) const { return nodes_.at(d.index).lo; }

NodeRef Manager::apply_leaves(ApplyOp op, NodeRef a, NodeRef b) {
  const Leaf& la = leaf_of(a);
  const Leaf& lb = leaf_of(b);
  switch (op) {
    case ApplyOp::add:
      if (is_untagged(la, 0)) return b;
      if (is_untagged(lb, 0)) return a;
      return leaf(la.value + lb.value, la.tag ? la.tag : lb.tag);
    case ApplyOp::subtract:
      return leaf(la.value - lb.value, la.tag ? la.tag : lb.tag);
    case ApplyOp::multiply:
      if (is_untagged(la, 0) || is_untagged(lb, 0)) return zero();
      if (is_untagged(la, 1)) return b;
      if (is_untagged(lb, 1)) return a;
      return leaf(la.value * lb.value, la.tag ? la.tag : lb.tag);
    case ApplyOp::max:
      return less(la.value, lb.value) ? b : a;
    case ApplyOp::min:
      return less(lb.value, la.value) ? b : a;
  }
  return a;
}

NodeRef Manager::apply(ApplyOp op, NodeRef a, NodeRef b) {
  if (is_leaf(a) && is_leaf(b)) return apply_leaves(op, a, b);
  auto key = std::make_tuple(static_cast<std::uint32_t>(op), a.index, b.index);
  if (auto it = apply_cache_.find(key); it != apply_cache_.end()) return it->second;

  const Label* top = nullptr;
  if (!is_leaf(a)) top = &label_of(a);
  if (!is_leaf(b) && (top == nullptr || label_of(b) < *top)) top = &label_of(b);
  Label label = *top;  // copy: the label table may grow during recursion
  bool a_top = !is_leaf(a) && label_of(a) == label;
  bool b_top = !is_leaf(b) && label_of(b) == label;
  NodeRef a_hi = a_top ? hi(a) : a, a_lo = a_top ? lo(a) : a;
  NodeRef b_hi = b_top ? hi(b) : b, b_lo = b_top ? lo(b) : b;
  NodeRef h = apply(op, a_hi, b_hi);
  NodeRef l = apply(op, a_lo, b_lo);
  NodeRef result = mk_node(label, h, l);
  apply_cache_.emplace(key, result);
  return result;
}

NodeRef Manager::ite(NodeRef c, NodeRef h, NodeRef l) {
  if (is_leaf(c)) {
    const Leaf& lc = leaf_of(c);
    if (lc.value == 1) return h;
    if (lc.value == 0) return l;
    throw Error("ite condition has non-{0,1} leaf " + to_exact_string(lc.value));
  }
  if (h == l) return h;
  auto key = std::make_tuple(c.index, h.index, l.index);
  if (auto it = ite_cache_.find(key); it != ite_cache_.end()) return it->second;

  Label label = label_of(c);
  for (NodeRef x : {h, l})
    if (!is_leaf(x) && label_of(x) < label) label = label_of(x);
  auto cof = [&](NodeRef x, bool branch) {
    if (is_leaf(x) || !(label_of(x) == label)) return x;
    return branch ? hi(x) : lo(x);
  };
  NodeRef t = ite(cof(c, true), cof(h, true), cof(l, true));
  NodeRef f = ite(cof(c, false), cof(h, false), cof(l, false));
  NodeRef result = mk_node(label, t, f);
  ite_cache_.emplace(key, result);
  return result;
}

NodeRef Manager::scale(NodeRef d, const Rational& factor) {
  return map_leaves(d, [&](const Leaf& leaf_value) { return leaf(leaf_value.value * factor, leaf_value.tag); });
}

NodeRef Manager::map_leaves(NodeRef d, const std::function<NodeRef(const Leaf&)>& fn) {
  std::unordered_map<std::uint32_t, NodeRef> memo;
  std::function<NodeRef(NodeRef)> rec = [&](NodeRef x) -> NodeRef {
    if (auto it = memo.find(x.index); it != memo.end()) return it->second;
    NodeRef result;
    if (is_leaf(x)) {
      result = fn(leaf_of(x));
    } else {
      Label label = label_of(x);
      NodeRef h = rec(hi(x));
      NodeRef l = rec(lo(x));
      // fn may return arbitrary diagrams, so rebuild through ite
      result = ite(indicator(label), h, l);
    }
    memo.emplace(x.index, result);
    return result;
  };
  return rec(d);
}

NodeRef Manager::tag_leaves(NodeRef d, const ActionTag& tag) {
  return map_leaves(d, [&](const Leaf& l) { return leaf(l.value, tag); });
}

NodeRef Manager::strip_tags(NodeRef d) {
  return map_leaves(d, [&](const Leaf& l) { return leaf(l.value); });
}

NodeRef Manager::substitute_impl(NodeRef d, const Binding& binding) {
  std::unordered_map<std::uint32_t, NodeRef> memo;
  std::function<NodeRef(NodeRef)> rec = [&](NodeRef x) -> NodeRef {
    if (auto it = memo.find(x.index); it != memo.end()) return it->second;
    NodeRef result;
    if (is_leaf(x)) {
      Leaf l = leaf_of(x);
      if (l.tag)
        for (Term& t : l.tag->args) t = apply_binding(t, binding);
      result = leaf(l.value, l.tag);
    } else {
      Label label = label_of(x);
      for (Term& t : label.args) t = apply_binding(t, binding);
      if (label.is_equality()) label = Label::equality(label.args[0], label.args[1]);
      NodeRef h = rec(hi(x));
      NodeRef l = rec(lo(x));
      result = label.is_trivial() ? h : ite(indicator(label), h, l);
    }
    memo.emplace(x.index, result);
    return result;
  };
  return rec(d);
}

NodeRef Manager::substitute(NodeRef d, const Binding& binding) {
  if (binding.empty()) return d;
  auto vars = variables(d);
  for (const auto& [from, to] : binding) {
    if (!to.is_variable() || to.name == from) continue;
    if (vars.count(to.name) && !binding.count(to.name))
      throw CaptureError("substituting " + from + " by " + to.name + " would capture variable " + to.name);
  }
  return substitute_impl(d, binding);
}

NodeRef Manager::substitute_unchecked(NodeRef d, const Binding& binding) {
  if (binding.empty()) return d;
  return substitute_impl(d, binding);
}

std::string Manager::fresh_variable() { return "_" + std::to_string(++fresh_counter_); }

NodeRef Manager::standardize_apart(NodeRef d, const std::set<std::string>& reserved) {
  Binding binding;
  for (const auto& v : variables(d))
    if (!reserved.count(v)) binding.emplace(v, Term::variable(fresh_variable()));
  return substitute_unchecked(d, binding);
}

NodeRef Manager::reduce_impl(NodeRef d, std::unordered_map<std::uint32_t, NodeRef>& memo) {
  if (is_leaf(d)) return d;
  if (auto it = memo.find(d.index); it != memo.end()) return it->second;
  Label label = label_of(d);
  NodeRef h = reduce_impl(hi(d), memo);
  NodeRef l = reduce_impl(lo(d), memo);
  if (label.is_equality() && (label.left().is_variable() || label.right().is_variable())) {
    // left < right and variables sort first, so a variable right term is the later one
    Binding binding;
    if (label.right().is_variable())
      binding.emplace(label.right().name, label.left());
    else
      binding.emplace(label.left().name, label.right());
    NodeRef substituted = substitute_unchecked(h, binding);
    if (substituted != h) h = reduce_impl(substituted, memo);
  }
  NodeRef result = ite(indicator(label), h, l);
  memo.emplace(d.index, result);
  return result;
}

NodeRef Manager::reduce(NodeRef d) {
  NodeRef result = reduce_impl(d, reduce_cache_);
  return size(result) <= size(d) ? result : d;
}

std::vector<NodeRef> Manager::reachable(NodeRef d) const {
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<NodeRef> stack{d};
  std::vector<NodeRef> out;
  while (!stack.empty()) {
    NodeRef x = stack.back();
    stack.pop_back();
    if (seen[x.index]) continue;
    seen[x.index] = 1;
    out.push_back(x);
    if (!is_leaf(x)) {
      stack.push_back(hi(x));
      stack.push_back(lo(x));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeRef> Manager::leaves(NodeRef d) const {
  std::vector<NodeRef> out;
  for (NodeRef x : reachable(d))
    if (is_leaf(x)) out.push_back(x);
  return out;
}

Rational Manager::max_abs_leaf(NodeRef d) const {
  Rational best = 0;
  for (NodeRef x : leaves(d)) best = std::max<Rational>(best, abs(leaf_of(x).value));
  return best;
}

Rational Manager::min_leaf(NodeRef d) const {
  auto ls = leaves(d);
  Rational best = leaf_of(ls.front()).value;
  for (NodeRef x : ls)
    if (less(leaf_of(x).value, best)) best = leaf_of(x).value;
  return best;
}

Rational Manager::max_leaf(NodeRef d) const {
  auto ls = leaves(d);
  Rational best = leaf_of(ls.front()).value;
  for (NodeRef x : ls)
    if (less(best, leaf_of(x).value)) best = leaf_of(x).value;
  return best;
}

std::set<std::string> Manager::variables(NodeRef d) const {
  std::set<std::string> out;
  for (NodeRef x : reachable(d)) {
    const std::vector<Term>* args = nullptr;
    if (is_leaf(x)) {
      if (leaf_of(x).tag) args = &leaf_of(x).tag->args;
    } else {
      args = &label_of(x).args;
    }
    if (args)
      for (const Term& t : *args)
        if (t.is_variable()) out.insert(t.name);
  }
  return out;
}

std::set<std::string> Manager::constants(NodeRef d) const {
  std::set<std::string> out;
  for (NodeRef x : reachable(d)) {
    const std::vector<Term>* args = nullptr;
    if (is_leaf(x)) {
      if (leaf_of(x).tag) args = &leaf_of(x).tag->args;
    } else {
      args = &label_of(x).args;
    }
    if (args)
      for (const Term& t : *args)
        if (t.is_constant()) out.insert(t.name);
  }
  return out;
}

std::set<Label> Manager::labels(NodeRef d) const {
  std::set<Label> out;
  for (NodeRef x : reachable(d))
    if (!is_leaf(x)) out.insert(label_of(x));
  return out;
}

void Manager::audit() const {
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, std::uint32_t> seen;
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.is_leaf) continue;
    if (n.hi == n.lo) throw Error("audit: node " + std::to_string(i) + " has identical children");
    if (n.hi.index >= i || n.lo.index >= i)
      throw Error("audit: node " + std::to_string(i) + " references a later node");
    const Label& label = label_table_[n.label_id];
    for (NodeRef c : {n.hi, n.lo}) {
      if (!nodes_[c.index].is_leaf && !(label < label_table_[nodes_[c.index].label_id]))
        throw Error("audit: order violation at node " + std::to_string(i));
    }
    auto key = std::make_tuple(n.label_id, n.hi.index, n.lo.index);
    if (!seen.emplace(key, i).second) throw Error("audit: duplicate node " + std::to_string(i));
  }
}

}  // namespace fodd

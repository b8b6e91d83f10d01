#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "fodd/rational.hpp"
#include "fodd/term.hpp"

namespace fodd {

/// Handle to a node in a Manager's store. Only meaningful together with
/// the Manager that created it.
struct NodeRef {
  std::uint32_t index = 0;

  auto operator<=>(const NodeRef&) const = default;
  bool operator==(const NodeRef&) const = default;
};

struct Leaf {
  Rational value;
  std::optional<ActionTag> tag;
};

enum class ApplyOp { add, subtract, multiply, max, min };

/// Variable -> replacement term.
using Binding = std::map<std::string, Term>;

/// Append-only, hash-consed store of ordered FODD nodes.
///
/// Every node is canonical: inner nodes never have identical children, and
/// structurally equal nodes share one NodeRef. Along every path labels are
/// strictly increasing in the global label order. Construction is not
/// thread-safe; concurrent readers are fine once construction stops.
class Manager {
 public:
  Manager();

  Manager(const Manager&) = delete;
  Manager& operator=(const Manager&) = delete;

  // -- construction ---------------------------------------------------------

  NodeRef leaf(const Rational& value, std::optional<ActionTag> tag = std::nullopt);
  NodeRef zero() { return leaf(0); }
  NodeRef one() { return leaf(1); }

  /// Canonical constructor. Returns hi when hi == lo. Throws OrderError
  /// when `label` does not strictly precede the root labels of hi and lo.
  NodeRef mk_node(const Label& label, NodeRef hi, NodeRef lo);

  /// if label then 1 else 0 (trivial equalities collapse to leaf 1).
  NodeRef indicator(const Label& label);

  /// If-then-else over a {0,1}-valued, untagged condition diagram.
  NodeRef ite(NodeRef condition, NodeRef hi, NodeRef lo);

  /// Pointwise combination, memoized on node pairs.
  ///
  /// Action tags: max/min keep the tag of the selected operand (ties keep
  /// the first operand); add and multiply treat an untagged 0 (and for
  /// multiply an untagged 1) as neutral and otherwise keep the first tag
  /// present.
  NodeRef apply(ApplyOp op, NodeRef a, NodeRef b);

  NodeRef scale(NodeRef d, const Rational& factor);

  /// Replace variables by terms in every label and tag, then re-canonicalize.
  /// Throws CaptureError when a target variable already occurs in d without
  /// being renamed itself.
  NodeRef substitute(NodeRef d, const Binding& binding);

  /// Same as substitute without the capture check. Used where merging
  /// variables is the intent (equality propagation, canonical renaming).
  NodeRef substitute_unchecked(NodeRef d, const Binding& binding);

  /// Rename every variable not in `reserved` to a globally fresh name.
  NodeRef standardize_apart(NodeRef d, const std::set<std::string>& reserved = {});

  std::string fresh_variable();

  /// Neglect + merge (inherent to construction) + equality propagation:
  /// inside the true branch of t1 = t2 the order-later variable is replaced
  /// by the order-earlier term. Never returns a larger diagram.
  NodeRef reduce(NodeRef d);

  /// Rebuild with every leaf replaced by `fn(leaf)`.
  NodeRef map_leaves(NodeRef d, const std::function<NodeRef(const Leaf&)>& fn);
  NodeRef tag_leaves(NodeRef d, const ActionTag& tag);
  NodeRef strip_tags(NodeRef d);

  // -- inspection -----------------------------------------------------------

  bool is_leaf(NodeRef d) const;
  const Leaf& leaf_of(NodeRef d) const;
  const Label& label_of(NodeRef d) const;
  NodeRef hi(NodeRef d) const;
  NodeRef lo(NodeRef d) const;

  Rational max_abs_leaf(NodeRef d) const;
  Rational min_leaf(NodeRef d) const;
  Rational max_leaf(NodeRef d) const;
  /// Reachable leaf nodes in store order.
  std::vector<NodeRef> leaves(NodeRef d) const;
  /// Reachable nodes (inner + leaves) in store order.
  std::vector<NodeRef> reachable(NodeRef d) const;
  std::size_t size(NodeRef d) const { return reachable(d).size(); }
  /// Variables in labels and in leaf tags.
  std::set<std::string> variables(NodeRef d) const;
  std::set<std::string> constants(NodeRef d) const;
  std::set<Label> labels(NodeRef d) const;

  std::size_t store_size() const { return nodes_.size(); }

  /// Full-store check of canonicity and path ordering. Throws on violation.
  void audit() const;

 private:
  struct Node {
    bool is_leaf = true;
    std::uint32_t leaf_id = 0;
    std::uint32_t label_id = 0;
    NodeRef hi, lo;
  };

  struct TripleHash {
    std::size_t operator()(const std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>& t) const {
      std::size_t h = std::get<0>(t);
      h = h * 0x9e3779b97f4a7c15ULL + std::get<1>(t);
      h = h * 0x9e3779b97f4a7c15ULL + std::get<2>(t);
      return h ^ (h >> 29);
    }
  };
  using TripleMap =
      std::unordered_map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, NodeRef, TripleHash>;

  std::uint32_t intern_label(const Label& label);
  NodeRef apply_leaves(ApplyOp op, NodeRef a, NodeRef b);
  NodeRef substitute_impl(NodeRef d, const Binding& binding);
  NodeRef reduce_impl(NodeRef d, std::unordered_map<std::uint32_t, NodeRef>& memo);

  std::vector<Node> nodes_;
  std::vector<Leaf> leaf_table_;
  std::unordered_map<std::string, std::uint32_t> leaf_index_;
  std::unordered_map<std::string, NodeRef> leaf_nodes_;
  std::vector<Label> label_table_;
  std::map<Label, std::uint32_t> label_index_;
  TripleMap unique_;
  TripleMap apply_cache_;  // key (op | a), b
  TripleMap ite_cache_;
  std::unordered_map<std::uint32_t, NodeRef> reduce_cache_;
  std::uint64_t fresh_counter_ = 0;
};

}  // namespace fodd

#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fodd/manager.hpp"

namespace fodd {

struct Literal {
  Label label;
  bool positive = true;

  bool operator==(const Literal&) const = default;
};

bool operator<(const Literal& a, const Literal& b);

/// Variables that rule operations treat like constants: never renamed,
/// substituted or matched onto other terms.
using VariableSet = std::set<std::string>;

/// An existentially closed conjunction with a value: one root-to-leaf path
/// of a diagram. Under max aggregation a diagram's value on an
/// interpretation is the largest value among its satisfied path rules.
struct Rule {
  std::vector<Literal> literals;
  Rational value;
  std::optional<ActionTag> tag;

  bool operator==(const Rule&) const = default;
};

std::string to_string(const Rule& rule);

/// Printed conjunction only ("p1(x) & !p2(x)"); "true" when empty.
std::string condition_string(const std::vector<Literal>& literals);

/// One rule per root-to-leaf path, in depth-first (true branch first) order.
/// Throws Error beyond max_paths.
std::vector<Rule> path_rules(const Manager& mgr, NodeRef d, std::size_t max_paths = 200000);

/// Applies a variable-to-term substitution to literals and tag.
Rule rename_variables(Rule rule, const Binding& binding);

/// Variables of literals and tag, in first-occurrence order.
std::vector<std::string> variables_of(const Rule& rule);

/// Eliminates positive equalities that mention a variable, drops duplicate
/// and trivially true literals, sorts. Returns nullopt for a contradictory
/// rule (complementary literals, t != t).
std::optional<Rule> simplify_rule(Rule rule, const VariableSet& frozen = {});

/// True when every interpretation satisfying `specific` (under some
/// valuation) also satisfies `general`: a substitution of general's
/// variables maps each of its literals onto a literal of `specific`.
bool subsumes(const Rule& general, const Rule& specific, const VariableSet& frozen = {});

/// As subsumes, with the substitution also mapping general's action tag
/// onto specific's (both must be tagged, or both untagged).
bool subsumes_with_tag(const Rule& general, const Rule& specific, const VariableSet& frozen = {});

/// Drops literals while the rule still maps into its own remainder; the
/// result is equivalent to the input (tag included).
Rule condense_rule(Rule rule, const VariableSet& frozen = {});

/// Renames variables to v1, v2, ... choosing the renaming with the
/// smallest printed form (exhaustive up to 6 variables).
Rule canonical_rule(const Rule& rule, const VariableSet& frozen = {});

struct CompactOptions {
  /// Keep leaf tags (policy diagrams). Literal dropping then needs strict
  /// dominance, or equal value and the same tag.
  bool keep_tags = false;
  /// Tie preference among equal-valued rules; lower rank wins.
  std::function<int(const ActionTag&)> tag_rank;
  /// Tag of the default (minimum-value) leaf when keep_tags is set.
  ActionTag default_tag = noop_tag();
  /// The default tag achieves the minimum value in every state, so
  /// minimum-value rules of other tags fold into the default as well.
  bool default_covers = false;
  /// Off for partial rule sets that do not cover every state; all rules
  /// are then kept explicitly.
  bool fold_default = true;
  /// Free variables kept fixed, so the result preserves the maximum for
  /// every valuation of them rather than only the overall maximum.
  VariableSet frozen;
};

struct RuleSet {
  /// Above default_value, or equal to it with a tag other than the default tag.
  std::vector<Rule> rules;
  Rational default_value;
};

/// Sound rule-level normal form of `d`: minimum-value rules folded into a
/// default, subsumed rules deleted, literals dropped when the flipped rule
/// is dominated, variables canonically renamed.
RuleSet compact_rules(const Manager& mgr, NodeRef d, const CompactOptions& options = {});

/// Same, starting from an explicit rule list; its semantics is the max
/// over satisfied rules. Throws Error on an empty list.
RuleSet compact_rule_list(std::vector<Rule> rules, const CompactOptions& options = {});

/// max over rule chains (each: if condition then value else default).
NodeRef build_from_rules(Manager& mgr, const RuleSet& rules, const CompactOptions& options = {});

NodeRef compact(Manager& mgr, NodeRef d, const CompactOptions& options = {});

}  // namespace fodd

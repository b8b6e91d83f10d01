#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fodd/expression.hpp"
#include "fodd/manager.hpp"
#include "fodd/semantics.hpp"

namespace fodd {

/// Truth value diagram: next-state truth of predicate(params) under one
/// deterministic alternative of an action. Leaves are 0/1 and the only
/// variables are action parameters and predicate parameters.
struct Tvd {
  std::string action;
  std::string alternative;
  std::string predicate;
  std::vector<std::string> params;
  std::vector<std::string> action_params;
  NodeRef diagram;
};

struct Alternative {
  std::string name;
  NodeRef probability;
  /// Explicit TVDs only; predicates without one are left unchanged.
  std::vector<Tvd> tvds;

  const Tvd* find_tvd(const std::string& predicate) const;
};

struct ActionModel {
  std::string name;
  std::vector<std::string> params;
  std::vector<Alternative> alternatives;
  bool implicit = false;  // no-op appended by the parser

  ActionTag schema() const;
};

struct DomainSpec {
  std::string name;
  std::vector<PredicateDecl> predicates;
  std::vector<std::string> constants;
  std::vector<ActionModel> actions;  // always contains a no-op action
  NodeRef reward;
  Rational discount;
  bool absorbing_goal = false;

  Vocabulary vocabulary() const { return {predicates, constants}; }
  const PredicateDecl* find_predicate(const std::string& name) const;
  const ActionModel* find_action(const std::string& name) const;
  const ActionModel& noop() const;
  /// Greedy tie preference: no-op first, then declaration order.
  int tag_rank(const ActionTag& tag) const;
  /// Explicit TVD of the alternative, or the frame TVD.
  Tvd tvd(Manager& mgr, const ActionModel& action, const Alternative& alt, const std::string& predicate) const;
};

/// if p(x1..xn) then 1 else 0. Parameter names avoid the action parameters.
Tvd frame_tvd(Manager& mgr, const PredicateDecl& predicate, const std::vector<std::string>& action_params = {});

/// Substitute predicate parameters by `atom_args` and action parameters by
/// `action_args` (simultaneously) and re-canonicalize.
/// Throws std::invalid_argument on an argument-count mismatch.
NodeRef instantiate_tvd(Manager& mgr, const Tvd& tvd, const std::vector<Term>& atom_args,
                        const std::vector<Term>& action_args);

/// Parse and validate. Throws ParseError with line/column.
DomainSpec parse_domain(std::string_view text, Manager& mgr);

/// Canonical text form; parse(print(d)) reproduces d node for node.
std::string print_domain(const DomainSpec& spec, const Manager& mgr);

/// Semantic checks that do not depend on source positions: TVD leaves,
/// probability normalization, absorbing-goal shape. Throws ParseError with
/// position {0,0} on failure.
void validate_domain(const DomainSpec& spec, Manager& mgr);

DomainSpec load_domain_file(const std::string& path, Manager& mgr);

}  // namespace fodd

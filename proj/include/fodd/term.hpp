#pragma once

#include <compare>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace fodd {

/// A variable or a constant. Variables sort before constants, then by name.
struct Term {
  enum class Kind { variable, constant };

  Kind kind = Kind::variable;
  std::string name;

  static Term variable(std::string name) { return {Kind::variable, std::move(name)}; }
  static Term constant(std::string name) { return {Kind::constant, std::move(name)}; }

  bool is_variable() const { return kind == Kind::variable; }
  bool is_constant() const { return kind == Kind::constant; }

  auto operator<=>(const Term&) const = default;
  bool operator==(const Term&) const = default;
};

std::string to_string(const Term& term);

/// Node label: an atom P(t1..tn) or an equality t1 = t2.
///
/// Global label order: atoms before equalities; atoms by
/// (predicate, arity, arguments); equalities by (left, right).
/// Equalities are stored with left < right.
struct Label {
  enum class Kind { atom, equality };

  Kind kind = Kind::atom;
  std::string predicate;   // empty for equalities
  std::vector<Term> args;  // equality: {left, right}

  static Label atom(std::string predicate, std::vector<Term> args);
  /// Orients the terms so that left < right. Identical terms are allowed
  /// and reported by is_trivial().
  static Label equality(Term left, Term right);

  bool is_atom() const { return kind == Kind::atom; }
  bool is_equality() const { return kind == Kind::equality; }
  /// t = t
  bool is_trivial() const { return is_equality() && args[0] == args[1]; }
  const Term& left() const { return args[0]; }
  const Term& right() const { return args[1]; }

  bool operator==(const Label&) const = default;
};

std::strong_ordering operator<=>(const Label& a, const Label& b);

std::string to_string(const Label& label);

/// Parameterized action attached to policy leaves, e.g. A2(x).
struct ActionTag {
  std::string action;
  std::vector<Term> args;

  auto operator<=>(const ActionTag&) const = default;
  bool operator==(const ActionTag&) const = default;
};

inline constexpr const char* kNoopAction = "noop";

inline ActionTag noop_tag() { return {kNoopAction, {}}; }

std::string to_string(const ActionTag& tag);

std::ostream& operator<<(std::ostream& os, const Term& term);
std::ostream& operator<<(std::ostream& os, const Label& label);
std::ostream& operator<<(std::ostream& os, const ActionTag& tag);

}  // namespace fodd

#include "fodd/term.hpp"

#include <utility>

namespace fodd {

std::string to_string(const Term& term) {
  if (term.is_variable()) return term.name;
  return "'" + term.name + "'";
}

Label Label::atom(std::string predicate, std::vector<Term> args) {
  return {Kind::atom, std::move(predicate), std::move(args)};
}

Label Label::equality(Term left, Term right) {
  if (right < left) std::swap(left, right);
  return {Kind::equality, {}, {std::move(left), std::move(right)}};
}

std::strong_ordering operator<=>(const Label& a, const Label& b) {
  if (a.kind != b.kind) return a.kind <=> b.kind;
  if (a.is_atom()) {
    if (auto c = a.predicate <=> b.predicate; c != 0) return c;
    if (auto c = a.args.size() <=> b.args.size(); c != 0) return c;
  }
  return std::lexicographical_compare_three_way(a.args.begin(), a.args.end(), b.args.begin(),
                                                b.args.end());
}

std::string to_string(const Label& label) {
  if (label.is_equality()) return to_string(label.left()) + " = " + to_string(label.right());
  std::string out = label.predicate + "(";
  for (std::size_t i = 0; i < label.args.size(); ++i) {
    if (i) out += ", ";
    out += to_string(label.args[i]);
  }
  return out + ")";
}

std::string to_string(const ActionTag& tag) {
  std::string out = tag.action + "(";
  for (std::size_t i = 0; i < tag.args.size(); ++i) {
    if (i) out += ", ";
    out += to_string(tag.args[i]);
  }
  return out + ")";
}

std::ostream& operator<<(std::ostream& os, const Term& term) { return os << to_string(term); }
std::ostream& operator<<(std::ostream& os, const Label& label) { return os << to_string(label); }
std::ostream& operator<<(std::ostream& os, const ActionTag& tag) { return os << to_string(tag); }

}  // namespace fodd

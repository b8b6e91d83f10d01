#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fodd/manager.hpp"

namespace fodd {

struct PredicateDecl {
  std::string name;
  int arity = 0;

  bool operator==(const PredicateDecl&) const = default;
};

/// Predicates and constants over which interpretations are enumerated.
struct Vocabulary {
  std::vector<PredicateDecl> predicates;
  std::vector<std::string> constants;

  const PredicateDecl* find(const std::string& name) const;
};

/// Objects are 0..size-1 and print as 1..size.
struct GroundAtom {
  std::string predicate;
  std::vector<int> args;

  auto operator<=>(const GroundAtom&) const = default;
  bool operator==(const GroundAtom&) const = default;
};

std::string to_string(const GroundAtom& atom);

/// A finite relational structure: universe, constant map, true ground atoms.
class Interpretation {
 public:
  explicit Interpretation(int universe_size = 1) : size_(universe_size) {}

  int universe_size() const { return size_; }

  void map_constant(const std::string& name, int object) { constants_[name] = object; }
  std::optional<int> constant(const std::string& name) const;
  const std::map<std::string, int>& constant_map() const { return constants_; }

  /// Throws std::out_of_range for objects outside the universe.
  void add(const GroundAtom& atom);
  bool holds(const std::string& predicate, const std::vector<int>& args) const;
  bool holds(const GroundAtom& atom) const { return holds(atom.predicate, atom.args); }
  /// Row-major truth cells of a relation, or null when nothing is true.
  const std::vector<char>* cells(const std::string& predicate, std::size_t arity) const;
  /// True atoms, sorted.
  std::vector<GroundAtom> atoms() const;

  /// "{p1(1), q2(1)}"
  std::string to_string() const;

 private:
  std::size_t offset(const std::vector<int>& args) const;

  int size_;
  std::map<std::string, int> constants_;
  struct Relation {
    std::size_t arity = 0;
    std::vector<char> cells;
  };
  std::map<std::string, Relation> relations_;
};

using Valuation = std::map<std::string, int>;

/// Value of the unique path selected by (interp, valuation).
Rational evaluate(const Manager& mgr, NodeRef d, const Interpretation& interp, const Valuation& valuation);

/// Leaf reached by (interp, valuation).
NodeRef evaluate_leaf(const Manager& mgr, NodeRef d, const Interpretation& interp, const Valuation& valuation);

/// Maximizing (leaf, valuation) pair: ties go to the smallest leaf NodeRef,
/// then to the lexicographically smallest valuation (variables by name,
/// objects in universe order).
struct MaxWitness {
  Rational value;
  NodeRef leaf;
  Valuation valuation;
};

/// Max aggregation over every valuation of d's free variables; variables
/// already bound in `fixed` are held constant.
MaxWitness map_max_witness(const Manager& mgr, NodeRef d, const Interpretation& interp, const Valuation& fixed = {});

Rational map_max(const Manager& mgr, NodeRef d, const Interpretation& interp, const Valuation& fixed = {});

/// Index form of a diagram for repeated max aggregation; same results and
/// tie breaking as map_max_witness. The manager must outlive it.
class CompiledDiagram {
 public:
  CompiledDiagram(const Manager& mgr, NodeRef d);

  MaxWitness max(const Interpretation& interp, const Valuation& fixed = {}) const;
  Rational max_value(const Interpretation& interp, const Valuation& fixed = {}) const;

 private:
  struct Node {
    int predicate;          // -1 for equality
    int hi, lo;             // >= 0 node index, < 0 leaf ~index
    std::vector<int> args;  // >= 0 variable slot, < 0 constant ~index
  };
  int best_leaf(const Interpretation& interp, const Valuation& fixed, std::vector<int>& slots) const;

  const Manager* mgr_;
  std::vector<Node> nodes_;
  int root_ = 0;
  std::vector<NodeRef> leaves_;
  std::vector<int> rank_;  // 0 = largest value, ties by NodeRef
  std::vector<std::string> variables_;
  std::vector<std::string> predicates_;
  std::vector<std::size_t> arities_;
  std::vector<std::string> constants_;
};

/// Default atom budget: 12 ground atoms, overridable by FODD_ATOM_BUDGET.
std::size_t default_atom_budget();

std::size_t ground_atom_count(const Vocabulary& vocab, int universe_size);

/// Ground atoms over {0..n-1} in deterministic order (predicate declaration
/// order, then argument tuples lexicographically).
std::vector<GroundAtom> ground_atoms(const Vocabulary& vocab, int universe_size);

/// All interpretations over a universe of exactly n objects: every constant
/// map and every subset of ground atoms. Throws BudgetError.
std::vector<Interpretation> enumerate_interpretations(const Vocabulary& vocab, int universe_size,
                                                      std::size_t atom_budget = default_atom_budget());

/// map_max agrees on every interpretation with universe 1..max_universe.
bool semantic_equal(const Manager& mgr, NodeRef a, NodeRef b, const Vocabulary& vocab, int max_universe,
                    std::size_t atom_budget = default_atom_budget());

}  // namespace fodd

#include "fodd/semantics.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <unordered_map>
#include <stdexcept>

#include "fodd/error.hpp"

namespace fodd {

const PredicateDecl* Vocabulary::find(const std::string& name) const {
  for (const auto& p : predicates)
    if (p.name == name) return &p;
  return nullptr;
}

std::string to_string(const GroundAtom& atom) {
  std::string out = atom.predicate + "(";
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(atom.args[i] + 1);
  }
  return out + ")";
}

std::optional<int> Interpretation::constant(const std::string& name) const {
  auto it = constants_.find(name);
  if (it == constants_.end()) return std::nullopt;
  return it->second;
}

std::size_t Interpretation::offset(const std::vector<int>& args) const {
  std::size_t index = 0;
  for (int a : args) index = index * static_cast<std::size_t>(size_) + static_cast<std::size_t>(a);
  return index;
}

void Interpretation::add(const GroundAtom& atom) {
  for (int a : atom.args)
    if (a < 0 || a >= size_) throw std::out_of_range("object outside universe in " + fodd::to_string(atom));
  auto& rel = relations_[atom.predicate];
  std::size_t cells = 1;
  for (std::size_t i = 0; i < atom.args.size(); ++i) cells *= static_cast<std::size_t>(size_);
  rel.arity = atom.args.size();
  if (rel.cells.size() < cells) rel.cells.resize(cells, 0);
  rel.cells[offset(atom.args)] = 1;
}

bool Interpretation::holds(const std::string& predicate, const std::vector<int>& args) const {
  auto it = relations_.find(predicate);
  if (it == relations_.end() || it->second.arity != args.size()) return false;
  std::size_t idx = offset(args);
  return idx < it->second.cells.size() && it->second.cells[idx] != 0;
}

const std::vector<char>* Interpretation::cells(const std::string& predicate, std::size_t arity) const {
  auto it = relations_.find(predicate);
  if (it == relations_.end() || it->second.arity != arity) return nullptr;
  return &it->second.cells;
}

std::vector<GroundAtom> Interpretation::atoms() const {
  std::vector<GroundAtom> out;
  for (const auto& [pred, rel] : relations_) {
    for (std::size_t idx = 0; idx < rel.cells.size(); ++idx) {
      if (!rel.cells[idx]) continue;
      std::vector<int> args(rel.arity);
      std::size_t rest = idx;
      for (std::size_t k = rel.arity; k-- > 0;) {
        args[k] = static_cast<int>(rest % static_cast<std::size_t>(size_));
        rest /= static_cast<std::size_t>(size_);
      }
      out.push_back({pred, std::move(args)});
    }
  }
  return out;
}

std::string Interpretation::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& atom : atoms()) {
    if (!first) out += ", ";
    first = false;
    out += fodd::to_string(atom);
  }
  return out + "}";
}

namespace {

int resolve(const Term& t, const Interpretation& interp, const Valuation& valuation) {
  if (t.is_variable()) {
    auto it = valuation.find(t.name);
    if (it == valuation.end()) throw EvaluationError("unbound variable " + t.name);
    return it->second;
  }
  auto c = interp.constant(t.name);
  if (!c) throw EvaluationError("unmapped constant " + t.name);
  return *c;
}

bool label_holds(const Label& label, const Interpretation& interp, const Valuation& valuation,
                 std::vector<int>& scratch) {
  if (label.is_equality())
    return resolve(label.left(), interp, valuation) == resolve(label.right(), interp, valuation);
  scratch.resize(label.args.size());
  for (std::size_t i = 0; i < label.args.size(); ++i) scratch[i] = resolve(label.args[i], interp, valuation);
  return interp.holds(label.predicate, scratch);
}

}  // namespace

NodeRef evaluate_leaf(const Manager& mgr, NodeRef d, const Interpretation& interp, const Valuation& valuation) {
  std::vector<int> scratch;
  while (!mgr.is_leaf(d)) d = label_holds(mgr.label_of(d), interp, valuation, scratch) ? mgr.hi(d) : mgr.lo(d);
  return d;
}

Rational evaluate(const Manager& mgr, NodeRef d, const Interpretation& interp, const Valuation& valuation) {
  return mgr.leaf_of(evaluate_leaf(mgr, d, interp, valuation)).value;
}

CompiledDiagram::CompiledDiagram(const Manager& mgr, NodeRef d) : mgr_(&mgr) {
  for (const auto& v : mgr.variables(d)) variables_.push_back(v);
  auto index_of = [](std::vector<std::string>& names, const std::string& name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it != names.end()) return static_cast<int>(it - names.begin());
    names.push_back(name);
    return static_cast<int>(names.size()) - 1;
  };
  std::unordered_map<std::uint32_t, int> seen;
  std::function<int(NodeRef)> visit = [&](NodeRef x) -> int {
    if (auto it = seen.find(x.index); it != seen.end()) return it->second;
    int code;
    if (mgr.is_leaf(x)) {
      leaves_.push_back(x);
      code = ~static_cast<int>(leaves_.size() - 1);
    } else {
      const Label& label = mgr.label_of(x);
      Node node{-1, visit(mgr.hi(x)), visit(mgr.lo(x)), {}};
      if (label.is_atom()) {
        node.predicate = index_of(predicates_, label.predicate);
        if (arities_.size() < predicates_.size()) arities_.push_back(label.args.size());
      }
      for (const Term& t : label.args)
        node.args.push_back(t.is_variable() ? index_of(variables_, t.name) : ~index_of(constants_, t.name));
      nodes_.push_back(std::move(node));
      code = static_cast<int>(nodes_.size() - 1);
    }
    seen.emplace(x.index, code);
    return code;
  };
  root_ = visit(d);
  std::vector<std::size_t> order(leaves_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    int c = compare(mgr.leaf_of(leaves_[a]).value, mgr.leaf_of(leaves_[b]).value);
    return c != 0 ? c > 0 : leaves_[a] < leaves_[b];
  });
  rank_.resize(leaves_.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank_[order[r]] = static_cast<int>(r);
}

int CompiledDiagram::best_leaf(const Interpretation& interp, const Valuation& fixed, std::vector<int>& slots) const {
  const int n = interp.universe_size();
  std::vector<std::size_t> free;
  slots.assign(variables_.size(), 0);
  for (std::size_t v = 0; v < variables_.size(); ++v) {
    auto it = fixed.find(variables_[v]);
    if (it == fixed.end()) free.push_back(v);
    else slots[v] = it->second;
  }
  if (!free.empty() && n <= 0) throw EvaluationError("map_max over an empty universe");
  std::vector<const std::vector<char>*> relations;
  for (std::size_t p = 0; p < predicates_.size(); ++p) relations.push_back(interp.cells(predicates_[p], arities_[p]));
  std::vector<int> objects;
  for (const auto& c : constants_) objects.push_back(interp.constant(c).value_or(-1));
  auto resolve = [&](int code) {
    if (code >= 0) return slots[static_cast<std::size_t>(code)];
    int object = objects[static_cast<std::size_t>(~code)];
    if (object < 0) throw EvaluationError("unmapped constant " + constants_[static_cast<std::size_t>(~code)]);
    return object;
  };

  std::vector<int> best_slots;
  int best = -1;
  while (true) {
    int x = root_;
    while (x >= 0) {
      const Node& node = nodes_[static_cast<std::size_t>(x)];
      bool truth;
      if (node.predicate < 0) {
        truth = resolve(node.args[0]) == resolve(node.args[1]);
      } else {
        std::size_t idx = 0;
        for (int a : node.args) idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(resolve(a));
        const auto* cells = relations[static_cast<std::size_t>(node.predicate)];
        truth = cells && idx < cells->size() && (*cells)[idx] != 0;
      }
      x = truth ? node.hi : node.lo;
    }
    int leaf = ~x;
    if (best < 0 || rank_[static_cast<std::size_t>(leaf)] < rank_[static_cast<std::size_t>(best)]) {
      best = leaf;
      best_slots = slots;
      if (rank_[static_cast<std::size_t>(leaf)] == 0) break;
    }
    // odometer, last variable fastest, so the first hit is lexicographically smallest
    std::size_t k = free.size();
    bool carry = true;
    while (carry && k > 0) {
      --k;
      if (++slots[free[k]] < n) carry = false;
      else slots[free[k]] = 0;
    }
    if (carry) break;
  }
  slots = std::move(best_slots);
  return best;
}

MaxWitness CompiledDiagram::max(const Interpretation& interp, const Valuation& fixed) const {
  std::vector<int> slots;
  int leaf = best_leaf(interp, fixed, slots);
  Valuation valuation = fixed;
  for (std::size_t v = 0; v < variables_.size(); ++v) valuation[variables_[v]] = slots[v];
  NodeRef ref = leaves_[static_cast<std::size_t>(leaf)];
  return MaxWitness{mgr_->leaf_of(ref).value, ref, std::move(valuation)};
}

Rational CompiledDiagram::max_value(const Interpretation& interp, const Valuation& fixed) const {
  std::vector<int> slots;
  return mgr_->leaf_of(leaves_[static_cast<std::size_t>(best_leaf(interp, fixed, slots))]).value;
}

MaxWitness map_max_witness(const Manager& mgr, NodeRef d, const Interpretation& interp, const Valuation& fixed) {
  return CompiledDiagram(mgr, d).max(interp, fixed);
}

Rational map_max(const Manager& mgr, NodeRef d, const Interpretation& interp, const Valuation& fixed) {
  return CompiledDiagram(mgr, d).max_value(interp, fixed);
}

std::size_t default_atom_budget() {
  if (const char* env = std::getenv("FODD_ATOM_BUDGET")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && v > 0) return v;
  }
  return 12;
}

std::size_t ground_atom_count(const Vocabulary& vocab, int universe_size) {
  std::size_t total = 0;
  for (const auto& p : vocab.predicates) {
    std::size_t cells = 1;
    for (int i = 0; i < p.arity; ++i) cells *= static_cast<std::size_t>(universe_size);
    total += cells;
  }
  return total;
}

std::vector<GroundAtom> ground_atoms(const Vocabulary& vocab, int universe_size) {
  std::vector<GroundAtom> out;
  for (const auto& p : vocab.predicates) {
    std::vector<int> args(p.arity, 0);
    while (true) {
      out.push_back({p.name, args});
      int k = p.arity;
      while (k > 0) {
        --k;
        if (++args[k] < universe_size) break;
        args[k] = 0;
        if (k == 0) k = -1;
      }
      if (p.arity == 0 || k < 0) break;
    }
  }
  return out;
}

std::vector<Interpretation> enumerate_interpretations(const Vocabulary& vocab, int universe_size,
                                                      std::size_t atom_budget) {
  if (universe_size < 1) throw std::invalid_argument("universe size must be at least 1");
  std::size_t count = ground_atom_count(vocab, universe_size);
  if (count > atom_budget || count >= 63)
    throw BudgetError("enumeration needs " + std::to_string(count) + " ground atoms, budget is " +
                          std::to_string(atom_budget),
                      count, atom_budget);
  auto atoms = ground_atoms(vocab, universe_size);
  std::size_t maps = 1;
  for (std::size_t i = 0; i < vocab.constants.size(); ++i) maps *= static_cast<std::size_t>(universe_size);

  std::vector<Interpretation> out;
  out.reserve(maps << atoms.size());
  for (std::size_t m = 0; m < maps; ++m) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << atoms.size()); ++mask) {
      Interpretation interp(universe_size);
      std::size_t rest = m;
      for (const auto& c : vocab.constants) {
        interp.map_constant(c, static_cast<int>(rest % static_cast<std::size_t>(universe_size)));
        rest /= static_cast<std::size_t>(universe_size);
      }
      for (std::size_t i = 0; i < atoms.size(); ++i)
        if (mask >> i & 1U) interp.add(atoms[i]);
      out.push_back(std::move(interp));
    }
  }
  return out;
}

bool semantic_equal(const Manager& mgr, NodeRef a, NodeRef b, const Vocabulary& vocab, int max_universe,
                    std::size_t atom_budget) {
  for (int n = 1; n <= max_universe; ++n) {
    std::size_t count = ground_atom_count(vocab, n);
    if (count > atom_budget)
      throw BudgetError("semantic_equal needs " + std::to_string(count) + " ground atoms, budget is " +
                            std::to_string(atom_budget),
                        count, atom_budget);
  }
  if (a == b) return true;
  CompiledDiagram ca(mgr, a), cb(mgr, b);
  for (int n = 1; n <= max_universe; ++n) {
    for (const auto& interp : enumerate_interpretations(vocab, n, atom_budget))
      if (ca.max_value(interp) != cb.max_value(interp)) return false;
  }
  return true;
}

}  // namespace fodd

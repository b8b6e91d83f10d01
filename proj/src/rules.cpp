#include "fodd/rules.hpp"

#include <algorithm>
#include <map>
#include <limits>
#include <numeric>
#include <unordered_map>

#include <boost/container/small_vector.hpp>

#include "fodd/error.hpp"

namespace fodd {

bool operator<(const Literal& a, const Literal& b) {
  if (auto c = a.label <=> b.label; c != 0) return c < 0;
  return a.positive < b.positive;
}

std::string condition_string(const std::vector<Literal>& literals) {
  if (literals.empty()) return "true";
  std::string out;
  for (std::size_t i = 0; i < literals.size(); ++i) {
    if (i) out += " & ";
    const Literal& lit = literals[i];
    if (lit.label.is_equality() && !lit.positive) {
      out += to_string(lit.label.left()) + " != " + to_string(lit.label.right());
    } else {
      if (!lit.positive) out += "!";
      out += to_string(lit.label);
    }
  }
  return out;
}

std::string to_string(const Rule& rule) {
  std::string out = condition_string(rule.literals) + " -> " + to_exact_string(rule.value);
  if (rule.tag) out += " [" + to_string(*rule.tag) + "]";
  return out;
}

std::vector<Rule> path_rules(const Manager& mgr, NodeRef d, std::size_t max_paths) {
  std::vector<Rule> out;
  std::vector<Literal> prefix;
  std::function<void(NodeRef)> walk = [&](NodeRef x) {
    if (mgr.is_leaf(x)) {
      if (out.size() >= max_paths) throw Error("path enumeration exceeded " + std::to_string(max_paths) + " paths");
      const Leaf& leaf = mgr.leaf_of(x);
      out.push_back(Rule{prefix, leaf.value, leaf.tag});
      return;
    }
    const Label& label = mgr.label_of(x);
    prefix.push_back({label, true});
    walk(mgr.hi(x));
    prefix.back().positive = false;
    walk(mgr.lo(x));
    prefix.pop_back();
  };
  walk(d);
  return out;
}

namespace {

Term rename(const Term& t, const Binding& binding) {
  if (!t.is_variable()) return t;
  auto it = binding.find(t.name);
  return it == binding.end() ? t : it->second;
}

void rename_rule(Rule& rule, const Binding& binding) {
  for (Literal& lit : rule.literals) {
    for (Term& t : lit.label.args) t = rename(t, binding);
    if (lit.label.is_equality()) lit.label = Label::equality(lit.label.args[0], lit.label.args[1]);
  }
  if (rule.tag)
    for (Term& t : rule.tag->args) t = rename(t, binding);
}

std::vector<std::string> rule_variables(const Rule& rule) {
  std::vector<std::string> out;
  auto add = [&](const Term& t) {
    if (t.is_variable() && std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
  };
  for (const Literal& lit : rule.literals)
    for (const Term& t : lit.label.args) add(t);
  if (rule.tag)
    for (const Term& t : rule.tag->args) add(t);
  return out;
}

template <class T, std::size_t N>
using Small = boost::container::small_vector<T, N>;

// Integer form of a rule for the subsumption search, optionally with the
// tag as a leading pseudo literal. Constants and frozen variables become
// non-negative symbol ids, the rule's own variables -(index + 1). Variable
// terms point into the encoded rule, which must outlive the code.
struct Code {
  Small<int, 16> head;
  Small<char, 16> equality;
  Small<std::uint32_t, 17> offset{0};
  Small<int, 32> args;
  Small<const Term*, 8> vars;

  std::size_t size() const { return head.size(); }
  int arg(std::size_t lit, std::size_t i) const { return args[offset[lit] + i]; }
  std::size_t arity(std::size_t lit) const { return offset[lit + 1] - offset[lit]; }
};

struct Symbols {
  std::unordered_map<std::string, int> predicates, actions, constants, fixed;
  std::vector<Term> terms;

  static int intern(std::unordered_map<std::string, int>& table, const std::string& name) {
    return table.emplace(name, static_cast<int>(table.size())).first->second;
  }
  int term(std::unordered_map<std::string, int>& table, const Term& t) {
    auto [it, fresh] = table.emplace(t.name, static_cast<int>(terms.size()));
    if (fresh) terms.push_back(t);
    return it->second;
  }
};

Symbols& symbols() {
  thread_local Symbols table;
  return table;
}

Code encode(const Rule& rule, bool with_tag, const VariableSet& frozen) {
  Symbols& table = symbols();
  Code c;
  auto add_args = [&](const std::vector<Term>& args) {
    for (const Term& t : args) {
      if (t.is_constant()) {
        c.args.push_back(table.term(table.constants, t));
      } else if (!frozen.empty() && frozen.count(t.name)) {
        c.args.push_back(table.term(table.fixed, t));
      } else {
        std::size_t v = 0;
        while (v < c.vars.size() && c.vars[v]->name != t.name) ++v;
        if (v == c.vars.size()) c.vars.push_back(&t);
        c.args.push_back(-static_cast<int>(v) - 1);
      }
    }
    c.offset.push_back(static_cast<std::uint32_t>(c.args.size()));
  };
  if (with_tag && rule.tag) {
    c.head.push_back(-4 - 2 * Symbols::intern(table.actions, rule.tag->action));
    c.equality.push_back(0);
    add_args(rule.tag->args);
  }
  for (const Literal& lit : rule.literals) {
    int kind = lit.label.is_atom()
                   ? 2 * ((Symbols::intern(table.predicates, lit.label.predicate) << 8) |
                          static_cast<int>(lit.label.args.size()))
                   : -2;
    c.head.push_back(kind + (lit.positive ? 1 : 0));
    c.equality.push_back(lit.label.is_equality());
    add_args(lit.label.args);
  }
  return c;
}

Term decode(const Code& c, int code) {
  return code >= 0 ? symbols().terms[static_cast<std::size_t>(code)] : *c.vars[static_cast<std::size_t>(-code - 1)];
}

constexpr int kUnset = std::numeric_limits<int>::min();

struct Matcher {
  Matcher(const Code& g, const Code& s, std::size_t skipped = std::string::npos)
      : general(g), specific(s), skip(skipped) {}

  const Code& general;
  const Code& specific;
  std::size_t skip;  // general literal left out of the match, or npos
  // candidates of general literal i: cand[cand_begin[i] .. cand_begin[i + 1])
  Small<std::uint32_t, 64> cand;
  Small<std::uint32_t, 17> cand_begin;
  Small<std::uint32_t, 16> order;
  Small<int, 8> theta;
  Small<int, 8> trail;
  // when set, each complete match is offered; returning true stops the search
  const std::function<bool(const Small<int, 8>&)>* accept = nullptr;

  bool compatible(std::size_t g, std::size_t s) const {
    if (general.head[g] != specific.head[s]) return false;
    if (general.equality[g]) return true;
    for (std::size_t i = 0, n = general.arity(g); i < n; ++i) {
      int a = general.arg(g, i);
      if (a >= 0 && a != specific.arg(s, i)) return false;
    }
    return true;
  }

  std::uint32_t count(std::uint32_t i) const { return cand_begin[i + 1] - cand_begin[i]; }

  bool run() {
    const std::size_t n = general.size();
    for (std::size_t i = 0; i < n; ++i) {
      cand_begin.push_back(static_cast<std::uint32_t>(cand.size()));
      if (i == skip) continue;
      for (std::size_t j = 0; j < specific.size(); ++j)
        if (compatible(i, j)) cand.push_back(static_cast<std::uint32_t>(j));
      if (cand.size() == cand_begin.back()) return false;
      order.push_back(static_cast<std::uint32_t>(i));
    }
    cand_begin.push_back(static_cast<std::uint32_t>(cand.size()));
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return count(a) < count(b); });
    theta.assign(general.vars.size(), kUnset);
    return step(0);
  }

  bool unify(std::size_t g, std::size_t s, bool reversed) {
    const std::size_t n = general.arity(g);
    for (std::size_t i = 0; i < n; ++i) {
      int a = general.arg(g, i);
      int b = specific.arg(s, reversed ? n - 1 - i : i);
      if (a >= 0) {
        if (a != b) return false;
        continue;
      }
      int& slot = theta[static_cast<std::size_t>(-a - 1)];
      if (slot == kUnset) {
        slot = b;
        trail.push_back(-a - 1);
      } else if (slot != b) {
        return false;
      }
    }
    return true;
  }

  bool step(std::size_t k) {
    if (k == order.size()) return !accept || (*accept)(theta);
    const std::size_t g = order[k];
    for (std::uint32_t c = cand_begin[g]; c < cand_begin[g + 1]; ++c) {
      const std::uint32_t s = cand[c];
      for (int orient = 0; orient < (general.equality[g] ? 2 : 1); ++orient) {
        std::size_t mark = trail.size();
        if (unify(g, s, orient == 1) && step(k + 1)) return true;
        while (trail.size() > mark) {
          theta[static_cast<std::size_t>(trail.back())] = kUnset;
          trail.pop_back();
        }
      }
    }
    return false;
  }
};

bool matches(const Code& general, const Code& specific) {
  return Matcher(general, specific).run();
}

// Condition and tag only; the value does not depend on variable names.
std::string shape_key(const Rule& rule) {
  std::string out = condition_string(rule.literals);
  if (rule.tag) out += " [" + to_string(*rule.tag) + "]";
  return out;
}

constexpr int kSplitDepth = 1;

int default_rank(const ActionTag& tag) { return tag.action == kNoopAction ? 0 : 1; }

}  // namespace

Rule rename_variables(Rule rule, const Binding& binding) {
  rename_rule(rule, binding);
  return rule;
}

std::vector<std::string> variables_of(const Rule& rule) { return rule_variables(rule); }

std::optional<Rule> simplify_rule(Rule rule, const VariableSet& frozen) {
  auto free_var = [&](const Term& t) { return t.is_variable() && !frozen.count(t.name); };
  while (true) {
    auto it = std::find_if(rule.literals.begin(), rule.literals.end(), [&](const Literal& lit) {
      return lit.positive && lit.label.is_equality() && (free_var(lit.label.left()) || free_var(lit.label.right()));
    });
    if (it == rule.literals.end()) break;
    Label eq = it->label;
    rule.literals.erase(it);
    if (eq.is_trivial()) continue;
    Binding binding;
    if (free_var(eq.right()))
      binding.emplace(eq.right().name, eq.left());
    else
      binding.emplace(eq.left().name, eq.right());
    rename_rule(rule, binding);
  }
  std::vector<Literal> kept;
  for (const Literal& lit : rule.literals) {
    if (lit.label.is_trivial()) {
      if (!lit.positive) return std::nullopt;
      continue;
    }
    kept.push_back(lit);
  }
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  for (std::size_t i = 1; i < kept.size(); ++i)
    if (kept[i].label == kept[i - 1].label) return std::nullopt;
  rule.literals = std::move(kept);
  return rule;
}

bool subsumes(const Rule& general, const Rule& specific, const VariableSet& frozen) {
  return matches(encode(general, false, frozen), encode(specific, false, frozen));
}

bool subsumes_with_tag(const Rule& general, const Rule& specific, const VariableSet& frozen) {
  if (general.tag.has_value() != specific.tag.has_value()) return false;
  return matches(encode(general, true, frozen), encode(specific, true, frozen));
}

Rule condense_rule(Rule rule, const VariableSet& frozen) {
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t l = 0; l < rule.literals.size(); ++l) {
      Rule smaller = rule;
      smaller.literals.erase(smaller.literals.begin() + static_cast<std::ptrdiff_t>(l));
      if (subsumes_with_tag(rule, smaller, frozen)) {
        rule = std::move(smaller);
        progress = true;
        break;
      }
    }
  }
  return rule;
}

Rule canonical_rule(const Rule& rule, const VariableSet& frozen) {
  auto vars = rule_variables(rule);
  std::erase_if(vars, [&](const std::string& v) { return frozen.count(v) > 0; });
  std::vector<std::string> names;
  for (int k = 1; names.size() < vars.size(); ++k)
    if (!frozen.count("v" + std::to_string(k))) names.push_back("v" + std::to_string(k));
  auto renamed = [&](const std::vector<std::size_t>& perm) {
    Binding binding;
    for (std::size_t i = 0; i < vars.size(); ++i) binding.emplace(vars[perm[i]], Term::variable(names[i]));
    Rule r = rule;
    rename_rule(r, binding);
    std::sort(r.literals.begin(), r.literals.end());
    return r;
  };
  std::vector<std::size_t> perm(vars.size());
  std::iota(perm.begin(), perm.end(), 0);
  Rule best = renamed(perm);
  if (vars.size() <= 6) {
    std::string best_key = shape_key(best);
    while (std::next_permutation(perm.begin(), perm.end())) {
      Rule candidate = renamed(perm);
      std::string key = shape_key(candidate);
      if (key < best_key) {
        best_key = std::move(key);
        best = std::move(candidate);
      }
    }
  }
  return best;
}

RuleSet compact_rules(const Manager& mgr, NodeRef d, const CompactOptions& options) {
  std::vector<Rule> rules = path_rules(mgr, d);
  if (!options.keep_tags)
    for (Rule& r : rules) r.tag.reset();
  std::vector<Rule> feasible;
  for (Rule& r : rules)
    if (auto s = simplify_rule(std::move(r))) feasible.push_back(std::move(*s));
  if (feasible.empty()) return RuleSet{{}, mgr.min_leaf(d)};
  return compact_rule_list(std::move(feasible), options);
}

RuleSet compact_rule_list(std::vector<Rule> input, const CompactOptions& options) {
  auto tag_rank = [&](const Rule& r) {
    if (!r.tag) return 0;
    return options.tag_rank ? options.tag_rank(*r.tag) : default_rank(*r.tag);
  };

  const VariableSet& frozen = options.frozen;
  std::vector<Rule> rules;
  for (Rule& r : input) {
    if (!options.keep_tags) r.tag.reset();
    if (auto s = simplify_rule(std::move(r), frozen)) rules.push_back(std::move(*s));
  }
  if (rules.empty()) throw Error("compaction of an empty rule list");

  // values compared as integer levels inside the quadratic loops
  std::vector<Rational> values;
  for (const Rule& r : rules) values.push_back(r.value);
  std::sort(values.begin(), values.end(), less);
  values.erase(std::unique(values.begin(), values.end()), values.end());
  auto level_of = [&](const Rational& v) {
    return static_cast<int>(std::lower_bound(values.begin(), values.end(), v, less) - values.begin());
  };

  struct Item {
    Rule rule;
    int level;
    int rank;
    std::string key;
    Code plain;
    Code tagged;
  };
  // condensation and renaming depend on the shape only, and shapes recur
  // across solver iterations
  thread_local std::unordered_map<std::string, Rule> shape_cache;
  if (shape_cache.size() > 200000) shape_cache.clear();
  std::string frozen_prefix;
  for (const auto& v : frozen) frozen_prefix += v + ",";
  auto make_item = [&](Rule r, int level) {
    Binding first_seen;
    for (const auto& v : rule_variables(r))
      if (!frozen.count(v)) first_seen.emplace(v, Term::variable("#" + std::to_string(first_seen.size() + 1)));
    Rule keyed = r;
    rename_rule(keyed, first_seen);
    std::string shape = frozen_prefix + "|" + shape_key(keyed);
    auto hit = shape_cache.find(shape);
    if (hit == shape_cache.end()) {
      Rule c = canonical_rule(condense_rule(std::move(keyed), frozen), frozen);
      c.value = 0;
      hit = shape_cache.emplace(std::move(shape), std::move(c)).first;
    }
    Rule c = hit->second;
    c.value = std::move(r.value);
    std::string key = std::to_string(level) + ":" + shape_key(c);
    int rank = tag_rank(c);
    Item item{std::move(c), level, rank, std::move(key), {}, {}};
    item.plain = encode(item.rule, false, frozen);
    item.tagged = encode(item.rule, true, frozen);
    return item;
  };

  RuleSet out;
  out.default_value = values.front();
  std::vector<Item> work;
  for (Rule& r : rules) {
    bool folds = options.fold_default && r.value == out.default_value &&
                 (!options.keep_tags || options.default_covers || !r.tag || *r.tag == options.default_tag);
    if (folds) continue;
    int level = level_of(r.value);
    work.push_back(make_item(std::move(r), level));
  }

  auto order = [&](std::vector<Item>& rs) {
    std::sort(rs.begin(), rs.end(), [&](const Item& a, const Item& b) {
      if (a.level != b.level) return a.level > b.level;
      if (a.rule.literals.size() != b.rule.literals.size()) return a.rule.literals.size() < b.rule.literals.size();
      if (a.rank != b.rank) return a.rank < b.rank;
      return a.key < b.key;
    });
    rs.erase(std::unique(rs.begin(), rs.end(), [](const Item& a, const Item& b) { return a.key == b.key; }),
             rs.end());
  };

  auto remove_subsumed = [&](std::vector<Item>& rs) {
    std::vector<char> alive(rs.size(), 1);
    for (std::size_t i = 0; i < rs.size(); ++i) {
      for (std::size_t j = 0; j < rs.size() && alive[i]; ++j) {
        if (i == j || !alive[j] || rs[j].level < rs[i].level || !matches(rs[j].plain, rs[i].plain)) continue;
        bool mutual = rs[j].level == rs[i].level && matches(rs[i].plain, rs[j].plain);
        if (!mutual || j < i) alive[i] = 0;
      }
    }
    std::vector<Item> kept;
    for (std::size_t i = 0; i < rs.size(); ++i)
      if (alive[i]) kept.push_back(std::move(rs[i]));
    rs = std::move(kept);
  };

  // Some rule is satisfied wherever `candidate` is, with a larger value, or
  // with an equal value and the same action. With depth > 0 the candidate
  // may also be split on a literal L: one rule covers candidate & L and
  // candidate & !L is dominated in turn.
  std::function<bool(const std::vector<Item>&, const Rule&, int, int, const Item*)> dominated =
      [&](const std::vector<Item>& rs, const Rule& candidate, int level, int depth, const Item* skip) {
        const Code plain = encode(candidate, false, frozen);
        const Code tagged = encode(candidate, true, frozen);
        auto usable = [&](const Item& k) {
          return &k != skip && (k.level > level || k.rule.tag.has_value() == candidate.tag.has_value());
        };
        for (const Item& k : rs) {
          if (k.level < level) break;
          if (usable(k) && (k.level > level ? matches(k.plain, plain) : matches(k.tagged, tagged))) return true;
        }
        if (depth == 0) return false;
        for (const Item& k : rs) {
          if (k.level < level) break;
          if (!usable(k)) continue;
          bool equal = k.level == level;
          const Code& general = equal ? k.tagged : k.plain;
          const Code& specific = equal ? tagged : plain;
          std::size_t offset = general.size() - k.rule.literals.size();
          for (std::size_t j = 0; j < k.rule.literals.size(); ++j) {
            const std::size_t missing = offset + j;
            std::function<bool(const Small<int, 8>&)> accept = [&](const Small<int, 8>& theta) {
              Literal lit = k.rule.literals[j];
              for (std::size_t i = 0; i < lit.label.args.size(); ++i) {
                int a = general.arg(missing, i);
                if (a < 0) {
                  a = theta[static_cast<std::size_t>(-a - 1)];
                  if (a == kUnset) return false;
                }
                lit.label.args[i] = decode(specific, a);
              }
              if (lit.label.is_equality()) lit.label = Label::equality(lit.label.args[0], lit.label.args[1]);
              Rule other = candidate;
              lit.positive = !lit.positive;
              other.literals.push_back(std::move(lit));
              auto rest = simplify_rule(std::move(other), frozen);
              return !rest || dominated(rs, *rest, level, depth - 1, skip);
            };
            Matcher m(general, specific, missing);
            m.accept = &accept;
            if (m.run()) return true;
          }
        }
        return false;
      };

  // drops whole rules covered by the others
  auto remove_covered = [&](std::vector<Item>& rs) {
    for (std::size_t i = rs.size(); i-- > 0;) {
      if (dominated(rs, rs[i].rule, rs[i].level, kSplitDepth, &rs[i]))
        rs.erase(rs.begin() + static_cast<std::ptrdiff_t>(i));
    }
  };

  auto drop_literals = [&](std::vector<Item>& rs, int depth) {
    bool changed = false;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      bool progress = true;
      while (progress) {
        progress = false;
        for (std::size_t l = 0; l < rs[i].rule.literals.size(); ++l) {
          Rule flipped = rs[i].rule;
          flipped.literals[l].positive = !flipped.literals[l].positive;
          auto simplified = simplify_rule(flipped, frozen);
          if (simplified && !dominated(rs, *simplified, rs[i].level, depth, nullptr)) continue;
          Rule generalized = rs[i].rule;
          generalized.literals.erase(generalized.literals.begin() + static_cast<std::ptrdiff_t>(l));
          rs[i] = make_item(std::move(generalized), rs[i].level);
          progress = changed = true;
          break;
        }
      }
    }
    return changed;
  };

  // plain dominance to a fixpoint first; case splits only on what is left
  order(work);
  for (int depth = 0; depth <= kSplitDepth; ++depth) {
    while (true) {
      remove_subsumed(work);
      bool changed = drop_literals(work, depth);
      order(work);
      if (!changed) break;
    }
  }
  remove_subsumed(work);
  remove_covered(work);
  for (Item& item : work) out.rules.push_back(std::move(item.rule));
  return out;
}

NodeRef build_from_rules(Manager& mgr, const RuleSet& rules, const CompactOptions& options) {
  std::optional<ActionTag> default_tag;
  if (options.keep_tags) default_tag = options.default_tag;
  // chains fall back to a value below the default so that the final max
  // against the default leaf resolves ties in favour of the rule
  NodeRef sentinel = mgr.leaf(rules.default_value - 1);
  NodeRef result = sentinel;
  for (const Rule& rule : rules.rules) {
    std::vector<Literal> lits = rule.literals;
    std::sort(lits.begin(), lits.end());
    NodeRef chain = mgr.leaf(rule.value, options.keep_tags ? rule.tag : std::nullopt);
    for (auto it = lits.rbegin(); it != lits.rend(); ++it)
      chain = it->positive ? mgr.mk_node(it->label, chain, sentinel) : mgr.mk_node(it->label, sentinel, chain);
    result = mgr.apply(ApplyOp::max, result, chain);
  }
  return mgr.apply(ApplyOp::max, result, mgr.leaf(rules.default_value, default_tag));
}

NodeRef compact(Manager& mgr, NodeRef d, const CompactOptions& options) {
  return build_from_rules(mgr, compact_rules(mgr, d, options), options);
}

}  // namespace fodd

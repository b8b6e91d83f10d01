#pragma once

// Helpers shared by the test binaries. The oracles here deliberately avoid
// the library's evaluators so they can check them.

#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fodd/domain.hpp"
#include "fodd/expression.hpp"
#include "fodd/manager.hpp"
#include "fodd/semantics.hpp"

namespace testing {

inline std::string domain_path(const std::string& name) { return std::string(FODD_DOMAIN_DIR) + "/" + name; }

inline fodd::DomainSpec load(fodd::Manager& mgr, const std::string& name) {
  return fodd::load_domain_file(domain_path(name + ".fodd"), mgr);
}

inline fodd::Rational q(long num, long den = 1) { return fodd::Rational(num) / den; }

// Brute force max aggregation: collect variables by walking the graph,
// enumerate every assignment, follow the edges with plain atom lookups.
inline fodd::Rational naive_map(const fodd::Manager& mgr, fodd::NodeRef d, const fodd::Interpretation& s) {
  std::set<std::string> vars;
  std::vector<fodd::NodeRef> stack{d};
  std::set<fodd::NodeRef> seen;
  while (!stack.empty()) {
    fodd::NodeRef x = stack.back();
    stack.pop_back();
    if (mgr.is_leaf(x) || !seen.insert(x).second) continue;
    for (const auto& t : mgr.label_of(x).args)
      if (t.is_variable()) vars.insert(t.name);
    stack.push_back(mgr.hi(x));
    stack.push_back(mgr.lo(x));
  }
  std::vector<std::string> names(vars.begin(), vars.end());
  std::vector<int> value(names.size(), 0);
  const int n = s.universe_size();
  auto object = [&](const fodd::Term& t) {
    if (t.is_constant()) return *s.constant(t.name);
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == t.name) return value[i];
    return -1;
  };
  std::optional<fodd::Rational> best;
  while (true) {
    fodd::NodeRef x = d;
    while (!mgr.is_leaf(x)) {
      const fodd::Label& l = mgr.label_of(x);
      bool truth;
      if (l.is_equality()) {
        truth = object(l.left()) == object(l.right());
      } else {
        std::vector<int> args;
        for (const auto& t : l.args) args.push_back(object(t));
        truth = s.holds(l.predicate, args);
      }
      x = truth ? mgr.hi(x) : mgr.lo(x);
    }
    const fodd::Rational& v = mgr.leaf_of(x).value;
    if (!best || v > *best) best = v;
    std::size_t k = value.size();
    while (k > 0 && ++value[k - 1] == n) value[--k] = 0;
    if (k == 0) break;
  }
  return *best;
}

inline fodd::Interpretation state(int n, const std::vector<fodd::GroundAtom>& atoms) {
  fodd::Interpretation s(n);
  for (const auto& a : atoms) s.add(a);
  return s;
}

inline fodd::GroundAtom atom(const std::string& p, int object) { return {p, {object}}; }

// Random diagram over unary p, q, h and variables x, y, built through ite so
// ordering is handled by the kernel.
inline fodd::NodeRef random_diagram(fodd::Manager& mgr, std::mt19937& rng, int depth) {
  static const std::vector<fodd::Label> labels = [] {
    std::vector<fodd::Label> out;
    for (const char* p : {"p", "q", "h"})
      for (const char* v : {"x", "y"}) out.push_back(fodd::Label::atom(p, {fodd::Term::variable(v)}));
    out.push_back(fodd::Label::equality(fodd::Term::variable("x"), fodd::Term::variable("y")));
    return out;
  }();
  std::uniform_int_distribution<int> leaf(0, 4);
  std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);
  std::bernoulli_distribution stop(0.25);
  if (depth == 0 || stop(rng)) return mgr.leaf(leaf(rng));
  fodd::NodeRef hi = random_diagram(mgr, rng, depth - 1);
  fodd::NodeRef lo = random_diagram(mgr, rng, depth - 1);
  return mgr.ite(mgr.indicator(labels[pick(rng)]), hi, lo);
}

inline fodd::Vocabulary pqh() { return {{{"p", 1}, {"q", 1}, {"h", 1}}, {}}; }

}  // namespace testing

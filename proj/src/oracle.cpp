#include "fodd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "fodd/error.hpp"

namespace fodd {

namespace {

std::vector<std::vector<int>> tuples(int n, std::size_t arity) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(arity, 0);
  while (true) {
    out.push_back(cur);
    std::size_t k = arity;
    while (k > 0) {
      if (++cur[k - 1] < n) break;
      cur[k - 1] = 0;
      --k;
    }
    if (k == 0) return out;
  }
}

Interpretation successor(Manager& mgr, const DomainSpec& spec, const ActionModel& action, const Alternative& alt,
                         const Interpretation& s, const std::vector<int>& args) {
  Interpretation next(s.universe_size());
  for (const auto& [c, o] : s.constant_map()) next.map_constant(c, o);
  for (const auto& decl : spec.predicates) {
    Tvd tvd = spec.tvd(mgr, action, alt, decl.name);
    for (const auto& objects : tuples(s.universe_size(), static_cast<std::size_t>(decl.arity))) {
      Valuation val;
      for (std::size_t i = 0; i < tvd.params.size(); ++i) val[tvd.params[i]] = objects[i];
      for (std::size_t i = 0; i < tvd.action_params.size(); ++i) val[tvd.action_params[i]] = args[i];
      if (evaluate(mgr, tvd.diagram, s, val) == 1) next.add(GroundAtom{decl.name, objects});
    }
  }
  return next;
}

std::string state_key(const Interpretation& s) { return s.to_string(); }

}  // namespace

int GroundMdp::index_of(const Interpretation& s) const {
  std::size_t mask = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (s.holds(atoms[i])) mask |= std::size_t{1} << i;
  std::size_t map = 0, radix = 1;
  for (const auto& c : constants) {
    map += radix * static_cast<std::size_t>(*s.constant(c));
    radix *= static_cast<std::size_t>(universe);
  }
  return static_cast<int>((map << atoms.size()) | mask);
}

std::vector<Interpretation> enumerate_states(const DomainSpec& spec, int n, std::size_t atom_budget) {
  return enumerate_interpretations(spec.vocabulary(), n, atom_budget);
}

std::vector<GroundAction> ground_actions(const DomainSpec& spec, int n) {
  std::vector<GroundAction> out;
  for (const auto& a : spec.actions)
    for (const auto& args : tuples(n, a.params.size())) out.push_back({a.name, args});
  return out;
}

std::vector<std::pair<Interpretation, Rational>> transition(Manager& mgr, const DomainSpec& spec,
                                                           const Interpretation& s, const GroundAction& a) {
  const ActionModel* action = spec.find_action(a.action);
  if (!action) throw Error("unknown action " + a.action);
  if (action->params.size() != a.args.size()) throw Error("ground action " + to_string(a) + " has wrong arity");
  Valuation params;
  for (std::size_t i = 0; i < a.args.size(); ++i) params[action->params[i]] = a.args[i];
  std::vector<std::pair<Interpretation, Rational>> out;
  std::map<std::string, std::size_t> seen;
  for (const auto& alt : action->alternatives) {
    Rational p = evaluate(mgr, alt.probability, s, params);
    if (p == 0) continue;
    Interpretation next = successor(mgr, spec, *action, alt, s, a.args);
    std::string key = state_key(next);
    if (auto it = seen.find(key); it != seen.end()) {
      out[it->second].second += p;
    } else {
      seen.emplace(key, out.size());
      out.emplace_back(std::move(next), p);
    }
  }
  return out;
}

GroundMdp build_ground_mdp(Manager& mgr, const DomainSpec& spec, int n, std::size_t atom_budget) {
  GroundMdp m;
  m.universe = n;
  m.atoms = ground_atoms(spec.vocabulary(), n);
  m.states = enumerate_states(spec, n, atom_budget);
  m.actions = ground_actions(spec, n);
  m.discount = spec.discount;
  m.absorbing_goal = spec.absorbing_goal;
  m.constants = spec.constants;
  m.reward.reserve(m.states.size());
  m.transitions.resize(m.states.size());
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    m.reward.push_back(map_max(mgr, spec.reward, m.states[s]));
    for (const auto& a : m.actions) {
      std::vector<GroundMdp::Outcome> row;
      Rational total = 0;
      for (auto& [next, p] : transition(mgr, spec, m.states[s], a)) {
        row.push_back({m.index_of(next), p, to_double(p)});
        total += p;
      }
      if (total != 1)
        throw Error("transition row of " + to_string(a) + " in state " + m.states[s].to_string() + " sums to " +
                    to_exact_string(total));
      m.transitions[s].push_back(std::move(row));
    }
  }
  return m;
}

Rational backup(const GroundMdp& m, int s, int a, const std::vector<Rational>& v) {
  Rational expected = 0;
  for (const auto& o : m.transitions[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)])
    expected += o.probability * v[static_cast<std::size_t>(o.state)];
  Rational future = m.discount * expected;
  const Rational& r = m.reward[static_cast<std::size_t>(s)];
  if (!m.absorbing_goal) return r + future;
  return less(future, r) ? r : future;
}

double backup(const GroundMdp& m, int s, int a, const std::vector<double>& v) {
  double expected = 0;
  for (const auto& o : m.transitions[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)])
    expected += o.weight * v[static_cast<std::size_t>(o.state)];
  double future = to_double(m.discount) * expected;
  double r = to_double(m.reward[static_cast<std::size_t>(s)]);
  return m.absorbing_goal ? std::max(r, future) : r + future;
}

OracleSolution exact_solve(const GroundMdp& m, double tol) {
  double g = to_double(m.discount);
  double threshold = tol * (1 - g) / (2 * g);
  OracleSolution sol;
  sol.values = to_doubles(m.reward);
  sol.policy.assign(m.states.size(), 0);
  while (true) {
    std::vector<double> next(m.states.size());
    double residual = 0;
    for (std::size_t s = 0; s < m.states.size(); ++s) {
      double best = 0;
      int arg = -1;
      for (std::size_t a = 0; a < m.actions.size(); ++a) {
        double q = backup(m, static_cast<int>(s), static_cast<int>(a), sol.values);
        if (arg < 0 || q > best + 1e-12) {
          best = q;
          arg = static_cast<int>(a);
        }
      }
      next[s] = best;
      sol.policy[s] = arg;
      residual = std::max(residual, std::abs(best - sol.values[s]));
    }
    sol.values = std::move(next);
    ++sol.iterations;
    sol.residual = residual;
    if (residual <= threshold || sol.iterations >= 100000) break;
  }
  return sol;
}

std::vector<Rational> value_table(const Manager& mgr, NodeRef d, const GroundMdp& m) {
  std::vector<Rational> out;
  out.reserve(m.states.size());
  CompiledDiagram compiled(mgr, d);
  for (const auto& s : m.states) out.push_back(compiled.max_value(s));
  return out;
}

std::vector<double> to_doubles(const std::vector<Rational>& values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(to_double(v));
  return out;
}

CompareReport compare(const Manager& mgr, NodeRef d, const GroundMdp& m, const std::vector<double>& table,
                      double tol) {
  CompareReport report;
  CompiledDiagram compiled(mgr, d);
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    double diff = to_double(compiled.max_value(m.states[s])) - table[s];
    report.diffs.push_back(diff);
    report.max_abs_diff = std::max(report.max_abs_diff, std::abs(diff));
    if (std::abs(diff) > tol) report.offending.push_back(static_cast<int>(s));
  }
  return report;
}

std::vector<int> policy_actions(const Manager& mgr, const PolicyDiagram& p, const GroundMdp& m) {
  std::vector<int> out;
  out.reserve(m.states.size());
  CompiledDiagram compiled(mgr, p.diagram);
  for (const auto& s : m.states) {
    GroundAction chosen = select_action(mgr, compiled, s).action;
    auto it = std::find(m.actions.begin(), m.actions.end(), chosen);
    if (it == m.actions.end()) throw Error("policy selected unknown ground action " + to_string(chosen));
    out.push_back(static_cast<int>(it - m.actions.begin()));
  }
  return out;
}

std::vector<Rational> policy_backup(const Manager& mgr, const PolicyDiagram& p, const GroundMdp& m,
                                    const std::vector<Rational>& w) {
  auto actions = policy_actions(mgr, p, m);
  std::vector<Rational> out;
  out.reserve(m.states.size());
  for (std::size_t s = 0; s < m.states.size(); ++s) out.push_back(backup(m, static_cast<int>(s), actions[s], w));
  return out;
}

std::vector<Rational> bellman_backup(const GroundMdp& m, const std::vector<Rational>& w) {
  std::vector<Rational> out;
  out.reserve(m.states.size());
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    Rational best = backup(m, static_cast<int>(s), 0, w);
    for (std::size_t a = 1; a < m.actions.size(); ++a) {
      Rational q = backup(m, static_cast<int>(s), static_cast<int>(a), w);
      if (less(best, q)) best = std::move(q);
    }
    out.push_back(std::move(best));
  }
  return out;
}

std::vector<double> policy_value_oracle(const Manager& mgr, const PolicyDiagram& p, const GroundMdp& m,
                                        double tol) {
  auto actions = policy_actions(mgr, p, m);
  double g = to_double(m.discount);
  double threshold = tol * (1 - g) / (2 * g);
  std::vector<double> v = to_doubles(m.reward);
  for (int iter = 0; iter < 100000; ++iter) {
    std::vector<double> next(m.states.size());
    double residual = 0;
    for (std::size_t s = 0; s < m.states.size(); ++s) {
      next[s] = backup(m, static_cast<int>(s), actions[s], v);
      residual = std::max(residual, std::abs(next[s] - v[s]));
    }
    v = std::move(next);
    if (residual <= threshold) break;
  }
  return v;
}

std::vector<Rational> nonstationary_value(const GroundMdp& m, const std::vector<std::vector<int>>& tables) {
  std::vector<Rational> u = m.reward;
  for (const auto& table : tables) {
    std::vector<Rational> next;
    next.reserve(m.states.size());
    for (std::size_t s = 0; s < m.states.size(); ++s) next.push_back(backup(m, static_cast<int>(s), table[s], u));
    u = std::move(next);
  }
  return u;
}

std::string dump(const GroundMdp& m, const std::vector<double>& values, const std::vector<int>& policy) {
  std::ostringstream os;
  os.precision(12);
  os << "universe " << m.universe << " states " << m.states.size() << " actions " << m.actions.size() << "\n";
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    os << s << " " << m.states[s].to_string() << " value " << values[s];
    if (s < policy.size()) os << " action " << to_string(m.actions[static_cast<std::size_t>(policy[s])]);
    os << "\n";
  }
  return os.str();
}

}  // namespace fodd

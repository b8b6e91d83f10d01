// fodd_planner: solve, check and evaluate relational MDP domains.
//
// Exit status: 0 ok, 1 usage, 2 parse/validation, 3 no convergence,
// 4 invariant failure, 5 atom budget refusal.

#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "fodd/bundle.hpp"
#include "fodd/invariants.hpp"

namespace {

enum Exit { ok = 0, usage = 1, parse = 2, no_convergence = 3, invariant = 4, budget = 5 };

struct RunConfig {
  std::string domain;
  std::optional<std::string> gamma;
  std::string epsilon = "0.001";
  std::string m_schedule = "1";
  std::string solver = "rmpi";
  int max_outer = 100;
  int universe = 1;
  std::string out;
  std::string exports = "dot,list,trace";
  std::vector<std::string> state;
};

fodd::Rational positive_rational(const std::string& text, const char* what) {
  fodd::Rational r;
  try {
    r = fodd::parse_rational(text);
  } catch (const std::exception&) {
    throw CLI::ValidationError(what, "not a number: " + text);
  }
  if (r <= 0) throw CLI::ValidationError(what, "must be positive");
  return r;
}

fodd::MpiSchedule schedule_of(const RunConfig& cfg) {
  fodd::MpiSchedule s;
  s.epsilon = positive_rational(cfg.epsilon, "--epsilon");
  s.max_outer = cfg.max_outer;
  s.m.clear();
  std::stringstream in(cfg.m_schedule);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw CLI::ValidationError("--m-schedule", "expected non-negative integers, got '" + item + "'");
    s.m.push_back(std::stoi(item));
  }
  if (s.m.empty()) throw CLI::ValidationError("--m-schedule", "empty schedule");
  if (s.max_outer < 1) throw CLI::ValidationError("--max-iter", "must be at least 1");
  return s;
}

fodd::ExportFlags exports_of(const std::string& text) {
  fodd::ExportFlags flags{false, false, false};
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item == "dot") flags.dot = true;
    else if (item == "list") flags.list = true;
    else if (item == "trace") flags.trace = true;
    else if (!item.empty()) throw CLI::ValidationError("--export", "unknown export '" + item + "'");
  }
  return flags;
}

fodd::DomainSpec load(fodd::Manager& mgr, const RunConfig& cfg) {
  fodd::DomainSpec spec = fodd::load_domain_file(cfg.domain, mgr);
  if (cfg.gamma) {
    fodd::Rational g = positive_rational(*cfg.gamma, "--gamma");
    if (g >= 1) throw CLI::ValidationError("--gamma", "must lie strictly between 0 and 1");
    spec.discount = g;
  }
  return spec;
}

fodd::SolveResult solve(fodd::Manager& mgr, const fodd::DomainSpec& spec, const RunConfig& cfg) {
  fodd::MpiSchedule schedule = schedule_of(cfg);
  if (cfg.solver == "vi") return fodd::value_iteration(mgr, spec, schedule.epsilon, schedule.max_outer);
  return fodd::rmpi(mgr, spec, schedule);
}

int cmd_solve(const RunConfig& cfg) {
  fodd::Manager mgr;
  fodd::DomainSpec spec = load(mgr, cfg);
  fodd::ExportFlags flags = exports_of(cfg.exports);
  fodd::SolveResult result = solve(mgr, spec, cfg);
  for (const auto& w : result.trace.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "status " << (result.trace.converged ? "converged" : "iteration-cap") << "\n";
  std::cout << "steps " << result.trace.steps.size() << " outer " << result.trace.outer_values.size() - 1 << "\n";
  std::cout << fodd::format_decision_list(fodd::decision_list(mgr, spec, result.policy.diagram));
  if (!cfg.out.empty()) {
    fodd::write_bundle(cfg.out, mgr, spec, result, flags);
    std::cout << "bundle " << cfg.out << "\n";
  }
  return result.trace.converged ? ok : no_convergence;
}

int cmd_check(const RunConfig& cfg) {
  fodd::Manager mgr;
  fodd::DomainSpec spec = load(mgr, cfg);
  fodd::SuiteConfig suite{cfg.universe, schedule_of(cfg), 1e-9};
  fodd::SuiteReport report = fodd::run_invariant_suite(mgr, spec, suite);
  for (const auto& c : report.checks) {
    nlohmann::ordered_json rec{{"check", c.name}, {"passed", c.passed}, {"detail", c.detail}};
    std::cout << rec.dump() << "\n";
  }
  if (report.witness.found) {
    fodd::GroundMdp m = fodd::build_ground_mdp(mgr, spec, report.witness.universe);
    nlohmann::ordered_json rec{
        {"witness", "fixed-policy-strict"},
        {"universe", report.witness.universe},
        {"generation", report.witness.generation},
        {"state", m.states[static_cast<std::size_t>(report.witness.state)].to_string()},
        {"value", fodd::to_decimal_string(report.witness.value)},
        {"fixed_policy_backup", fodd::to_decimal_string(report.witness.backup)}};
    std::cout << rec.dump() << "\n";
  }
  return report.passed() ? ok : invariant;
}

int cmd_eval(const RunConfig& cfg) {
  fodd::Manager mgr;
  fodd::DomainSpec spec;
  fodd::NodeRef value;
  fodd::PolicyDiagram policy;
  if (!cfg.out.empty() && std::filesystem::exists(std::filesystem::path(cfg.out) / "policy.expr")) {
    fodd::LoadedBundle b = fodd::load_bundle(cfg.out, mgr);
    spec = std::move(b.spec);
    value = b.value;
    policy = b.policy;
  } else if (!cfg.domain.empty()) {
    spec = load(mgr, cfg);
    fodd::SolveResult r = solve(mgr, spec, cfg);
    value = r.value;
    policy = r.policy;
  } else {
    throw CLI::ValidationError("eval", "needs --out with a solved bundle or --domain");
  }
  std::string atoms;
  for (const auto& a : cfg.state) atoms += a + " ";
  fodd::Interpretation s = fodd::parse_state(atoms, spec.vocabulary(), cfg.universe);
  fodd::Selection sel = fodd::select_action(mgr, policy, s);
  std::cout << "state " << s.to_string() << "\n";
  std::cout << "value " << fodd::to_decimal_string(fodd::map_max(mgr, value, s)) << "\n";
  std::cout << "action " << fodd::to_string(sel.action) << "\n";
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic planner for relational MDPs over first-order decision diagrams"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub, bool domain_required) {
    auto* d = sub->add_option("--domain", cfg.domain, "domain file");
    if (domain_required) d->required();
    sub->add_option("--gamma", cfg.gamma, "discount override in (0,1)");
    sub->add_option("--epsilon", cfg.epsilon, "convergence tolerance (> 0)");
    sub->add_option("--m-schedule", cfg.m_schedule, "regress-policy steps per outer iteration, e.g. 1,1,2");
    sub->add_option("--solver", cfg.solver, "rmpi or vi")->check(CLI::IsMember({"rmpi", "vi"}));
    sub->add_option("--max-iter", cfg.max_outer, "outer iteration cap");
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "solve a domain and write a result bundle");
  add_common(solve_cmd, true);
  solve_cmd->add_option("--out", cfg.out, "bundle directory");
  solve_cmd->add_option("--export", cfg.exports, "comma list of dot,list,trace");

  CLI::App* check_cmd = app.add_subcommand("check", "run the invariant suite against the ground oracle");
  add_common(check_cmd, true);
  check_cmd->add_option("--universe", cfg.universe, "largest universe size")->check(CLI::PositiveNumber);

  CLI::App* eval_cmd = app.add_subcommand("eval", "value and action of a policy on a ground state");
  add_common(eval_cmd, false);
  eval_cmd->add_option("--out", cfg.out, "bundle directory written by solve");
  eval_cmd->add_option("--universe", cfg.universe, "minimum universe size")->check(CLI::PositiveNumber);
  eval_cmd->add_option("state", cfg.state, "ground atoms, e.g. p1(1) q2(1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ok : usage;
  }

  try {
    if (app.got_subcommand(solve_cmd)) return cmd_solve(cfg);
    if (app.got_subcommand(check_cmd)) return cmd_check(cfg);
    return cmd_eval(cfg);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return usage;
  } catch (const fodd::ParseError& e) {
    std::cerr << (cfg.domain.empty() ? cfg.out : cfg.domain) << ":" << e.what() << " [" << fodd::to_string(e.kind())
              << "]\n";
    return parse;
  } catch (const fodd::BudgetError& e) {
    std::cerr << "budget: " << e.what() << " (set FODD_ATOM_BUDGET to raise it)\n";
    return budget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return invariant;
  }
}

#include "fodd/domain.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fodd {

const Tvd* Alternative::find_tvd(const std::string& predicate) const {
  for (const auto& t : tvds)
    if (t.predicate == predicate) return &t;
  return nullptr;
}

ActionTag ActionModel::schema() const {
  ActionTag tag{name, {}};
  for (const auto& p : params) tag.args.push_back(Term::variable(p));
  return tag;
}

const PredicateDecl* DomainSpec::find_predicate(const std::string& n) const {
  for (const auto& p : predicates)
    if (p.name == n) return &p;
  return nullptr;
}

const ActionModel* DomainSpec::find_action(const std::string& n) const {
  for (const auto& a : actions)
    if (a.name == n) return &a;
  return nullptr;
}

const ActionModel& DomainSpec::noop() const {
  const ActionModel* a = find_action(kNoopAction);
  if (!a) throw Error("domain has no no-op action");
  return *a;
}

int DomainSpec::tag_rank(const ActionTag& tag) const {
  if (tag.action == kNoopAction) return 0;
  for (std::size_t i = 0; i < actions.size(); ++i)
    if (actions[i].name == tag.action) return static_cast<int>(i) + 1;
  return static_cast<int>(actions.size()) + 1;
}

Tvd DomainSpec::tvd(Manager& mgr, const ActionModel& action, const Alternative& alt,
                    const std::string& predicate) const {
  if (const Tvd* t = alt.find_tvd(predicate)) return *t;
  const PredicateDecl* decl = find_predicate(predicate);
  if (!decl) throw Error("unknown predicate " + predicate);
  Tvd t = frame_tvd(mgr, *decl, action.params);
  t.action = action.name;
  t.alternative = alt.name;
  return t;
}

Tvd frame_tvd(Manager& mgr, const PredicateDecl& predicate, const std::vector<std::string>& action_params) {
  Tvd t;
  t.predicate = predicate.name;
  t.action_params = action_params;
  std::vector<Term> args;
  for (int i = 1; i <= predicate.arity; ++i) {
    std::string name = "x" + std::to_string(i);
    while (std::find(action_params.begin(), action_params.end(), name) != action_params.end()) name = "_" + name;
    t.params.push_back(name);
    args.push_back(Term::variable(name));
  }
  t.diagram = mgr.indicator(Label::atom(predicate.name, std::move(args)));
  return t;
}

NodeRef instantiate_tvd(Manager& mgr, const Tvd& tvd, const std::vector<Term>& atom_args,
                        const std::vector<Term>& action_args) {
  if (atom_args.size() != tvd.params.size())
    throw std::invalid_argument("TVD for " + tvd.predicate + " expects " + std::to_string(tvd.params.size()) +
                                " predicate argument(s), got " + std::to_string(atom_args.size()));
  if (action_args.size() != tvd.action_params.size())
    throw std::invalid_argument("TVD for " + tvd.predicate + " under " + tvd.action + " expects " +
                                std::to_string(tvd.action_params.size()) + " action argument(s), got " +
                                std::to_string(action_args.size()));
  Binding binding;
  for (std::size_t i = 0; i < atom_args.size(); ++i) binding.emplace(tvd.params[i], atom_args[i]);
  for (std::size_t i = 0; i < action_args.size(); ++i) binding.emplace(tvd.action_params[i], action_args[i]);
  // simultaneous substitution; every TVD variable is bound, so nothing can be captured
  return mgr.substitute_unchecked(tvd.diagram, binding);
}

namespace {

struct Problem {
  DiagnosticKind kind;
  std::string message;
};

std::optional<Problem> check_tvd(const Manager& mgr, const Tvd& t) {
  std::set<std::string> allowed(t.params.begin(), t.params.end());
  allowed.insert(t.action_params.begin(), t.action_params.end());
  for (const auto& v : mgr.variables(t.diagram))
    if (!allowed.count(v))
      return Problem{DiagnosticKind::tvd_variable,
                     "TVD for " + t.predicate + " under " + t.action + " mentions variable '" + v +
                         "'; no other variables are allowed in the TVD besides action and predicate parameters"};
  for (NodeRef l : mgr.leaves(t.diagram)) {
    const Leaf& leaf = mgr.leaf_of(l);
    if (leaf.tag || (leaf.value != 0 && leaf.value != 1))
      return Problem{DiagnosticKind::tvd_leaf,
                     "TVD for " + t.predicate + " under " + t.action + " has leaf " + to_exact_string(leaf.value) +
                         "; TVD leaves must be 0 or 1"};
  }
  return std::nullopt;
}

std::optional<Problem> check_probabilities(const DomainSpec& spec, const ActionModel& action, Manager& mgr) {
  std::set<std::string> params(action.params.begin(), action.params.end());
  std::set<std::string> predicates;
  for (const auto& alt : action.alternatives) {
    for (const auto& v : mgr.variables(alt.probability))
      if (!params.count(v))
        return Problem{DiagnosticKind::probability, "probability of " + action.name + "." + alt.name +
                                                        " mentions variable '" + v +
                                                        "'; probabilities may only depend on action parameters"};
    for (const auto& label : mgr.labels(alt.probability))
      if (label.is_atom()) predicates.insert(label.predicate);
    for (NodeRef l : mgr.leaves(alt.probability))
      if (mgr.leaf_of(l).tag)
        return Problem{DiagnosticKind::probability, "probability of " + action.name + "." + alt.name + " has a tagged leaf"};
  }
  Vocabulary vocab;
  vocab.constants = spec.constants;
  for (const auto& p : predicates) vocab.predicates.push_back(*spec.find_predicate(p));
  int n = std::max<int>(1, static_cast<int>(action.params.size()));
  std::vector<Interpretation> interps;
  try {
    interps = enumerate_interpretations(vocab, n);
  } catch (const BudgetError& e) {
    return Problem{DiagnosticKind::probability,
                   "cannot check probability normalization of " + action.name + ": " + e.what()};
  }
  std::vector<int> objects(action.params.size(), 0);
  for (const auto& interp : interps) {
    bool done = false;
    std::fill(objects.begin(), objects.end(), 0);
    while (!done) {
      Valuation val;
      for (std::size_t i = 0; i < objects.size(); ++i) val[action.params[i]] = objects[i];
      Rational total = 0;
      for (const auto& alt : action.alternatives) {
        Rational p = evaluate(mgr, alt.probability, interp, val);
        if (p < 0)
          return Problem{DiagnosticKind::probability,
                         "probability of " + action.name + "." + alt.name + " is negative (" + to_exact_string(p) + ")"};
        total += p;
      }
      if (total != 1)
        return Problem{DiagnosticKind::probability, "alternative probabilities of " + action.name + " sum to " +
                                                        to_exact_string(total) + " instead of 1"};
      done = true;
      for (std::size_t k = objects.size(); k-- > 0;) {
        if (++objects[k] < n) {
          done = false;
          break;
        }
        objects[k] = 0;
      }
    }
  }
  return std::nullopt;
}

std::optional<Problem> check_reward(const DomainSpec& spec, const Manager& mgr) {
  for (NodeRef l : mgr.leaves(spec.reward))
    if (mgr.leaf_of(l).tag) return Problem{DiagnosticKind::invalid_value, "reward leaves cannot carry action tags"};
  if (!spec.absorbing_goal) return std::nullopt;
  std::set<Rational> nonzero;
  for (NodeRef l : mgr.leaves(spec.reward)) {
    const Rational& v = mgr.leaf_of(l).value;
    if (v < 0) return Problem{DiagnosticKind::absorbing_goal, "absorbing-goal domains need a non-negative reward"};
    if (v != 0) nonzero.insert(v);
  }
  if (nonzero.size() != 1)
    return Problem{DiagnosticKind::absorbing_goal, "absorbing-goal domains need exactly one non-zero reward leaf, found " +
                                                       std::to_string(nonzero.size())};
  return std::nullopt;
}

ActionModel make_implicit_noop(Manager& mgr) {
  ActionModel noop;
  noop.name = kNoopAction;
  noop.implicit = true;
  noop.alternatives.push_back(Alternative{"id", mgr.one(), {}});
  return noop;
}

class DomainParser {
 public:
  DomainParser(std::string_view text, Manager& mgr) : in_(tokenize(text)), mgr_(mgr) {}

  DomainSpec run() {
    while (true) {
      in_.skip_newlines();
      Token kw = in_.peek();
      if (kw.kind == Token::Kind::end) break;
      if (kw.kind != Token::Kind::identifier) in_.fail(kw, "expected a declaration");
      in_.next();
      if (kw.text == "domain") {
        spec_.name = in_.expect_identifier("a domain name").text;
      } else if (kw.text == "predicates") {
        parse_predicates();
      } else if (kw.text == "constants") {
        parse_constants();
      } else if (kw.text == "discount") {
        in_.expect_punct(":");
        Token t = in_.next();
        if (t.kind != Token::Kind::number) in_.fail(t, "expected a discount factor");
        spec_.discount = parse_rational(t.text);
        if (spec_.discount <= 0 || spec_.discount >= 1)
          in_.fail(t, "discount must lie strictly between 0 and 1", DiagnosticKind::invalid_value);
        have_discount_ = true;
      } else if (kw.text == "absorbing-goal") {
        in_.expect_punct(":");
        Token t = in_.expect_identifier("true or false");
        if (t.text != "true" && t.text != "false") in_.fail(t, "expected true or false");
        spec_.absorbing_goal = t.text == "true";
        absorbing_pos_ = t.pos;
      } else if (kw.text == "reward") {
        in_.expect_punct(":");
        reward_pos_ = in_.peek().pos;
        spec_.reward = parse_expression(in_, mgr_, spec_.vocabulary());
        have_reward_ = true;
      } else if (kw.text == "action") {
        parse_action(kw);
      } else if (kw.text == "alternative") {
        parse_alternative(kw);
      } else if (kw.text == "tvd") {
        parse_tvd(kw);
      } else {
        in_.fail(kw, "unknown declaration '" + kw.text + "'");
      }
      end_statement();
    }
    finish_action();
    if (!have_discount_) throw ParseError(DiagnosticKind::syntax, in_.peek().pos, "missing 'discount:' declaration");
    if (!have_reward_) spec_.reward = mgr_.zero();
    if (!spec_.find_action(kNoopAction)) spec_.actions.push_back(make_implicit_noop(mgr_));
    if (auto p = check_reward(spec_, mgr_))
      throw ParseError(p->kind, spec_.absorbing_goal ? absorbing_pos_ : reward_pos_, p->message);
    return std::move(spec_);
  }

 private:
  void end_statement() {
    Token t = in_.peek();
    if (t.kind != Token::Kind::newline && t.kind != Token::Kind::end) in_.fail(t, "expected end of line");
  }

  void parse_predicates() {
    in_.expect_punct(":");
    while (true) {
      Token name = in_.expect_identifier("a predicate name");
      in_.expect_punct("/");
      Token arity = in_.next();
      if (arity.kind != Token::Kind::number || arity.text.find_first_not_of("0123456789") != std::string::npos)
        in_.fail(arity, "expected a non-negative arity");
      if (spec_.find_predicate(name.text))
        in_.fail(name, "predicate '" + name.text + "' declared twice", DiagnosticKind::duplicate);
      spec_.predicates.push_back({name.text, std::stoi(arity.text)});
      if (!in_.accept_punct(",")) break;
    }
  }

  void parse_constants() {
    in_.expect_punct(":");
    while (true) {
      Token t = in_.next();
      if (t.kind != Token::Kind::identifier && t.kind != Token::Kind::quoted) in_.fail(t, "expected a constant name");
      if (std::find(spec_.constants.begin(), spec_.constants.end(), t.text) != spec_.constants.end())
        in_.fail(t, "constant '" + t.text + "' declared twice", DiagnosticKind::duplicate);
      spec_.constants.push_back(t.text);
      if (!in_.accept_punct(",")) break;
    }
  }

  std::vector<std::string> parse_variable_list() {
    std::vector<std::string> out;
    in_.expect_punct("(");
    if (in_.accept_punct(")")) return out;
    while (true) {
      Token t = in_.peek();
      Term term = parse_term(in_, spec_.vocabulary());
      if (!term.is_variable()) in_.fail(t, "expected a variable, found constant '" + term.name + "'");
      if (std::find(out.begin(), out.end(), term.name) != out.end())
        in_.fail(t, "variable '" + term.name + "' repeated in parameter list", DiagnosticKind::duplicate);
      out.push_back(term.name);
      if (in_.accept_punct(")")) return out;
      in_.expect_punct(",");
    }
  }

  void finish_action() {
    if (!current_action_) return;
    const ActionModel& action = spec_.actions.back();
    if (action.alternatives.empty())
      throw ParseError(DiagnosticKind::probability, action_pos_, "action " + action.name + " has no alternatives");
    if (auto p = check_probabilities(spec_, action, mgr_)) throw ParseError(p->kind, action_pos_, p->message);
    current_action_ = false;
  }

  void parse_action(const Token& kw) {
    finish_action();
    Token name = in_.expect_identifier("an action name");
    if (spec_.find_action(name.text))
      in_.fail(name, "action '" + name.text + "' declared twice", DiagnosticKind::duplicate);
    ActionModel action;
    action.name = name.text;
    action.params = parse_variable_list();
    in_.expect_punct(":");
    spec_.actions.push_back(std::move(action));
    current_action_ = true;
    action_pos_ = kw.pos;
  }

  void parse_alternative(const Token& kw) {
    if (!current_action_) in_.fail(kw, "'alternative' outside an action block");
    ActionModel& action = spec_.actions.back();
    Token name = in_.expect_identifier("an alternative name");
    for (const auto& alt : action.alternatives)
      if (alt.name == name.text)
        in_.fail(name, "alternative '" + name.text + "' declared twice in " + action.name, DiagnosticKind::duplicate);
    Token prob_kw = in_.expect_identifier("'prob'");
    if (prob_kw.text != "prob") in_.fail(prob_kw, "expected 'prob'");
    Alternative alt;
    alt.name = name.text;
    Token p = in_.peek();
    if (p.kind == Token::Kind::number) {
      in_.next();
      try {
        alt.probability = mgr_.leaf(parse_rational(p.text));
      } catch (const std::exception& e) {
        in_.fail(p, e.what(), DiagnosticKind::invalid_value);
      }
    } else {
      alt.probability = parse_expression(in_, mgr_, spec_.vocabulary());
    }
    in_.expect_punct(":");
    action.alternatives.push_back(std::move(alt));
  }

  void parse_tvd(const Token& kw) {
    if (!current_action_ || spec_.actions.back().alternatives.empty())
      in_.fail(kw, "'tvd' outside an alternative block");
    ActionModel& action = spec_.actions.back();
    Alternative& alt = action.alternatives.back();
    Token pred = in_.expect_identifier("a predicate name");
    const PredicateDecl* decl = spec_.find_predicate(pred.text);
    if (!decl) in_.fail(pred, "unknown predicate '" + pred.text + "'", DiagnosticKind::unknown_predicate);
    if (alt.find_tvd(pred.text))
      in_.fail(pred, "second TVD for " + pred.text + " in " + action.name + "." + alt.name, DiagnosticKind::duplicate);
    Tvd t;
    t.action = action.name;
    t.alternative = alt.name;
    t.predicate = pred.text;
    t.action_params = action.params;
    t.params = parse_variable_list();
    if (static_cast<int>(t.params.size()) != decl->arity)
      in_.fail(pred, "predicate '" + pred.text + "' has arity " + std::to_string(decl->arity) + " but the TVD lists " +
                         std::to_string(t.params.size()) + " parameter(s)",
               DiagnosticKind::arity_mismatch);
    for (const auto& p : t.params)
      if (std::find(action.params.begin(), action.params.end(), p) != action.params.end())
        in_.fail(pred, "TVD parameter '" + p + "' clashes with an action parameter of " + action.name,
                 DiagnosticKind::tvd_variable);
    in_.expect_punct(":");
    t.diagram = parse_expression(in_, mgr_, spec_.vocabulary());
    if (auto p = check_tvd(mgr_, t)) throw ParseError(p->kind, kw.pos, p->message);
    alt.tvds.push_back(std::move(t));
  }

  TokenStream in_;
  Manager& mgr_;
  DomainSpec spec_;
  bool have_discount_ = false;
  bool have_reward_ = false;
  bool current_action_ = false;
  SourcePos action_pos_;
  SourcePos reward_pos_;
  SourcePos absorbing_pos_;
};

std::string number_text(const Rational& r) {
  std::string dec = to_decimal_string(r);
  return parse_rational(dec) == r ? dec : to_exact_string(r);
}

}  // namespace

DomainSpec parse_domain(std::string_view text, Manager& mgr) { return DomainParser(text, mgr).run(); }

void validate_domain(const DomainSpec& spec, Manager& mgr) {
  const SourcePos none{0, 0};
  if (spec.discount <= 0 || spec.discount >= 1)
    throw ParseError(DiagnosticKind::invalid_value, none, "discount must lie strictly between 0 and 1");
  auto vocab = spec.vocabulary();
  auto check_labels = [&](NodeRef d, const std::string& where) {
    for (const auto& label : mgr.labels(d)) {
      if (!label.is_atom()) continue;
      const PredicateDecl* decl = vocab.find(label.predicate);
      if (!decl)
        throw ParseError(DiagnosticKind::unknown_predicate, none, where + " uses unknown predicate " + label.predicate);
      if (decl->arity != static_cast<int>(label.args.size()))
        throw ParseError(DiagnosticKind::arity_mismatch, none, where + " uses " + to_string(label) + " with wrong arity");
    }
  };
  check_labels(spec.reward, "reward");
  for (const auto& action : spec.actions) {
    for (const auto& alt : action.alternatives) {
      check_labels(alt.probability, action.name + "." + alt.name + " probability");
      for (const auto& t : alt.tvds) {
        check_labels(t.diagram, "TVD " + t.predicate);
        if (auto p = check_tvd(mgr, t)) throw ParseError(p->kind, none, p->message);
      }
    }
    if (!action.alternatives.empty())
      if (auto p = check_probabilities(spec, action, mgr)) throw ParseError(p->kind, none, p->message);
  }
  if (auto p = check_reward(spec, mgr)) throw ParseError(p->kind, none, p->message);
}

std::string print_domain(const DomainSpec& spec, const Manager& mgr) {
  std::ostringstream os;
  os << "domain " << spec.name << "\n";
  os << "predicates: ";
  for (std::size_t i = 0; i < spec.predicates.size(); ++i)
    os << (i ? ", " : "") << spec.predicates[i].name << "/" << spec.predicates[i].arity;
  os << "\n";
  if (!spec.constants.empty()) {
    os << "constants: ";
    for (std::size_t i = 0; i < spec.constants.size(); ++i) os << (i ? ", " : "") << "'" << spec.constants[i] << "'";
    os << "\n";
  }
  os << "discount: " << number_text(spec.discount) << "\n";
  os << "absorbing-goal: " << (spec.absorbing_goal ? "true" : "false") << "\n";
  os << "reward: " << to_expression(mgr, spec.reward) << "\n";
  for (const auto& action : spec.actions) {
    if (action.implicit) continue;
    os << "action " << action.name << "(";
    for (std::size_t i = 0; i < action.params.size(); ++i) os << (i ? ", " : "") << action.params[i];
    os << "):\n";
    for (const auto& alt : action.alternatives) {
      os << "  alternative " << alt.name << " prob ";
      if (mgr.is_leaf(alt.probability))
        os << number_text(mgr.leaf_of(alt.probability).value);
      else
        os << to_expression(mgr, alt.probability);
      os << ":\n";
      for (const auto& t : alt.tvds) {
        os << "    tvd " << t.predicate << "(";
        for (std::size_t i = 0; i < t.params.size(); ++i) os << (i ? ", " : "") << t.params[i];
        os << "): " << to_expression(mgr, t.diagram) << "\n";
      }
    }
  }
  return os.str();
}

DomainSpec load_domain_file(const std::string& path, Manager& mgr) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open domain file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_domain(buffer.str(), mgr);
}

}  // namespace fodd

#include "fodd/expression.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace fodd {

const char* to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::syntax: return "syntax";
    case DiagnosticKind::unknown_predicate: return "unknown-predicate";
    case DiagnosticKind::arity_mismatch: return "arity-mismatch";
    case DiagnosticKind::tvd_variable: return "tvd-variable";
    case DiagnosticKind::tvd_leaf: return "tvd-leaf";
    case DiagnosticKind::probability: return "probability";
    case DiagnosticKind::duplicate: return "duplicate";
    case DiagnosticKind::invalid_value: return "invalid-value";
    case DiagnosticKind::absorbing_goal: return "absorbing-goal";
  }
  return "unknown";
}

ParseError::ParseError(DiagnosticKind kind, SourcePos pos, const std::string& message)
    : Error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message),
      kind_(kind),
      pos_(pos),
      message_(message) {}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '*' || c == '\'' || c == '-';
}
bool digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  SourcePos pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (c == '\n') {
      out.push_back({Token::Kind::newline, "\n", pos});
      advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    SourcePos start = pos;
    if (digit(c) || ((c == '-' || c == '.') && i + 1 < text.size() && digit(text[i + 1]))) {
      std::size_t j = i + 1;
      while (j < text.size() && (digit(text[j]) || text[j] == '.' || text[j] == '/')) ++j;
      out.push_back({Token::Kind::number, std::string(text.substr(i, j - i)), start});
      advance(j - i);
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i + 1;
      // '-' only inside identifiers such as absorbing-goal, never trailing
      while (j < text.size() && ident_char(text[j]) &&
             !(text[j] == '-' && (j + 1 >= text.size() || !ident_start(text[j + 1]))))
        ++j;
      out.push_back({Token::Kind::identifier, std::string(text.substr(i, j - i)), start});
      advance(j - i);
      continue;
    }
    if (c == '\'' || c == '"') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != c && text[j] != '\n') ++j;
      if (j >= text.size() || text[j] != c)
        throw ParseError(DiagnosticKind::syntax, start, "unterminated quoted constant");
      out.push_back({Token::Kind::quoted, std::string(text.substr(i + 1, j - i - 1)), start});
      advance(j - i + 1);
      continue;
    }
    if (std::string_view("(),:=/").find(c) != std::string_view::npos) {
      out.push_back({Token::Kind::punct, std::string(1, c), start});
      advance(1);
      continue;
    }
    throw ParseError(DiagnosticKind::syntax, start, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Token::Kind::end, "", pos});
  return out;
}

const Token& TokenStream::peek(std::size_t ahead) const {
  return tokens_[std::min(index_ + ahead, tokens_.size() - 1)];
}

Token TokenStream::next() {
  Token t = peek();
  if (index_ < tokens_.size() - 1) ++index_;
  return t;
}

bool TokenStream::at_punct(std::string_view p, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == Token::Kind::punct && t.text == p;
}

bool TokenStream::accept_punct(std::string_view p) {
  if (!at_punct(p)) return false;
  next();
  return true;
}

Token TokenStream::expect_punct(std::string_view p) {
  if (!at_punct(p)) fail(peek(), "expected '" + std::string(p) + "'");
  return next();
}

Token TokenStream::expect_identifier(std::string_view what) {
  if (peek().kind != Token::Kind::identifier) fail(peek(), "expected " + std::string(what));
  return next();
}

void TokenStream::skip_newlines() {
  while (peek().kind == Token::Kind::newline) next();
}

void TokenStream::fail(const Token& at, const std::string& message, DiagnosticKind kind) const {
  std::string found = at.kind == Token::Kind::end       ? "end of input"
                      : at.kind == Token::Kind::newline ? "end of line"
                                                        : "'" + at.text + "'";
  throw ParseError(kind, at.pos, message + (kind == DiagnosticKind::syntax ? ", found " + found : ""));
}

Term parse_term(TokenStream& in, const Vocabulary& vocab) {
  in.skip_newlines();
  Token t = in.peek();
  if (t.kind == Token::Kind::quoted) {
    in.next();
    return Term::constant(t.text);
  }
  if (t.kind == Token::Kind::identifier) {
    in.next();
    if (std::find(vocab.constants.begin(), vocab.constants.end(), t.text) != vocab.constants.end())
      return Term::constant(t.text);
    if (std::islower(static_cast<unsigned char>(t.text[0])) || t.text[0] == '_') return Term::variable(t.text);
    in.fail(t, "'" + t.text + "' is neither a lower-case variable nor a declared constant");
  }
  in.fail(t, "expected a term");
}

namespace {

std::vector<Term> parse_term_list(TokenStream& in, const Vocabulary& vocab) {
  std::vector<Term> args;
  in.expect_punct("(");
  in.skip_newlines();
  if (in.accept_punct(")")) return args;
  while (true) {
    args.push_back(parse_term(in, vocab));
    in.skip_newlines();
    if (in.accept_punct(")")) return args;
    in.expect_punct(",");
  }
}

}  // namespace

Label parse_label(TokenStream& in, const Vocabulary& vocab) {
  in.skip_newlines();
  Token first = in.peek();
  if (first.kind == Token::Kind::identifier && in.at_punct("(", 1)) {
    in.next();
    const PredicateDecl* decl = vocab.find(first.text);
    if (!decl) in.fail(first, "unknown predicate '" + first.text + "'", DiagnosticKind::unknown_predicate);
    auto args = parse_term_list(in, vocab);
    if (static_cast<int>(args.size()) != decl->arity)
      in.fail(first,
              "predicate '" + first.text + "' has arity " + std::to_string(decl->arity) + " but is used with " +
                  std::to_string(args.size()) + " argument(s)",
              DiagnosticKind::arity_mismatch);
    return Label::atom(first.text, std::move(args));
  }
  if (first.kind == Token::Kind::identifier && !in.at_punct("=", 1)) {
    const PredicateDecl* decl = vocab.find(first.text);
    if (decl && decl->arity == 0) {
      in.next();
      return Label::atom(first.text, {});
    }
    if (decl)
      in.fail(first, "predicate '" + first.text + "' has arity " + std::to_string(decl->arity) + " but is used with 0 arguments",
              DiagnosticKind::arity_mismatch);
    in.next();
    in.fail(first, "unknown predicate '" + first.text + "'", DiagnosticKind::unknown_predicate);
  }
  Term left = parse_term(in, vocab);
  in.expect_punct("=");
  Term right = parse_term(in, vocab);
  return Label::equality(std::move(left), std::move(right));
}

NodeRef parse_expression(TokenStream& in, Manager& mgr, const Vocabulary& vocab) {
  in.skip_newlines();
  Token t = in.peek();
  if (t.kind == Token::Kind::number) {
    in.next();
    Rational value;
    try {
      value = parse_rational(t.text);
    } catch (const std::exception& e) {
      in.fail(t, e.what(), DiagnosticKind::invalid_value);
    }
    std::optional<ActionTag> tag;
    if (in.accept_punct(":")) {
      Token name = in.expect_identifier("an action name");
      tag = ActionTag{name.text, parse_term_list(in, vocab)};
    }
    return mgr.leaf(value, std::move(tag));
  }
  in.expect_punct("(");
  in.skip_newlines();
  Token kw = in.peek();
  if (kw.kind != Token::Kind::identifier || kw.text != "if") in.fail(kw, "expected 'if'");
  in.next();
  Label label = parse_label(in, vocab);
  NodeRef hi = parse_expression(in, mgr, vocab);
  NodeRef lo = parse_expression(in, mgr, vocab);
  in.skip_newlines();
  in.expect_punct(")");
  return mgr.ite(mgr.indicator(label), hi, lo);
}

NodeRef parse_expression(std::string_view text, Manager& mgr, const Vocabulary& vocab) {
  TokenStream in(tokenize(text));
  NodeRef d = parse_expression(in, mgr, vocab);
  in.skip_newlines();
  if (in.peek().kind != Token::Kind::end) in.fail(in.peek(), "trailing input after expression");
  return d;
}

Interpretation parse_state(std::string_view text, const Vocabulary& vocab, int min_universe) {
  TokenStream in(tokenize(text));
  std::vector<GroundAtom> atoms;
  int universe = std::max(min_universe, 1);
  while (true) {
    in.skip_newlines();
    in.accept_punct(",");
    in.skip_newlines();
    if (in.peek().kind == Token::Kind::end) break;
    Token name = in.expect_identifier("a ground atom");
    const PredicateDecl* decl = vocab.find(name.text);
    if (!decl) in.fail(name, "unknown predicate '" + name.text + "'", DiagnosticKind::unknown_predicate);
    GroundAtom atom{name.text, {}};
    if (in.accept_punct("(")) {
      while (!in.accept_punct(")")) {
        if (!atom.args.empty()) in.expect_punct(",");
        Token obj = in.next();
        if (obj.kind != Token::Kind::number || obj.text.find_first_not_of("0123456789") != std::string::npos ||
            std::stoi(obj.text) < 1)
          in.fail(obj, "expected an object number (1, 2, ...)");
        atom.args.push_back(std::stoi(obj.text) - 1);
        universe = std::max(universe, atom.args.back() + 1);
      }
    }
    if (static_cast<int>(atom.args.size()) != decl->arity)
      in.fail(name, "predicate '" + name.text + "' has arity " + std::to_string(decl->arity), DiagnosticKind::arity_mismatch);
    atoms.push_back(std::move(atom));
  }
  Interpretation s(universe);
  for (const auto& a : atoms) s.add(a);
  return s;
}

std::string to_expression(const Manager& mgr, NodeRef d) {
  std::ostringstream os;
  std::function<void(NodeRef)> rec = [&](NodeRef x) {
    if (mgr.is_leaf(x)) {
      const Leaf& leaf = mgr.leaf_of(x);
      os << to_exact_string(leaf.value);
      if (leaf.tag) os << ":" << to_string(*leaf.tag);
      return;
    }
    os << "(if " << to_string(mgr.label_of(x)) << " ";
    rec(mgr.hi(x));
    os << " ";
    rec(mgr.lo(x));
    os << ")";
  };
  rec(d);
  return os.str();
}

}  // namespace fodd

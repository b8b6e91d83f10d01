#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fodd/error.hpp"
#include "fodd/manager.hpp"
#include "fodd/semantics.hpp"

namespace fodd {

struct SourcePos {
  int line = 1;
  int column = 1;
};

enum class DiagnosticKind {
  syntax,
  unknown_predicate,
  arity_mismatch,
  tvd_variable,
  tvd_leaf,
  probability,
  duplicate,
  invalid_value,
  absorbing_goal,
};

const char* to_string(DiagnosticKind kind);

/// Diagnostic with a source position. what() is "line:col: message".
class ParseError : public Error {
 public:
  ParseError(DiagnosticKind kind, SourcePos pos, const std::string& message);

  DiagnosticKind kind() const { return kind_; }
  SourcePos position() const { return pos_; }
  const std::string& message() const { return message_; }

 private:
  DiagnosticKind kind_;
  SourcePos pos_;
  std::string message_;
};

struct Token {
  enum class Kind { identifier, number, quoted, punct, newline, end };
  Kind kind = Kind::end;
  std::string text;
  SourcePos pos;
};

/// '#' starts a comment running to end of line.
std::vector<Token> tokenize(std::string_view text);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  Token next();
  bool at_punct(std::string_view p, std::size_t ahead = 0) const;
  bool accept_punct(std::string_view p);
  Token expect_punct(std::string_view p);
  Token expect_identifier(std::string_view what);
  void skip_newlines();
  [[noreturn]] void fail(const Token& at, const std::string& message,
                         DiagnosticKind kind = DiagnosticKind::syntax) const;

 private:
  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

/// Parses `<expr> := <number>[:Action(terms)] | (if <label> <expr> <expr>)`.
/// Newlines are allowed inside parentheses. Diagrams are built through ite,
/// so labels may appear in any order in the text.
NodeRef parse_expression(TokenStream& in, Manager& mgr, const Vocabulary& vocab);
NodeRef parse_expression(std::string_view text, Manager& mgr, const Vocabulary& vocab);

Label parse_label(TokenStream& in, const Vocabulary& vocab);
Term parse_term(TokenStream& in, const Vocabulary& vocab);

/// Ground state from atoms such as "p1(1) q2(1)" (objects 1-based,
/// separated by spaces or commas). The universe is the larger of
/// `min_universe` and the largest object mentioned.
Interpretation parse_state(std::string_view text, const Vocabulary& vocab, int min_universe = 1);

/// Inverse of parse_expression (tree expansion of the DAG).
std::string to_expression(const Manager& mgr, NodeRef d);

}  // namespace fodd

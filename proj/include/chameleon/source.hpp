#pragma once

// Tokenizer and syntax tree for the restricted application-source subset.
//
// The subset is indentation-structured, Python-like, and covers:
//   imports (ignored), `Name = expr` assignments, expression statements,
//   `for NAME in expr:`, `if/elif/else`, `return [expr]` and `pass`.
// Expressions: string/number/bool/None literals, names, attribute access,
// calls with positional and keyword arguments, list displays, single-clause
// list comprehensions, chained comparisons (including `in` / `not in`),
// `and`, `or`, `not` and unary minus.
// Anything else is rejected with the position of the first offending token.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chameleon/core.hpp"

namespace chameleon::source {

struct Position {
  int line = 1;
  int column = 1;
  friend bool operator==(const Position&, const Position&) = default;
};

struct SourceUnit {
  std::string path;
  std::string text;

  /// File stem of `path`; used as the default application id.
  std::string stem() const { return std::filesystem::path(path).stem().string(); }
};

/// Rejection carrying the position of the first offending token.
class SourceError : public Error {
 public:
  SourceError(ErrorCode code, const std::string& message, Position pos)
      : Error(code, message), pos_(pos) {}
  Position position() const noexcept { return pos_; }

 private:
  Position pos_;
};

// ---------------------------------------------------------------------------
// Tokens

enum class Tok : std::uint8_t { Name, String, Number, Op, Newline, Indent, Dedent, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifier, decoded string contents, number spelling or operator
  double number = 0.0;
  Position pos;
};

inline bool is_valid_utf8(std::string_view s, std::size_t* bad_offset = nullptr) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    if (c < 0x80) len = 1;
    else if ((c >> 5) == 0x6) len = 2;
    else if ((c >> 4) == 0xE) len = 3;
    else if ((c >> 3) == 0x1E) len = 4;
    bool ok = len > 0 && i + len <= s.size();
    for (std::size_t k = 1; ok && k < len; ++k)
      ok = (static_cast<unsigned char>(s[i + k]) >> 6) == 0x2;
    if (!ok) {
      if (bad_offset) *bad_offset = i;
      return false;
    }
    i += len;
  }
  return true;
}

inline bool is_keyword(std::string_view w) {
  static constexpr std::string_view kKeywords[] = {
      "False", "None",   "True",     "and",   "as",     "assert", "async",  "await",
      "break", "class",  "continue", "def",   "del",    "elif",   "else",   "except",
      "finally", "for",  "from",     "global", "if",    "import", "in",     "is",
      "lambda", "nonlocal", "not",   "or",    "pass",   "raise",  "return", "try",
      "while", "with",   "yield"};
  for (auto k : kKeywords)
    if (k == w) return true;
  return false;
}

inline bool is_identifier(std::string_view w) {
  if (w.empty()) return false;
  const auto first = static_cast<unsigned char>(w.front());
  if (!(std::isalpha(first) || first == '_')) return false;
  for (char ch : w) {
    const auto c = static_cast<unsigned char>(ch);
    if (!(std::isalnum(c) || c == '_')) return false;
  }
  return !is_keyword(w);
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    std::vector<int> indents{0};
    bool at_line_start = true;
    while (true) {
      if (at_line_start && depth_ == 0) {
        // measure indentation, skip blank and comment-only lines
        int width = 0;
        while (i_ < text_.size() && (text_[i_] == ' ' || text_[i_] == '\t')) {
          width = text_[i_] == '\t' ? (width / 8 + 1) * 8 : width + 1;
          advance();
        }
        if (i_ >= text_.size()) break;
        if (text_[i_] == '#') {
          while (i_ < text_.size() && text_[i_] != '\n') advance();
        }
        if (i_ < text_.size() && (text_[i_] == '\n' || text_[i_] == '\r')) {
          advance();
          continue;
        }
        if (i_ >= text_.size()) break;
        const Position here = pos();
        if (width > indents.back()) {
          indents.push_back(width);
          out.push_back({Tok::Indent, "", 0.0, here});
        } else {
          while (width < indents.back()) {
            indents.pop_back();
            out.push_back({Tok::Dedent, "", 0.0, here});
          }
          if (width != indents.back())
            throw SourceError(ErrorCode::InvalidInput, "inconsistent dedent", here);
        }
        at_line_start = false;
      }
      if (i_ >= text_.size()) break;
      const char c = text_[i_];
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '#') {
        while (i_ < text_.size() && text_[i_] != '\n') advance();
      } else if (c == '\\' && peek(1) == '\n') {
        advance();
        advance();
      } else if (c == '\n') {
        const Position here = pos();
        advance();
        if (depth_ == 0) {
          if (!out.empty() && out.back().kind != Tok::Newline) out.push_back({Tok::Newline, "", 0.0, here});
          at_line_start = true;
        }
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        out.push_back(lex_name());
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        out.push_back(lex_number());
      } else if (c == '\'' || c == '"') {
        out.push_back(lex_string());
      } else {
        out.push_back(lex_op());
      }
    }
    const Position end = pos();
    if (depth_ != 0) throw SourceError(ErrorCode::InvalidInput, "unclosed bracket", end);
    if (!out.empty() && out.back().kind != Tok::Newline) out.push_back({Tok::Newline, "", 0.0, end});
    while (indents.size() > 1) {
      indents.pop_back();
      out.push_back({Tok::Dedent, "", 0.0, end});
    }
    out.push_back({Tok::End, "", 0.0, end});
    return out;
  }

 private:
  Position pos() const { return {line_, col_}; }
  char peek(std::size_t k) const { return i_ + k < text_.size() ? text_[i_ + k] : '\0'; }
  void advance() {
    if (text_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(text_[i_]) & 0xC0) != 0x80) {
      ++col_;
    }
    ++i_;
  }

  Token lex_name() {
    Token t{Tok::Name, "", 0.0, pos()};
    while (i_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[i_])) || text_[i_] == '_')) {
      t.text.push_back(text_[i_]);
      advance();
    }
    return t;
  }

  Token lex_number() {
    Token t{Tok::Number, "", 0.0, pos()};
    auto take_digits = [&] {
      while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) {
        t.text.push_back(text_[i_]);
        advance();
      }
    };
    take_digits();
    if (i_ < text_.size() && text_[i_] == '.') {
      t.text.push_back('.');
      advance();
      take_digits();
    }
    if (i_ < text_.size() && (text_[i_] == 'e' || text_[i_] == 'E')) {
      t.text.push_back('e');
      advance();
      if (i_ < text_.size() && (text_[i_] == '+' || text_[i_] == '-')) {
        t.text.push_back(text_[i_]);
        advance();
      }
      take_digits();
    }
    if (i_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[i_])) || text_[i_] == '_'))
      throw SourceError(ErrorCode::InvalidInput, "malformed number literal", t.pos);
    const char* b = t.text.data();
    const auto [ptr, ec] = std::from_chars(b, b + t.text.size(), t.number);
    if (ec != std::errc() || ptr != b + t.text.size())
      throw SourceError(ErrorCode::InvalidInput, "malformed number literal", t.pos);
    return t;
  }

  Token lex_string() {
    Token t{Tok::String, "", 0.0, pos()};
    const char quote = text_[i_];
    advance();
    while (true) {
      if (i_ >= text_.size() || text_[i_] == '\n')
        throw SourceError(ErrorCode::InvalidInput, "unterminated string literal", t.pos);
      const char c = text_[i_];
      if (c == quote) {
        advance();
        break;
      }
      if (c == '\\') {
        advance();
        if (i_ >= text_.size()) throw SourceError(ErrorCode::InvalidInput, "unterminated string literal", t.pos);
        const char e = text_[i_];
        switch (e) {
          case 'n': t.text.push_back('\n'); break;
          case 't': t.text.push_back('\t'); break;
          case '\\': t.text.push_back('\\'); break;
          case '\'': t.text.push_back('\''); break;
          case '"': t.text.push_back('"'); break;
          default:
            throw SourceError(ErrorCode::Unsupported, "unsupported escape sequence", pos());
        }
        advance();
        continue;
      }
      t.text.push_back(c);
      advance();
    }
    return t;
  }

  Token lex_op() {
    Token t{Tok::Op, "", 0.0, pos()};
    static constexpr std::string_view kTwo[] = {"==", "!=", "<=", ">=", "->", "**", "//", "+=", "-="};
    for (auto op : kTwo) {
      if (text_.substr(i_, 2) == op) {
        t.text = std::string(op);
        advance();
        advance();
        return t;
      }
    }
    const char c = text_[i_];
    static constexpr std::string_view kOne = "()[]{},.:=<>+-*/%&|@;";
    if (kOne.find(c) == std::string_view::npos)
      throw SourceError(ErrorCode::InvalidInput, std::string("unexpected character '") + c + "'", t.pos);
    if (c == '(' || c == '[' || c == '{') ++depth_;
    if (c == ')' || c == ']' || c == '}') {
      if (depth_ == 0) throw SourceError(ErrorCode::InvalidInput, "unbalanced bracket", t.pos);
      --depth_;
    }
    t.text = std::string(1, c);
    advance();
    return t;
  }

  std::string_view text_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
  int depth_ = 0;
};

// ---------------------------------------------------------------------------
// Syntax tree

struct Expr {
  enum class Kind : std::uint8_t {
    Str, Num, Bool, None, Name, Attr, Call, Keyword, List, ListComp, Compare, And, Or, Not, Neg
  };
  Kind kind = Kind::None;
  Position pos;
  std::string text;   // Str value, Name id, Attr member, Keyword name, ListComp loop var
  double number = 0;  // Num
  bool boolean = false;
  // Attr: [base]; Call: [callee, args..., keywords...]; Keyword: [value];
  // List: elements; ListComp: [element, iterable]; Compare: operands;
  // And/Or: operands; Not/Neg: [operand]
  std::vector<Expr> children;
  std::vector<std::string> ops;  // Compare: "<", "<=", ">", ">=", "==", "!=", "in", "not in"

  bool is_name(std::string_view n) const { return kind == Kind::Name && text == n; }
};

struct Stmt;

struct IfBranch {
  Expr cond;
  std::vector<Stmt> body;
  Position pos;
};

struct Stmt {
  enum class Kind : std::uint8_t { Assign, ExprStmt, For, If, Return, Import, Pass };
  Kind kind = Kind::Pass;
  Position pos;
  std::string target;          // Assign target, For loop variable
  std::optional<Expr> value;   // Assign value, ExprStmt expression, For iterable, Return value
  std::vector<IfBranch> branches;
  std::vector<Stmt> body;      // For body, If else-body
  bool has_else = false;
  Position else_pos;
};

using Program = std::vector<Stmt>;

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Program parse_program() {
    Program prog;
    while (!at(Tok::End)) {
      if (at(Tok::Newline)) {
        next();
        continue;
      }
      if (at(Tok::Indent)) throw SourceError(ErrorCode::InvalidInput, "unexpected indent", cur().pos);
      prog.push_back(parse_statement());
    }
    return prog;
  }

 private:
  const Token& cur() const { return toks_[k_]; }
  const Token& next() { return toks_[k_ < toks_.size() - 1 ? k_++ : k_]; }
  bool at(Tok kind) const { return cur().kind == kind; }
  bool at_op(std::string_view op) const { return cur().kind == Tok::Op && cur().text == op; }
  bool at_word(std::string_view w) const { return cur().kind == Tok::Name && cur().text == w; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SourceError(ErrorCode::InvalidInput, msg, cur().pos);
  }
  void expect_op(std::string_view op) {
    if (!at_op(op)) fail("expected '" + std::string(op) + "'");
    next();
  }
  std::string expect_identifier() {
    if (!at(Tok::Name) || is_keyword(cur().text)) fail("expected identifier");
    return next().text;
  }
  void expect_line_end() {
    if (at(Tok::Newline)) {
      next();
      return;
    }
    if (at(Tok::End) || at(Tok::Dedent)) return;
    fail("unexpected token '" + cur().text + "'");
  }

  Stmt parse_statement() {
    static constexpr std::string_view kRejected[] = {
        "while", "def", "class", "try", "with", "lambda", "async", "await", "break", "continue",
        "global", "nonlocal", "yield", "del", "raise", "assert", "except", "finally", "is", "as"};
    if (at(Tok::Name)) {
      for (auto w : kRejected) {
        if (cur().text == w)
          throw SourceError(ErrorCode::Unsupported,
                            "unsupported pattern: '" + std::string(w) + "' statement", cur().pos);
      }
    }
    if (at_word("import") || at_word("from")) return parse_import();
    if (at_word("for")) return parse_for();
    if (at_word("if")) return parse_if();
    if (at_word("elif") || at_word("else")) fail("'" + cur().text + "' without matching 'if'");
    Stmt s = parse_simple_statement();
    expect_line_end();
    return s;
  }

  Stmt parse_simple_statement() {
    Stmt s;
    s.pos = cur().pos;
    if (at_word("return")) {
      next();
      s.kind = Stmt::Kind::Return;
      if (!at(Tok::Newline) && !at(Tok::End) && !at(Tok::Dedent)) s.value = parse_expr();
      return s;
    }
    if (at_word("pass")) {
      next();
      s.kind = Stmt::Kind::Pass;
      return s;
    }
    Expr e = parse_expr();
    if (at_op("=")) {
      if (e.kind != Expr::Kind::Name)
        throw SourceError(ErrorCode::Unsupported, "unsupported pattern: assignment target must be a plain name",
                          e.pos);
      next();
      s.kind = Stmt::Kind::Assign;
      s.target = e.text;
      s.value = parse_expr();
      if (at_op("="))
        throw SourceError(ErrorCode::Unsupported, "unsupported pattern: chained assignment", cur().pos);
      return s;
    }
    if (at_op("+=") || at_op("-="))
      throw SourceError(ErrorCode::Unsupported, "unsupported pattern: augmented assignment", cur().pos);
    s.kind = Stmt::Kind::ExprStmt;
    s.value = std::move(e);
    return s;
  }

  Stmt parse_import() {
    Stmt s;
    s.kind = Stmt::Kind::Import;
    s.pos = cur().pos;
    // consume the rest of the logical line
    while (!at(Tok::Newline) && !at(Tok::End)) {
      if (at(Tok::Op) && cur().text != "." && cur().text != "," && cur().text != "*" &&
          cur().text != "(" && cur().text != ")")
        fail("malformed import");
      next();
    }
    expect_line_end();
    return s;
  }

  std::vector<Stmt> parse_suite() {
    expect_op(":");
    std::vector<Stmt> body;
    if (!at(Tok::Newline)) {
      body.push_back(parse_simple_statement());
      expect_line_end();
      return body;
    }
    next();
    if (!at(Tok::Indent)) fail("expected an indented block");
    next();
    while (!at(Tok::Dedent) && !at(Tok::End)) {
      if (at(Tok::Newline)) {
        next();
        continue;
      }
      body.push_back(parse_statement());
    }
    if (at(Tok::Dedent)) next();
    return body;
  }

  Stmt parse_for() {
    Stmt s;
    s.kind = Stmt::Kind::For;
    s.pos = cur().pos;
    next();
    s.target = expect_identifier();
    if (at_op(","))
      throw SourceError(ErrorCode::Unsupported, "unsupported pattern: tuple loop target", cur().pos);
    if (!at_word("in")) fail("expected 'in'");
    next();
    s.value = parse_expr();
    s.body = parse_suite();
    if (at_word("else"))
      throw SourceError(ErrorCode::Unsupported, "unsupported pattern: for-else", cur().pos);
    return s;
  }

  Stmt parse_if() {
    Stmt s;
    s.kind = Stmt::Kind::If;
    s.pos = cur().pos;
    do {
      IfBranch b;
      b.pos = cur().pos;
      next();
      b.cond = parse_expr();
      b.body = parse_suite();
      s.branches.push_back(std::move(b));
    } while (at_word("elif"));
    if (at_word("else")) {
      s.else_pos = cur().pos;
      next();
      s.has_else = true;
      s.body = parse_suite();
    }
    return s;
  }

  // expression precedence: or < and < not < comparison < unary < postfix < atom
  Expr parse_expr() {
    if (at_word("lambda"))
      throw SourceError(ErrorCode::Unsupported, "unsupported pattern: lambda", cur().pos);
    Expr lhs = parse_and();
    if (!at_word("or")) return lhs;
    Expr e;
    e.kind = Expr::Kind::Or;
    e.pos = lhs.pos;
    e.children.push_back(std::move(lhs));
    while (at_word("or")) {
      next();
      e.children.push_back(parse_and());
    }
    return e;
  }

  Expr parse_and() {
    Expr lhs = parse_not();
    if (!at_word("and")) return lhs;
    Expr e;
    e.kind = Expr::Kind::And;
    e.pos = lhs.pos;
    e.children.push_back(std::move(lhs));
    while (at_word("and")) {
      next();
      e.children.push_back(parse_not());
    }
    return e;
  }

  Expr parse_not() {
    if (at_word("not")) {
      Expr e;
      e.kind = Expr::Kind::Not;
      e.pos = cur().pos;
      next();
      e.children.push_back(parse_not());
      return e;
    }
    return parse_comparison();
  }

  std::optional<std::string> comparison_op() {
    if (at(Tok::Op)) {
      const auto& t = cur().text;
      if (t == "<" || t == "<=" || t == ">" || t == ">=" || t == "==" || t == "!=") {
        next();
        return t;
      }
      return std::nullopt;
    }
    if (at_word("in")) {
      next();
      return std::string("in");
    }
    if (at_word("not") && toks_[k_ + 1].kind == Tok::Name && toks_[k_ + 1].text == "in") {
      next();
      next();
      return std::string("not in");
    }
    if (at_word("is")) throw SourceError(ErrorCode::Unsupported, "unsupported pattern: 'is' comparison", cur().pos);
    return std::nullopt;
  }

  Expr parse_comparison() {
    Expr lhs = parse_unary();
    std::vector<std::string> ops;
    std::vector<Expr> operands;
    operands.push_back(std::move(lhs));
    while (auto op = comparison_op()) {
      ops.push_back(*op);
      operands.push_back(parse_unary());
    }
    if (ops.empty()) return std::move(operands.front());
    Expr e;
    e.kind = Expr::Kind::Compare;
    e.pos = operands.front().pos;
    e.children = std::move(operands);
    e.ops = std::move(ops);
    return e;
  }

  Expr parse_unary() {
    if (at_op("-")) {
      const Position p = cur().pos;
      next();
      Expr inner = parse_unary();
      if (inner.kind == Expr::Kind::Num) {
        inner.number = -inner.number;
        inner.pos = p;
        return inner;
      }
      Expr e;
      e.kind = Expr::Kind::Neg;
      e.pos = p;
      e.children.push_back(std::move(inner));
      return e;
    }
    Expr e = parse_postfix();
    if (at(Tok::Op)) {
      static constexpr std::string_view kArith[] = {"+", "-", "*", "/", "%", "&", "|", "@", "**", "//"};
      for (auto op : kArith)
        if (cur().text == op)
          throw SourceError(ErrorCode::Unsupported,
                            "unsupported pattern: operator '" + std::string(op) + "'", cur().pos);
    }
    return e;
  }

  Expr parse_postfix() {
    Expr e = parse_atom();
    while (true) {
      if (at_op(".")) {
        next();
        Expr a;
        a.kind = Expr::Kind::Attr;
        a.pos = e.pos;
        a.text = expect_identifier();
        a.children.push_back(std::move(e));
        e = std::move(a);
      } else if (at_op("(")) {
        next();
        Expr call;
        call.kind = Expr::Kind::Call;
        call.pos = e.pos;
        call.children.push_back(std::move(e));
        bool seen_keyword = false;
        while (!at_op(")")) {
          if (at(Tok::Name) && toks_[k_ + 1].kind == Tok::Op && toks_[k_ + 1].text == "=") {
            Expr kw;
            kw.kind = Expr::Kind::Keyword;
            kw.pos = cur().pos;
            kw.text = expect_identifier();
            next();
            kw.children.push_back(parse_expr());
            call.children.push_back(std::move(kw));
            seen_keyword = true;
          } else {
            if (seen_keyword) fail("positional argument after keyword argument");
            call.children.push_back(parse_expr());
          }
          if (!at_op(",")) break;
          next();
        }
        expect_op(")");
        e = std::move(call);
      } else if (at_op("[")) {
        throw SourceError(ErrorCode::Unsupported, "unsupported pattern: subscript", cur().pos);
      } else {
        return e;
      }
    }
  }

  Expr parse_atom() {
    Expr e;
    e.pos = cur().pos;
    switch (cur().kind) {
      case Tok::String:
        e.kind = Expr::Kind::Str;
        e.text = next().text;
        if (at(Tok::String))
          throw SourceError(ErrorCode::Unsupported, "unsupported pattern: implicit string concatenation",
                            cur().pos);
        return e;
      case Tok::Number:
        e.kind = Expr::Kind::Num;
        e.number = next().number;
        return e;
      case Tok::Name: {
        const std::string& w = cur().text;
        if (w == "True" || w == "False") {
          e.kind = Expr::Kind::Bool;
          e.boolean = w == "True";
          next();
          return e;
        }
        if (w == "None") {
          e.kind = Expr::Kind::None;
          next();
          return e;
        }
        if (is_keyword(w)) {
          throw SourceError(ErrorCode::Unsupported, "unsupported pattern: '" + w + "'", cur().pos);
        }
        e.kind = Expr::Kind::Name;
        e.text = next().text;
        return e;
      }
      case Tok::Op:
        if (at_op("(")) {
          next();
          Expr inner = parse_expr();
          if (at_op(",")) throw SourceError(ErrorCode::Unsupported, "unsupported pattern: tuple", cur().pos);
          expect_op(")");
          return inner;
        }
        if (at_op("[")) return parse_list();
        if (at_op("{")) throw SourceError(ErrorCode::Unsupported, "unsupported pattern: dict/set display", cur().pos);
        fail("unexpected '" + cur().text + "'");
      default:
        fail("unexpected end of statement");
    }
  }

  Expr parse_list() {
    Expr e;
    e.pos = cur().pos;
    e.kind = Expr::Kind::List;
    next();
    if (at_op("]")) {
      next();
      return e;
    }
    Expr first = parse_expr();
    if (at_word("for")) {
      next();
      e.kind = Expr::Kind::ListComp;
      e.text = expect_identifier();
      if (!at_word("in")) fail("expected 'in'");
      next();
      Expr iter = parse_expr();
      if (at_word("if") || at_word("for"))
        throw SourceError(ErrorCode::Unsupported, "unsupported pattern: multi-clause comprehension", cur().pos);
      e.children.push_back(std::move(first));
      e.children.push_back(std::move(iter));
      expect_op("]");
      return e;
    }
    e.children.push_back(std::move(first));
    while (at_op(",")) {
      next();
      if (at_op("]")) break;
      e.children.push_back(parse_expr());
    }
    expect_op("]");
    return e;
  }

  std::vector<Token> toks_;
  std::size_t k_ = 0;
};

/// Tokenizes and parses; throws SourceError on the first problem.
inline Program parse_program(std::string_view text) {
  std::size_t bad = 0;
  if (!is_valid_utf8(text, &bad)) {
    Position p;
    for (std::size_t i = 0; i < bad; ++i) {
      if (text[i] == '\n') {
        ++p.line;
        p.column = 1;
      } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
        ++p.column;
      }
    }
    throw SourceError(ErrorCode::InvalidInput, "source is not valid UTF-8", p);
  }
  Parser parser(Lexer(text).run());
  return parser.parse_program();
}

}  // namespace chameleon::source

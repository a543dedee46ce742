#include "veil/parse.hpp"

#include <cctype>
#include <istream>
#include <optional>
#include <sstream>

namespace veil::lang {

namespace {

enum class Tok {
  ident, lparen, rparen, langle, rangle, comma, dot, caret,
  bang, amp, pipe, arrow, iff, eq, kw_forall, kw_exists, end,
};

struct Token {
  Tok tok;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return cur_; }

  Token next() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token cur_{};

  char at(std::size_t off = 0) const {
    return pos_ + off < text_.size() ? text_[pos_ + off] : '\0';
  }

  void bump() {
    if (at() == '\n') { ++line_; col_ = 1; } else { ++col_; }
    ++pos_;
  }

  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(at()))) bump();
    cur_ = Token{Tok::end, "", line_, col_};
    if (pos_ >= text_.size()) return;

    const char c = at();
    auto single = [&](Tok t) {
      cur_.tok = t;
      cur_.text = std::string(1, c);
      bump();
    };

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (std::isalnum(static_cast<unsigned char>(at())) || at() == '_') {
        word += at();
        bump();
      }
      cur_.text = word;
      cur_.tok = word == "forall" ? Tok::kw_forall
               : word == "exists" ? Tok::kw_exists
                                  : Tok::ident;
      return;
    }
    switch (c) {
      case '(': single(Tok::lparen); return;
      case ')': single(Tok::rparen); return;
      case '>': single(Tok::rangle); return;
      case ',': single(Tok::comma); return;
      case '.': single(Tok::dot); return;
      case '^': single(Tok::caret); return;
      case '!': single(Tok::bang); return;
      case '&': single(Tok::amp); return;
      case '|': single(Tok::pipe); return;
      case '=': single(Tok::eq); return;
      case '<':
        if (at(1) == '-' && at(2) == '>') {
          cur_ = Token{Tok::iff, "<->", line_, col_};
          bump(); bump(); bump();
          return;
        }
        single(Tok::langle);
        return;
      case '-':
        if (at(1) == '>') {
          cur_ = Token{Tok::arrow, "->", line_, col_};
          bump(); bump();
          return;
        }
        break;
      default: break;
    }
    throw parse_error(std::string("unexpected character '") + c + "'", line_, col_);
  }
};

class Parser {
 public:
  Parser(std::string_view text, const SymbolTable* symbols)
      : lex_(text) {
    if (symbols) {
      for (const auto& [name, info] : *symbols) known_.emplace(name, info);
    }
  }

  TypeExpr type_entry() {
    TypeExpr t = parse_type();
    expect_end();
    return t;
  }

  Term term_entry() {
    Term t = parse_annotated_term();
    expect_end();
    return t;
  }

  Formula formula_entry() {
    Formula f = parse_formula();
    expect_end();
    return f;
  }

  const std::map<std::string, SymbolInfo>& learned() const { return known_; }

 private:
  Lexer lex_;
  std::map<std::string, SymbolInfo> known_;   // declarations + inferred types
  std::vector<std::pair<std::string, TypeExpr>> scope_;  // binder stack

  [[noreturn]] void fail(const std::string& msg) {
    const Token& t = lex_.peek();
    throw parse_error(msg, t.line, t.col);
  }

  void expect_end() {
    if (lex_.peek().tok != Tok::end) fail("trailing input after expression");
  }

  Token expect(Tok t, const std::string& what) {
    if (lex_.peek().tok != t) fail("expected " + what);
    return lex_.next();
  }

  bool accept(Tok t) {
    if (lex_.peek().tok == t) {
      lex_.next();
      return true;
    }
    return false;
  }

  // --- types ---------------------------------------------------------------

  TypeExpr parse_type() {
    if (lex_.peek().tok == Tok::ident) {
      Token t = lex_.next();
      if (t.text == "e1") return TypeExpr::e1();
      if (t.text == "e2") return TypeExpr::e2();
      throw parse_error("unknown base type '" + t.text + "'", t.line, t.col);
    }
    if (accept(Tok::langle)) {
      std::vector<TypeExpr> comps;
      comps.push_back(parse_type());
      while (accept(Tok::comma)) comps.push_back(parse_type());
      expect(Tok::rangle, "'>'");
      return TypeExpr::tuple(std::move(comps));
    }
    fail("expected a type");
  }

  // --- terms ---------------------------------------------------------------

  const TypeExpr* scope_lookup(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == name) return &it->second;
    }
    return nullptr;
  }

  Term make_term(const std::string& name, std::optional<TypeExpr> annotated,
                 const TypeExpr* expected, int line, int col) {
    // binder scope wins and always denotes a variable
    if (const TypeExpr* t = scope_lookup(name)) {
      if (annotated && !(*annotated == *t)) {
        throw parse_error("'" + name + "' is bound at type " + t->to_string() +
                          ", conflicting annotation " + annotated->to_string(),
                          line, col);
      }
      return Term::variable(name, *t);
    }

    auto it = known_.find(name);
    Term::Kind kind;
    if (it != known_.end()) {
      kind = it->second.kind;
    } else {
      kind = std::isupper(static_cast<unsigned char>(name[0]))
                 ? Term::Kind::variable
                 : Term::Kind::constant;
    }

    std::optional<TypeExpr> type;
    if (annotated) {
      type = annotated;
    } else if (it != known_.end()) {
      type = it->second.type;
    } else if (expected) {
      type = *expected;
    }
    if (!type) {
      throw parse_error("type of '" + name + "' is unknown here (annotate as " +
                        name + "^type)", line, col);
    }
    if (it != known_.end() && !(it->second.type == *type)) {
      throw parse_error("'" + name + "' already has type " +
                        it->second.type.to_string() + ", conflicting use at " +
                        type->to_string(), line, col);
    }
    if (it == known_.end()) known_.emplace(name, SymbolInfo{kind, *type});
    return kind == Term::Kind::variable ? Term::variable(name, *type)
                                        : Term::constant(name, *type);
  }

  Term parse_annotated_term(const TypeExpr* expected = nullptr) {
    Token name = expect(Tok::ident, "a name");
    std::optional<TypeExpr> annotated;
    if (accept(Tok::caret)) annotated = parse_type();
    return make_term(name.text, std::move(annotated), expected, name.line, name.col);
  }

  // --- formulas ------------------------------------------------------------

  Formula parse_formula() { return parse_iff(); }

  Formula parse_iff() {
    Formula f = parse_impl();
    while (lex_.peek().tok == Tok::iff) {
      lex_.next();
      Formula r = parse_impl();
      f = Formula::iff(std::move(f), std::move(r));
    }
    return f;
  }

  Formula parse_impl() {
    Formula f = parse_or();
    if (accept(Tok::arrow)) {
      Formula r = parse_impl();  // right-associative
      return Formula::implication(std::move(f), std::move(r));
    }
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (lex_.peek().tok == Tok::pipe) {
      lex_.next();
      Formula r = parse_and();
      f = Formula::disjunction(std::move(f), std::move(r));
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (lex_.peek().tok == Tok::amp) {
      lex_.next();
      Formula r = parse_unary();
      f = Formula::conjunction(std::move(f), std::move(r));
    }
    return f;
  }

  Formula parse_unary() {
    if (accept(Tok::bang)) return Formula::negation(parse_unary());
    if (lex_.peek().tok == Tok::kw_forall || lex_.peek().tok == Tok::kw_exists) {
      bool universal = lex_.next().tok == Tok::kw_forall;
      Token name = expect(Tok::ident, "a bound variable");
      std::optional<TypeExpr> type;
      if (accept(Tok::caret)) {
        type = parse_type();
      } else if (const TypeExpr* t = scope_lookup(name.text)) {
        type = *t;  // rebinding at the enclosing binder's type
      } else if (auto it = known_.find(name.text); it != known_.end()) {
        type = it->second.type;
      }
      if (!type) {
        throw parse_error("bound variable '" + name.text +
                          "' needs a type annotation", name.line, name.col);
      }
      expect(Tok::dot, "'.' after the binder");
      scope_.emplace_back(name.text, *type);
      Formula body = parse_formula();  // body extends maximally
      scope_.pop_back();
      Term var = Term::variable(name.text, *type);
      try {
        return universal ? Formula::forall(std::move(var), std::move(body))
                         : Formula::exists(std::move(var), std::move(body));
      } catch (const type_error& e) {
        throw parse_error(e.what(), name.line, name.col);
      }
    }
    return parse_primary();
  }

  Formula parse_primary() {
    if (accept(Tok::lparen)) {
      Formula f = parse_formula();
      expect(Tok::rparen, "')'");
      return f;
    }
    if (lex_.peek().tok != Tok::ident) fail("expected a formula");

    Token name = lex_.next();
    std::optional<TypeExpr> annotated;
    if (accept(Tok::caret)) annotated = parse_type();

    if (lex_.peek().tok == Tok::lparen) {
      // application: resolve the head first, then type arguments by slot
      Term head = make_term(name.text, annotated, nullptr, name.line, name.col);
      if (!head.type.is_tuple()) {
        throw parse_error("'" + head.name + "' of type " + head.type.to_string() +
                          " is not applicable", name.line, name.col);
      }
      lex_.next();
      std::vector<Term> args;
      const auto& comps = head.type.components();
      if (lex_.peek().tok != Tok::rparen) {
        do {
          const TypeExpr* expected =
              args.size() < comps.size() ? &comps[args.size()] : nullptr;
          args.push_back(parse_annotated_term(expected));
        } while (accept(Tok::comma));
      }
      Token closing = expect(Tok::rparen, "')'");
      try {
        return Formula::atom(std::move(head), std::move(args));
      } catch (const type_error& e) {
        throw parse_error(e.what(), name.line, closing.col);
      }
    }

    if (lex_.peek().tok == Tok::eq) {
      Term l = make_term(name.text, annotated, nullptr, name.line, name.col);
      lex_.next();
      Term r = parse_annotated_term(&l.type);
      try {
        return Formula::equality(std::move(l), std::move(r));
      } catch (const type_error& e) {
        throw parse_error(e.what(), name.line, name.col);
      }
    }

    throw parse_error("name '" + name.text +
                      "' does not start a formula (expected '(' or '=')",
                      name.line, name.col);
  }
};

}  // namespace

TypeExpr parse_type(std::string_view text) {
  return Parser(text, nullptr).type_entry();
}

Term parse_term(std::string_view text, const SymbolTable* symbols) {
  return Parser(text, symbols).term_entry();
}

Formula parse_formula(std::string_view text, const SymbolTable* symbols) {
  return Parser(text, symbols).formula_entry();
}

Formula parse_formula(std::string_view text, SymbolTable& symbols) {
  Parser p(text, &symbols);
  Formula f = p.formula_entry();
  for (const auto& [name, info] : p.learned()) symbols.insert({name, info});
  return f;
}

std::vector<Formula> parse_formula_file(std::istream& in, SymbolTable* symbols) {
  SymbolTable local;
  SymbolTable& table = symbols ? *symbols : local;
  std::vector<Formula> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string trimmed = line;
    auto hash = trimmed.find('#');
    if (hash != std::string::npos) trimmed.erase(hash);
    bool blank = trimmed.find_first_not_of(" \t\r") == std::string::npos;
    if (blank) continue;
    try {
      out.push_back(parse_formula(trimmed, table));
    } catch (const parse_error& e) {
      throw parse_error(e.message, lineno, e.column);
    }
  }
  return out;
}

}  // namespace veil::lang

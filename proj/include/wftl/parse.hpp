#pragma once
// Recursive-descent parser for the ASCII formula syntax:
//
//   ~ not   & and   | or   => implies   <> eventually   [] always
//   c(name) condition   identifiers   parentheses
//
// Precedence, tightest first: prefix operators; & ; | ; => (right
// associative). Whitespace is insignificant.

#include <cctype>
#include <string>
#include <string_view>

#include "wftl/errors.hpp"
#include "wftl/formula.hpp"

namespace wftl {

namespace detail {

enum class Tok { Ident, Not, And, Or, Implies, Eventually, Always, LParen, RParen, End };

class FormulaLexer {
public:
  explicit FormulaLexer(std::string_view text) : text_(text) { advance(); }

  Tok tok() const { return tok_; }
  const std::string& ident() const { return ident_; }
  std::size_t pos() const { return tok_pos_; }

  void advance() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
    tok_pos_ = i_;
    if (i_ >= text_.size()) {
      tok_ = Tok::End;
      return;
    }
    char c = text_[i_];
    switch (c) {
      case '~': ++i_; tok_ = Tok::Not; return;
      case '&': ++i_; tok_ = Tok::And; return;
      case '|': ++i_; tok_ = Tok::Or; return;
      case '(': ++i_; tok_ = Tok::LParen; return;
      case ')': ++i_; tok_ = Tok::RParen; return;
      case '=':
        if (i_ + 1 < text_.size() && text_[i_ + 1] == '>') {
          i_ += 2;
          tok_ = Tok::Implies;
          return;
        }
        throw SyntaxError("expected '=>'", i_);
      case '<':
        if (i_ + 1 < text_.size() && text_[i_ + 1] == '>') {
          i_ += 2;
          tok_ = Tok::Eventually;
          return;
        }
        throw SyntaxError("expected '<>'", i_);
      case '[':
        if (i_ + 1 < text_.size() && text_[i_ + 1] == ']') {
          i_ += 2;
          tok_ = Tok::Always;
          return;
        }
        throw SyntaxError("expected '[]'", i_);
      default:
        break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i_;
      while (i_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[i_])) || text_[i_] == '_'))
        ++i_;
      ident_.assign(text_.substr(start, i_ - start));
      tok_ = Tok::Ident;
      return;
    }
    throw SyntaxError(std::string("unknown token '") + c + "'", i_);
  }

private:
  std::string_view text_;
  std::size_t i_ = 0;
  Tok tok_ = Tok::End;
  std::size_t tok_pos_ = 0;
  std::string ident_;
};

class FormulaParser {
public:
  explicit FormulaParser(std::string_view text) : lex_(text) {}

  FormulaPtr parse() {
    if (lex_.tok() == Tok::End) throw SyntaxError("empty formula", 0);
    FormulaPtr f = implication();
    if (lex_.tok() != Tok::End) {
      if (lex_.tok() == Tok::RParen)
        throw SyntaxError("unbalanced ')'", lex_.pos());
      throw SyntaxError("unexpected trailing input", lex_.pos());
    }
    return f;
  }

private:
  FormulaPtr implication() {
    FormulaPtr l = disjunction();
    if (lex_.tok() == Tok::Implies) {
      lex_.advance();
      return implies(std::move(l), implication());  // right associative
    }
    return l;
  }

  FormulaPtr disjunction() {
    FormulaPtr f = conjunction();
    while (lex_.tok() == Tok::Or) {
      lex_.advance();
      f = disj(std::move(f), conjunction());
    }
    return f;
  }

  FormulaPtr conjunction() {
    FormulaPtr f = unary();
    while (lex_.tok() == Tok::And) {
      lex_.advance();
      f = conj(std::move(f), unary());
    }
    return f;
  }

  FormulaPtr unary() {
    switch (lex_.tok()) {
      case Tok::Not:
        lex_.advance();
        return neg(unary());
      case Tok::Eventually:
        lex_.advance();
        return eventually(unary());
      case Tok::Always:
        lex_.advance();
        return always(unary());
      default:
        return primary();
    }
  }

  FormulaPtr primary() {
    switch (lex_.tok()) {
      case Tok::LParen: {
        std::size_t open = lex_.pos();
        lex_.advance();
        FormulaPtr f = implication();
        if (lex_.tok() != Tok::RParen)
          throw SyntaxError("unbalanced '('", open);
        lex_.advance();
        return f;
      }
      case Tok::Ident: {
        std::string name = lex_.ident();
        std::size_t at = lex_.pos();
        lex_.advance();
        if (name == "c" && lex_.tok() == Tok::LParen) {
          lex_.advance();
          if (lex_.tok() != Tok::Ident)
            throw SyntaxError("c(...) must be applied to an atom", lex_.pos());
          std::string subject = lex_.ident();
          lex_.advance();
          if (lex_.tok() != Tok::RParen)
            throw SyntaxError("c(...) must be applied to a single atom", lex_.pos());
          lex_.advance();
          return cond(std::move(subject));
        }
        (void)at;
        return atom(std::move(name));
      }
      case Tok::End:
        throw SyntaxError("unexpected end of formula", lex_.pos());
      default:
        throw SyntaxError("unexpected token", lex_.pos());
    }
  }

  FormulaLexer lex_;
};

}  // namespace detail

inline FormulaPtr parse_formula(std::string_view text) {
  return detail::FormulaParser(text).parse();
}

}  // namespace wftl

#pragma once
// Printer for the ASCII formula syntax. Output re-parses to a structurally
// equal formula. Parentheses are minimal, except that a binary antecedent of
// `=>` is always parenthesized, which is how specification files are
// conventionally written.

#include <string>

#include "wftl/errors.hpp"
#include "wftl/formula.hpp"

namespace wftl {

namespace detail {

// Higher binds tighter.
inline int precedence(Kind k) {
  switch (k) {
    case Kind::Implies: return 0;
    case Kind::Or: return 1;
    case Kind::And: return 2;
    case Kind::Not:
    case Kind::Eventually:
    case Kind::Always: return 3;
    default: return 4;  // atoms, conditions
  }
}

inline void print_rec(const FormulaPtr& f, std::string& out) {
  auto child = [&out](const FormulaPtr& c, bool parens) {
    if (parens) {
      out += '(';
      print_rec(c, out);
      out += ')';
    } else {
      print_rec(c, out);
    }
  };
  switch (f->kind()) {
    case Kind::Atom:
      out += f->name();
      return;
    case Kind::Cond:
      out += "c(";
      out += f->name();
      out += ')';
      return;
    case Kind::Not:
      out += '~';
      child(f->left(), precedence(f->left()->kind()) < 3);
      return;
    case Kind::Eventually:
      out += "<>";
      child(f->left(), precedence(f->left()->kind()) < 3);
      return;
    case Kind::Always:
      out += "[]";
      child(f->left(), precedence(f->left()->kind()) < 3);
      return;
    case Kind::And:
      child(f->left(), precedence(f->left()->kind()) < 2);
      out += " & ";
      child(f->right(), precedence(f->right()->kind()) <= 2);
      return;
    case Kind::Or:
      child(f->left(), precedence(f->left()->kind()) < 1);
      out += " | ";
      child(f->right(), precedence(f->right()->kind()) <= 1);
      return;
    case Kind::Implies: {
      Kind lk = f->left()->kind();
      bool lparens = lk == Kind::Implies || lk == Kind::And || lk == Kind::Or;
      child(f->left(), lparens);
      out += " => ";
      print_rec(f->right(), out);  // right associative, never needs parens
      return;
    }
    case Kind::Next:
      throw InternalError("Next must not reach the printer");
  }
}

}  // namespace detail

inline std::string print_formula(const FormulaPtr& f) {
  std::string out;
  detail::print_rec(f, out);
  return out;
}

}  // namespace wftl

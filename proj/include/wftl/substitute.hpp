#pragma once
// Simultaneous substitution of atoms by formulas. The instantiation
// primitive behind pattern application: atoms not bound pass through, and a
// condition subject may only be bound to a single atom.

#include <map>
#include <string>

#include "wftl/errors.hpp"
#include "wftl/formula.hpp"

namespace wftl {

using Binding = std::map<std::string, FormulaPtr>;

inline FormulaPtr substitute(const FormulaPtr& f, const Binding& binding) {
  switch (f->kind()) {
    case Kind::Atom: {
      auto it = binding.find(f->name());
      return it == binding.end() ? f : it->second;
    }
    case Kind::Cond: {
      auto it = binding.find(f->name());
      if (it == binding.end()) return f;
      if (it->second->kind() != Kind::Atom)
        throw CondSubstitutionError(
            "condition subject '" + f->name() +
            "' may only be replaced by a single atom");
      return cond(it->second->name());
    }
    case Kind::Not:
      return neg(substitute(f->left(), binding));
    case Kind::And:
      return conj(substitute(f->left(), binding), substitute(f->right(), binding));
    case Kind::Or:
      return disj(substitute(f->left(), binding), substitute(f->right(), binding));
    case Kind::Implies:
      return implies(substitute(f->left(), binding), substitute(f->right(), binding));
    case Kind::Eventually:
      return eventually(substitute(f->left(), binding));
    case Kind::Always:
      return always(substitute(f->left(), binding));
    case Kind::Next:
      return next(substitute(f->left(), binding));
  }
  throw InternalError("substitute: unhandled kind");
}

}  // namespace wftl

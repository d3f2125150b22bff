#pragma once
// Negation normal form and the subformula closure used by the decision
// procedure.
//
// NNF pushes negations down to atoms and eliminates `=>`, using the
// dualities ~<>f == []~f and ~[]f == <>~f. The closure adds the one-step
// expansions <>f -> {f, X<>f} and []f -> {f, X[]f}; Next nodes occur only
// here and inside the prover.

#include <unordered_set>
#include <vector>

#include "wftl/errors.hpp"
#include "wftl/formula.hpp"

namespace wftl {

inline FormulaPtr nnf(const FormulaPtr& f);

namespace detail {

inline FormulaPtr nnf_neg(const FormulaPtr& f) {
  switch (f->kind()) {
    case Kind::Atom:
    case Kind::Cond:
      return neg(f);
    case Kind::Not:
      return nnf(f->left());
    case Kind::And:
      return disj(nnf_neg(f->left()), nnf_neg(f->right()));
    case Kind::Or:
      return conj(nnf_neg(f->left()), nnf_neg(f->right()));
    case Kind::Implies:
      return conj(nnf(f->left()), nnf_neg(f->right()));
    case Kind::Eventually:
      return always(nnf_neg(f->left()));
    case Kind::Always:
      return eventually(nnf_neg(f->left()));
    case Kind::Next:
      throw InternalError("nnf: unexpected Next");
  }
  throw InternalError("nnf: unhandled kind");
}

}  // namespace detail

inline FormulaPtr nnf(const FormulaPtr& f) {
  switch (f->kind()) {
    case Kind::Atom:
    case Kind::Cond:
      return f;
    case Kind::Not:
      return detail::nnf_neg(f->left());
    case Kind::And:
      return conj(nnf(f->left()), nnf(f->right()));
    case Kind::Or:
      return disj(nnf(f->left()), nnf(f->right()));
    case Kind::Implies:
      return disj(detail::nnf_neg(f->left()), nnf(f->right()));
    case Kind::Eventually:
      return eventually(nnf(f->left()));
    case Kind::Always:
      return always(nnf(f->left()));
    case Kind::Next:
      throw InternalError("nnf: unexpected Next");
  }
  throw InternalError("nnf: unhandled kind");
}

namespace detail {

inline void close_over(const FormulaPtr& f, FormulaSet& seen,
                       std::vector<FormulaPtr>& out) {
  if (!f || seen.count(f)) return;
  seen.insert(f);
  out.push_back(f);
  switch (f->kind()) {
    case Kind::Atom:
    case Kind::Cond:
      return;
    case Kind::Not:
      if (!f->is_literal())
        throw InternalError("closure: input not in negation normal form");
      close_over(f->left(), seen, out);
      return;
    case Kind::Implies:
      throw InternalError("closure: input not in negation normal form");
    case Kind::And:
    case Kind::Or:
      close_over(f->left(), seen, out);
      close_over(f->right(), seen, out);
      return;
    case Kind::Eventually:
    case Kind::Always:
      close_over(f->left(), seen, out);
      close_over(next(f), seen, out);
      return;
    case Kind::Next:
      close_over(f->left(), seen, out);
      return;
  }
}

}  // namespace detail

// Subformula closure of an NNF formula set, closed under the fixpoint
// expansions of <> and []. Deterministic order: discovery order of a
// depth-first walk over the inputs as given.
inline std::vector<FormulaPtr> closure(const std::vector<FormulaPtr>& fs) {
  FormulaSet seen;
  std::vector<FormulaPtr> out;
  for (const auto& f : fs) detail::close_over(f, seen, out);
  return out;
}

}  // namespace wftl

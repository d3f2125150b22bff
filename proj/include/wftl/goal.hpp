#pragma once
// Verification goals: premises, a property Q, and the premise mode.
//
// The goal C(L) => Q is decided by refutation. In Local mode the premises
// are asserted at the initial instant only; in Global mode each premise is
// wrapped in [] and holds at every instant. Both readings are first-class;
// reports always name the mode used.

#include <string>
#include <vector>

#include "wftl/errors.hpp"
#include "wftl/formula.hpp"

namespace wftl {

enum class Mode { Local, Global };

inline std::string mode_name(Mode m) {
  return m == Mode::Local ? "local" : "global";
}

struct VerificationGoal {
  std::vector<FormulaPtr> premises;
  FormulaPtr property;
  Mode mode = Mode::Global;
};

// The satisfiability problem whose UNSAT answer proves the goal:
//   Local:  {f1, ..., fn, ~Q}
//   Global: {[]f1, ..., []fn, ~Q}
inline std::vector<FormulaPtr> build_goal(const VerificationGoal& g) {
  if (!g.property || contains_next(g.property))
    throw Error("goal property must be a Next-free formula");
  std::vector<FormulaPtr> out;
  out.reserve(g.premises.size() + 1);
  for (const auto& f : g.premises)
    out.push_back(g.mode == Mode::Global ? always(f) : f);
  out.push_back(neg(g.property));
  return out;
}

}  // namespace wftl

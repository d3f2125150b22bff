#pragma once
// Goal proving on top of the tableau: premise slicing, refutation, and
// oracle-checked counterexamples.
//
// prove_property decides C(L) => Q by refutation: the goal is Proved iff the
// goal set from build_goal is unsatisfiable. With the cone enabled, premises
// are first sliced to the atom-sharing cone of Q; a Proved answer on the
// slice carries over to the full premise set (the antecedent only gets
// stronger), while a Refuted answer triggers a rerun on the full set before
// anything is reported. Every Refuted report carries a trace that the trace
// evaluator has confirmed; an unconfirmed trace is an internal error, never
// an answer.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wftl/errors.hpp"
#include "wftl/formula.hpp"
#include "wftl/goal.hpp"
#include "wftl/oracle.hpp"
#include "wftl/specgen.hpp"
#include "wftl/tableau.hpp"
#include "wftl/trace.hpp"

namespace wftl {

struct VerificationReport {
  enum class Result { Proved, Refuted, ResourceLimit };
  Result result = Result::ResourceLimit;
  Mode mode = Mode::Global;
  bool cone_used = false;
  std::optional<Trace> counterexample;  // present iff Refuted
  TableauStats stats;
};

inline std::string result_name(VerificationReport::Result r) {
  switch (r) {
    case VerificationReport::Result::Proved: return "Proved";
    case VerificationReport::Result::Refuted: return "Refuted";
    case VerificationReport::Result::ResourceLimit: return "ResourceLimit";
  }
  return "?";
}

// Smallest subset of L closed under atom-sharing reachability from the atoms
// of Q. Condition atoms share through their subject activity.
inline LogicalSpecification cone_of_influence(const LogicalSpecification& L,
                                              const FormulaPtr& property) {
  std::set<std::string> seed;
  for_each_prop(property, [&](const std::string& n, bool) { seed.insert(n); });

  std::vector<char> in_cone(L.size(), 0);
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t i = 0; i < L.size(); ++i) {
      if (in_cone[i]) continue;
      bool touches = false;
      for_each_prop(L.entries()[i].formula, [&](const std::string& n, bool) {
        if (seed.count(n)) touches = true;
      });
      if (!touches) continue;
      in_cone[i] = 1;
      grew = true;
      for_each_prop(L.entries()[i].formula,
                    [&](const std::string& n, bool) { seed.insert(n); });
    }
  }

  LogicalSpecification out;
  for (std::size_t i = 0; i < L.size(); ++i)
    if (in_cone[i]) out.add(L.entries()[i].formula, L.entries()[i].origin);
  return out;
}

struct ProveOptions {
  SolverOptions solver;
  bool use_cone = true;
};

inline VerificationReport prove_property(const VerificationGoal& goal,
                                         const ProveOptions& options = {}) {
  VerificationReport report;
  report.mode = goal.mode;

  VerificationGoal sliced = goal;
  if (options.use_cone) {
    LogicalSpecification full;
    for (const auto& f : goal.premises) full.add(f, {});
    auto cone = cone_of_influence(full, goal.property);
    sliced.premises = cone.formulas();
    report.cone_used = true;
  }

  SatResult sat = decide_satisfiable(build_goal(sliced), options.solver);
  if (sat.kind == SatResult::Kind::Sat &&
      sliced.premises.size() != goal.premises.size()) {
    // The slice is only a Proved-accelerator; refutations must stand against
    // the full antecedent.
    report.cone_used = false;
    sat = decide_satisfiable(build_goal(goal), options.solver);
  }

  report.stats = sat.stats;
  switch (sat.kind) {
    case SatResult::Kind::Unsat:
      report.result = VerificationReport::Result::Proved;
      break;
    case SatResult::Kind::Sat: {
      if (!sat.model) throw InternalError("prover: Sat without model");
      if (!confirm_counterexample(*sat.model,
                                  report.cone_used ? sliced : goal))
        throw InternalError("prover: unconfirmed counterexample");
      report.result = VerificationReport::Result::Refuted;
      report.counterexample = sat.model;
      break;
    }
    case SatResult::Kind::ResourceLimit:
      report.result = VerificationReport::Result::ResourceLimit;
      break;
  }
  return report;
}

}  // namespace wftl

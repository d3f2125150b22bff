#pragma once
// Shared helpers for the test suites: seeded random formula and trace
// generators sized to the property-test contracts.

#include <random>
#include <string>
#include <vector>

#include "wftl/formula.hpp"
#include "wftl/trace.hpp"

namespace wftl::testing {

inline const std::vector<std::string>& small_atoms() {
  static const std::vector<std::string> names = {"p", "q", "r"};
  return names;
}

// Random Next-free formula over at most `atom_count` atoms with at most
// `temporal_budget` temporal operators. Connective shape is unrestricted.
inline FormulaPtr random_formula(std::mt19937& rng, int atom_count,
                                 int temporal_budget, int depth = 0) {
  std::uniform_int_distribution<int> atom_pick(0, atom_count - 1);
  auto leaf = [&] { return atom(small_atoms()[atom_pick(rng)]); };
  if (depth >= 5) return leaf();
  std::uniform_int_distribution<int> shape(0, 9);
  int s = shape(rng);
  if (s <= 2) return leaf();
  if (s == 3) return neg(random_formula(rng, atom_count, temporal_budget, depth + 1));
  if (s <= 5 && temporal_budget > 0) {
    auto inner = random_formula(rng, atom_count, temporal_budget - 1, depth + 1);
    return s == 4 ? eventually(std::move(inner)) : always(std::move(inner));
  }
  int lhs_budget = temporal_budget / 2;
  auto l = random_formula(rng, atom_count, lhs_budget, depth + 1);
  auto r = random_formula(rng, atom_count, temporal_budget - lhs_budget, depth + 1);
  switch (s % 3) {
    case 0: return conj(std::move(l), std::move(r));
    case 1: return disj(std::move(l), std::move(r));
    default: return implies(std::move(l), std::move(r));
  }
}

inline TraceState random_state(std::mt19937& rng, int atom_count) {
  TraceState s;
  std::bernoulli_distribution coin(0.4);
  for (int i = 0; i < atom_count; ++i)
    if (coin(rng)) s.insert(Prop{small_atoms()[i], false});
  return s;
}

inline Trace random_trace(std::mt19937& rng, int atom_count, int max_prefix,
                          int max_loop) {
  std::uniform_int_distribution<int> plen(0, max_prefix);
  std::uniform_int_distribution<int> llen(1, max_loop);
  Trace t;
  int p = plen(rng), l = llen(rng);
  for (int i = 0; i < p; ++i) t.prefix.push_back(random_state(rng, atom_count));
  for (int i = 0; i < l; ++i) t.loop.push_back(random_state(rng, atom_count));
  return t;
}

}  // namespace wftl::testing

#pragma once
// Ultimately periodic traces (finite prefix + nonempty loop) and formula
// evaluation on them. This evaluator is the ground-truth semantics of the
// toolkit; it is deliberately direct and shares no machinery with the
// tableau-based decision procedure.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wftl/errors.hpp"
#include "wftl/formula.hpp"

namespace wftl {

// A proposition as it appears in a trace state: an activity atom or the
// condition c(name) of one.
struct Prop {
  std::string name;
  bool is_cond = false;

  bool operator<(const Prop& o) const {
    if (name != o.name) return name < o.name;
    return is_cond < o.is_cond;
  }
  bool operator==(const Prop& o) const {
    return name == o.name && is_cond == o.is_cond;
  }
  std::string str() const { return is_cond ? "c(" + name + ")" : name; }
};

using TraceState = std::set<Prop>;

struct Trace {
  std::vector<TraceState> prefix;
  std::vector<TraceState> loop;  // nonempty; the trace is prefix . loop^omega

  bool operator==(const Trace& o) const {
    return prefix == o.prefix && loop == o.loop;
  }

  const TraceState& at(std::size_t i) const {
    if (i < prefix.size()) return prefix[i];
    return loop[(i - prefix.size()) % loop.size()];
  }
};

inline std::string trace_state_to_string(const TraceState& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& p : s) {
    if (!first) out += ',';
    out += p.str();
    first = false;
  }
  out += '}';
  return out;
}

// Text form: prefix: [{a,b},{}] loop: [{c}]
inline std::string trace_to_string(const Trace& t) {
  auto states = [](const std::vector<TraceState>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ',';
      out += trace_state_to_string(v[i]);
    }
    out += ']';
    return out;
  };
  return "prefix: " + states(t.prefix) + " loop: " + states(t.loop);
}

// Collapse a repeated loop period and absorb a prefix tail that already
// matches the loop. The denoted infinite trace is unchanged.
inline Trace normalize_trace(Trace t) {
  if (t.loop.empty()) throw InternalError("trace loop must be nonempty");
  for (std::size_t d = 1; d <= t.loop.size() / 2; ++d) {
    if (t.loop.size() % d) continue;
    bool periodic = true;
    for (std::size_t i = d; i < t.loop.size() && periodic; ++i)
      periodic = t.loop[i] == t.loop[i % d];
    if (periodic) {
      t.loop.resize(d);
      break;
    }
  }
  while (!t.prefix.empty() && t.prefix.back() == t.loop.back()) {
    t.prefix.pop_back();
    std::rotate(t.loop.begin(), t.loop.end() - 1, t.loop.end());
  }
  return t;
}

// Instrumentation for the evaluation-bound invariant: evaluation never
// inspects a position beyond prefix + 2*loop.
struct EvalStats {
  std::size_t max_inspected = 0;
};

namespace detail {

class TraceEval {
public:
  TraceEval(const Trace& t, EvalStats* stats) : t_(t), stats_(stats) {
    if (t.loop.empty()) throw InternalError("trace loop must be nonempty");
    p_ = t.prefix.size();
    l_ = t.loop.size();
  }

  bool eval(const FormulaPtr& f, std::size_t i) {
    if (stats_) stats_->max_inspected = std::max(stats_->max_inspected, i);
    i = canonical(i);
    auto key = std::make_pair(f.get(), i);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool v = compute(f, i);
    memo_.emplace(key, v);
    return v;
  }

private:
  // Positions at and beyond the loop are periodic; fold them back so that
  // every inspected index stays below prefix + 2*loop.
  std::size_t canonical(std::size_t i) const {
    if (i >= p_ + l_) i = p_ + (i - p_) % l_;
    return i;
  }

  bool state_has(std::size_t i, const Prop& prop) {
    return t_.at(i).count(prop) != 0;
  }

  bool compute(const FormulaPtr& f, std::size_t i) {
    switch (f->kind()) {
      case Kind::Atom:
        return state_has(i, Prop{f->name(), false});
      case Kind::Cond:
        return state_has(i, Prop{f->name(), true});
      case Kind::Not:
        return !eval(f->left(), i);
      case Kind::And:
        return eval(f->left(), i) && eval(f->right(), i);
      case Kind::Or:
        return eval(f->left(), i) || eval(f->right(), i);
      case Kind::Implies:
        return !eval(f->left(), i) || eval(f->right(), i);
      case Kind::Eventually:
        for (std::size_t j = i; j < p_ + 2 * l_; ++j)
          if (eval(f->left(), j)) return true;
        return false;
      case Kind::Always:
        for (std::size_t j = i; j < p_ + 2 * l_; ++j)
          if (!eval(f->left(), j)) return false;
        return true;
      case Kind::Next:
        throw InternalError("holds_on_trace: unexpected Next");
    }
    throw InternalError("holds_on_trace: unhandled kind");
  }

  const Trace& t_;
  EvalStats* stats_;
  std::size_t p_ = 0, l_ = 0;
  std::map<std::pair<const Formula*, std::size_t>, bool> memo_;
};

}  // namespace detail

inline bool holds_on_trace(const Trace& t, const FormulaPtr& f,
                           std::size_t position = 0,
                           EvalStats* stats = nullptr) {
  return detail::TraceEval(t, stats).eval(f, position);
}

inline bool holds_on_trace(const Trace& t, const std::vector<FormulaPtr>& fs,
                           std::size_t position = 0,
                           EvalStats* stats = nullptr) {
  detail::TraceEval ev(t, stats);
  for (const auto& f : fs)
    if (!ev.eval(f, position)) return false;
  return true;
}

}  // namespace wftl

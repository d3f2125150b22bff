#pragma once
// Bounded model search over ultimately periodic traces.
//
// search_model enumerates lasso shapes in the canonical order (loop length
// ascending, then prefix length, then lexicographic state sequences) and
// returns the first trace satisfying every input formula at position 0, or
// NoneUpToBound. The answer is bound-relative, never an unsatisfiability
// claim.
//
// The enumeration is organized as a depth-first assignment of one
// proposition per trace position with three-valued constraint propagation
// and memoization of failed residual states, which prunes without changing
// which trace is found first. Everything here works on raw formulas and the
// plain trace evaluator; none of the tableau machinery is involved.

#include <chrono>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "wftl/errors.hpp"
#include "wftl/formula.hpp"
#include "wftl/goal.hpp"
#include "wftl/trace.hpp"

namespace wftl {

struct SearchBounds {
  int max_prefix = 0;
  int max_loop = 1;
};

// Default bounds: 2 * (number of distinct temporal subformulas) + 2,
// adequate for the small-model behaviour of the <>/[] fragment at the sizes
// this toolkit targets. Reported alongside every NoneUpToBound answer.
inline SearchBounds default_bounds(const std::vector<FormulaPtr>& fs) {
  FormulaSet seen;
  int temporal = 0;
  auto walk = [&](auto&& self, const FormulaPtr& f) -> void {
    if (!f) return;
    if ((f->kind() == Kind::Eventually || f->kind() == Kind::Always) &&
        seen.insert(f).second)
      ++temporal;
    self(self, f->left());
    self(self, f->right());
  };
  for (const auto& f : fs) walk(walk, f);
  int bound = 2 * temporal + 2;
  return SearchBounds{bound, bound};
}

struct OracleOptions {
  std::optional<SearchBounds> bounds;  // default derived from the input
  std::int64_t budget_ms = 120000;
};

struct SearchResult {
  enum class Kind { ModelFound, NoneUpToBound, ResourceLimit };
  Kind kind = Kind::NoneUpToBound;
  std::optional<Trace> model;
  SearchBounds bounds_used;
};

namespace detail {

class LassoSearch {
public:
  LassoSearch(const std::vector<FormulaPtr>& fs, const std::set<Prop>& atoms,
              std::int64_t budget_ms)
      : budget_ms_(budget_ms), start_(std::chrono::steady_clock::now()) {
    for (const auto& f : fs) roots_.push_back(intern(f));
    // Branch only over propositions that occur in the formulas and belong to
    // the given universe; everything else is false in every state, which is
    // also what the lexicographic enumeration would pick first.
    for (const auto& [prop, node] : prop_nodes_)
      if (atoms.count(prop)) branch_props_.push_back(prop);
      else preset_false_.push_back(node);
  }

  // Shapes in canonical order; the first hit is the canonical model.
  SearchResult run(const SearchBounds& bounds) {
    SearchResult res;
    res.bounds_used = bounds;
    for (int loop = 1; loop <= bounds.max_loop; ++loop) {
      for (int prefix = 0; prefix <= bounds.max_prefix; ++prefix) {
        if (out_of_budget()) {
          res.kind = SearchResult::Kind::ResourceLimit;
          return res;
        }
        if (search_shape(prefix, loop)) {
          res.kind = SearchResult::Kind::ModelFound;
          res.model = std::move(model_);
          return res;
        }
        if (limited_) {
          res.kind = SearchResult::Kind::ResourceLimit;
          return res;
        }
      }
    }
    res.kind = SearchResult::Kind::NoneUpToBound;
    return res;
  }

private:
  struct Node {
    Kind kind;
    int prop = -1;  // index into props_ for leaves
    int a = -1, b = -1;
  };

  static constexpr std::int8_t kU = 0, kF = 1, kT = 2;

  int intern(const FormulaPtr& f) {
    auto it = interned_.find(f);
    if (it != interned_.end()) return it->second;
    Node n;
    n.kind = f->kind();
    switch (f->kind()) {
      case Kind::Atom:
      case Kind::Cond: {
        Prop p{f->name(), f->kind() == Kind::Cond};
        auto pit = prop_index_.find(p);
        if (pit == prop_index_.end()) {
          pit = prop_index_.emplace(p, static_cast<int>(props_.size())).first;
          props_.push_back(p);
        }
        n.prop = pit->second;
        break;
      }
      case Kind::Not:
      case Kind::Eventually:
      case Kind::Always:
        n.a = intern(f->left());
        break;
      case Kind::And:
      case Kind::Or:
      case Kind::Implies:
        n.a = intern(f->left());
        n.b = intern(f->right());
        break;
      case Kind::Next:
        throw InternalError("search_model: unexpected Next");
    }
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(n);
    interned_.emplace(f, id);
    if (n.prop >= 0) prop_nodes_[props_[n.prop]] = id;
    return id;
  }

  int cell(int node, int pos) const { return node * n_ + pos; }

  // Future positions seen from position i: the rest of the prefix plus the
  // whole loop; from inside the loop, the whole loop.
  int future_begin(int i) const { return i < p_ ? i : p_; }

  bool out_of_budget() {
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start_)
                       .count();
    return elapsed > budget_ms_;
  }

  bool set_val(int c, std::int8_t v) {
    if (val_[c] == v) return true;
    if (val_[c] != kU) return false;
    val_[c] = v;
    trail_.push_back(c);
    queue_.push_back(c);
    return true;
  }

  std::int8_t forward(int node, int pos) const {
    const Node& nd = nodes_[node];
    switch (nd.kind) {
      case Kind::Atom:
      case Kind::Cond:
        return val_[cell(node, pos)];
      case Kind::Not: {
        std::int8_t a = val_[cell(nd.a, pos)];
        return a == kU ? kU : (a == kT ? kF : kT);
      }
      case Kind::And: {
        std::int8_t a = val_[cell(nd.a, pos)], b = val_[cell(nd.b, pos)];
        if (a == kF || b == kF) return kF;
        if (a == kT && b == kT) return kT;
        return kU;
      }
      case Kind::Or: {
        std::int8_t a = val_[cell(nd.a, pos)], b = val_[cell(nd.b, pos)];
        if (a == kT || b == kT) return kT;
        if (a == kF && b == kF) return kF;
        return kU;
      }
      case Kind::Implies: {
        std::int8_t a = val_[cell(nd.a, pos)], b = val_[cell(nd.b, pos)];
        if (a == kF || b == kT) return kT;
        if (a == kT && b == kF) return kF;
        return kU;
      }
      case Kind::Eventually: {
        bool any_u = false;
        for (int j = future_begin(pos); j < n_; ++j) {
          std::int8_t v = val_[cell(nd.a, j)];
          if (v == kT) return kT;
          if (v == kU) any_u = true;
        }
        return any_u ? kU : kF;
      }
      case Kind::Always: {
        bool any_u = false;
        for (int j = future_begin(pos); j < n_; ++j) {
          std::int8_t v = val_[cell(nd.a, j)];
          if (v == kF) return kF;
          if (v == kU) any_u = true;
        }
        return any_u ? kU : kT;
      }
      case Kind::Next:
        break;
    }
    throw InternalError("search_model: unhandled kind");
  }

  // Force children whose value follows from a determined cell.
  bool push_down(int node, int pos) {
    const Node& nd = nodes_[node];
    std::int8_t v = val_[cell(node, pos)];
    if (v == kU) return true;
    switch (nd.kind) {
      case Kind::Atom:
      case Kind::Cond:
        return true;
      case Kind::Not:
        return set_val(cell(nd.a, pos), v == kT ? kF : kT);
      case Kind::And: {
        int ca = cell(nd.a, pos), cb = cell(nd.b, pos);
        if (v == kT) return set_val(ca, kT) && set_val(cb, kT);
        if (val_[ca] == kT) return set_val(cb, kF);
        if (val_[cb] == kT) return set_val(ca, kF);
        return true;
      }
      case Kind::Or: {
        int ca = cell(nd.a, pos), cb = cell(nd.b, pos);
        if (v == kF) return set_val(ca, kF) && set_val(cb, kF);
        if (val_[ca] == kF) return set_val(cb, kT);
        if (val_[cb] == kF) return set_val(ca, kT);
        return true;
      }
      case Kind::Implies: {
        int ca = cell(nd.a, pos), cb = cell(nd.b, pos);
        if (v == kF) return set_val(ca, kT) && set_val(cb, kF);
        if (val_[ca] == kT) return set_val(cb, kT);
        if (val_[cb] == kF) return set_val(ca, kF);
        return true;
      }
      case Kind::Eventually: {
        if (v == kF) {
          for (int j = future_begin(pos); j < n_; ++j)
            if (!set_val(cell(nd.a, j), kF)) return false;
          return true;
        }
        int open = -1, opens = 0;
        for (int j = future_begin(pos); j < n_; ++j) {
          std::int8_t cv = val_[cell(nd.a, j)];
          if (cv == kT) return true;  // already satisfied
          if (cv == kU) {
            ++opens;
            open = j;
          }
        }
        if (opens == 0) return false;  // all false but cell demands T
        if (opens == 1) return set_val(cell(nd.a, open), kT);
        return true;
      }
      case Kind::Always: {
        if (v == kT) {
          for (int j = future_begin(pos); j < n_; ++j)
            if (!set_val(cell(nd.a, j), kT)) return false;
          return true;
        }
        int open = -1, opens = 0;
        for (int j = future_begin(pos); j < n_; ++j) {
          std::int8_t cv = val_[cell(nd.a, j)];
          if (cv == kF) return true;
          if (cv == kU) {
            ++opens;
            open = j;
          }
        }
        if (opens == 0) return false;
        if (opens == 1) return set_val(cell(nd.a, open), kF);
        return true;
      }
      case Kind::Next:
        break;
    }
    throw InternalError("search_model: unhandled kind");
  }

  bool visit_parent(int node, int pos) {
    std::int8_t fv = forward(node, pos);
    int c = cell(node, pos);
    if (fv != kU) {
      if (!set_val(c, fv)) return false;
      return true;
    }
    if (val_[c] != kU) return push_down(node, pos);
    return true;
  }

  bool propagate() {
    while (!queue_.empty()) {
      if (++steps_ % 8192 == 0 && out_of_budget()) {
        limited_ = true;
        return false;
      }
      int c = queue_.back();
      queue_.pop_back();
      int node = c / n_, pos = c % n_;
      for (const auto& [pn, pp] : parents_[c])
        if (!visit_parent(pn, pp)) return false;
      if (!push_down(node, pos)) return false;
    }
    return true;
  }

  void rollback(std::size_t mark) {
    while (trail_.size() > mark) {
      val_[trail_.back()] = kU;
      trail_.pop_back();
    }
    queue_.clear();
  }

  // Residual-state key: one status byte per cell. Determined cells whose
  // constraint is already discharged collapse to the same byte regardless of
  // their value, which is what makes equivalent pasts share one memo entry.
  std::string signature(int boundary) const {
    std::string sig;
    sig.reserve(val_.size() + 1);
    sig += static_cast<char>(boundary);
    for (int node = 0; node < static_cast<int>(nodes_.size()); ++node) {
      const Node& nd = nodes_[node];
      for (int pos = 0; pos < n_; ++pos) {
        std::int8_t v = val_[cell(node, pos)];
        char status;
        if (v == kU) {
          status = 0;
        } else {
          status = 1;  // resolved unless a pending obligation remains
          switch (nd.kind) {
            case Kind::And:
              if (v == kF && val_[cell(nd.a, pos)] != kF &&
                  val_[cell(nd.b, pos)] != kF)
                status = 3;
              break;
            case Kind::Or:
              if (v == kT && val_[cell(nd.a, pos)] != kT &&
                  val_[cell(nd.b, pos)] != kT)
                status = 2;
              break;
            case Kind::Implies:
              if (v == kT && val_[cell(nd.a, pos)] == kU &&
                  val_[cell(nd.b, pos)] == kU)
                status = 4;
              break;
            case Kind::Eventually:
              if (v == kT) {
                status = 2;
                for (int j = future_begin(pos); j < n_; ++j)
                  if (val_[cell(nd.a, j)] == kT) {
                    status = 1;
                    break;
                  }
              }
              break;
            case Kind::Always:
              if (v == kF) {
                status = 3;
                for (int j = future_begin(pos); j < n_; ++j)
                  if (val_[cell(nd.a, j)] == kF) {
                    status = 1;
                    break;
                  }
              }
              break;
            default:
              break;
          }
        }
        sig += status;
      }
    }
    return sig;
  }

  bool search_shape(int prefix, int loop) {
    p_ = prefix;
    l_ = loop;
    n_ = prefix + loop;
    int cells = static_cast<int>(nodes_.size()) * n_;
    val_.assign(cells, kU);
    trail_.clear();
    queue_.clear();
    failed_.clear();

    parents_.assign(cells, {});
    for (int node = 0; node < static_cast<int>(nodes_.size()); ++node) {
      const Node& nd = nodes_[node];
      for (int pos = 0; pos < n_; ++pos) {
        switch (nd.kind) {
          case Kind::Not:
            parents_[cell(nd.a, pos)].emplace_back(node, pos);
            break;
          case Kind::And:
          case Kind::Or:
          case Kind::Implies:
            parents_[cell(nd.a, pos)].emplace_back(node, pos);
            parents_[cell(nd.b, pos)].emplace_back(node, pos);
            break;
          case Kind::Eventually:
          case Kind::Always:
            for (int j = future_begin(pos); j < n_; ++j)
              parents_[cell(nd.a, j)].emplace_back(node, pos);
            break;
          default:
            break;
        }
      }
    }

    for (int node : preset_false_)
      for (int pos = 0; pos < n_; ++pos)
        if (!set_val(cell(node, pos), kF)) return false;
    for (int r : roots_)
      if (!set_val(cell(r, 0), kT)) return false;
    if (!propagate()) return false;
    return dfs(0);
  }

  bool dfs(int pos) {
    if (pos == n_) {
      capture_model();
      return true;
    }
    std::string sig = signature(pos);
    if (failed_.count(sig)) return false;
    if (assign_position(pos)) return true;
    if (!limited_ && failed_.size() < kMemoCap) failed_.insert(std::move(sig));
    return false;
  }

  bool assign_position(int pos) {
    // Highest-significance proposition first, false before true: this walks
    // the state sets of one position in ascending bitmask order.
    int pick = -1;
    for (int pi = static_cast<int>(branch_props_.size()) - 1; pi >= 0; --pi) {
      auto it = prop_nodes_.find(branch_props_[pi]);
      int c = cell(it->second, pos);
      if (val_[c] == kU) {
        pick = c;
        break;
      }
    }
    if (pick < 0) return dfs(pos + 1);
    for (std::int8_t v : {kF, kT}) {
      std::size_t mark = trail_.size();
      if (set_val(pick, v) && propagate()) {
        if (assign_position(pos)) return true;
      }
      if (limited_) return false;
      rollback(mark);
    }
    return false;
  }

  void capture_model() {
    Trace t;
    for (int pos = 0; pos < n_; ++pos) {
      TraceState s;
      for (const auto& prop : branch_props_) {
        int node = prop_nodes_.at(prop);
        if (val_[cell(node, pos)] == kT) s.insert(prop);
      }
      if (pos < p_)
        t.prefix.push_back(std::move(s));
      else
        t.loop.push_back(std::move(s));
    }
    model_ = std::move(t);
  }

  static constexpr std::size_t kMemoCap = 1u << 21;

  std::vector<Node> nodes_;
  std::unordered_map<FormulaPtr, int, FormulaHash, FormulaEq> interned_;
  std::vector<int> roots_;
  std::vector<Prop> props_;
  std::map<Prop, int> prop_index_;
  std::map<Prop, int> prop_nodes_;
  std::vector<Prop> branch_props_;
  std::vector<int> preset_false_;

  int p_ = 0, l_ = 1, n_ = 1;
  std::vector<std::int8_t> val_;
  std::vector<std::vector<std::pair<int, int>>> parents_;
  std::vector<int> trail_;
  std::vector<int> queue_;
  std::unordered_set<std::string> failed_;
  Trace model_;

  std::int64_t budget_ms_;
  std::chrono::steady_clock::time_point start_;
  std::uint64_t steps_ = 0;
  bool limited_ = false;
};

}  // namespace detail

inline SearchResult search_model(const std::vector<FormulaPtr>& fs,
                                 const std::set<Prop>& atoms,
                                 const OracleOptions& options = {}) {
  SearchBounds bounds = options.bounds ? *options.bounds : default_bounds(fs);
  if (bounds.max_loop < 1 || bounds.max_prefix < 0)
    throw Error("search bounds must allow a nonempty loop");
  detail::LassoSearch search(fs, atoms, options.budget_ms);
  SearchResult res = search.run(bounds);
  if (res.kind == SearchResult::Kind::ModelFound &&
      !holds_on_trace(*res.model, fs, 0))
    throw InternalError("search_model produced a trace that fails evaluation");
  return res;
}

// True iff every formula of the built goal set holds at position 0, i.e. the
// trace witnesses the premises (per mode) together with ~Q.
inline bool confirm_counterexample(const Trace& t, const VerificationGoal& g) {
  return holds_on_trace(t, build_goal(g), 0);
}

}  // namespace wftl

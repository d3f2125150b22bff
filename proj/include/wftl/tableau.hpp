#pragma once
// Graph-shaped tableau decision procedure for the <>/[] fragment.
//
// Inputs are normalized (NNF) and closed under subformulas plus the fixpoint
// expansions <>f -> f | X<>f and []f -> f & X[]f. States are saturated,
// locally consistent subsets of the closure; the successor of a state is any
// saturated extension of its X-obligations. State sets are built on the fly,
// one node per distinct obligation set, with saturation memoized per node.
//
// Elimination then runs to fixpoint: a state dies when its successor node
// has no living member, or when one of its eventualities <>f cannot reach a
// living state containing f. Satisfiable iff an initial state survives; a
// model is extracted as a lasso through living states and checked against
// the trace evaluator before it is returned.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <deque>
#include <optional>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wftl/errors.hpp"
#include "wftl/formula.hpp"
#include "wftl/normal_form.hpp"
#include "wftl/trace.hpp"

namespace wftl {

struct SolverOptions {
  std::size_t max_states = 2000000;
  std::int64_t budget_ms = 120000;
  int threads = 1;
};

struct TableauStats {
  std::size_t state_count = 0;
  std::size_t eliminated_count = 0;
  std::int64_t elapsed_ms = 0;
};

struct SatResult {
  enum class Kind { Sat, Unsat, ResourceLimit };
  Kind kind = Kind::Unsat;
  std::optional<Trace> model;
  TableauStats stats;
};

namespace detail {

using Bits = std::vector<std::uint64_t>;

struct BitsHash {
  std::size_t operator()(const Bits& b) const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (auto w : b) h = (h ^ w) * 1099511628211ull;
    return h;
  }
};

class TableauEngine {
public:
  TableauEngine(const std::vector<FormulaPtr>& fs, const SolverOptions& opts)
      : opts_(opts), start_(std::chrono::steady_clock::now()) {
    std::vector<FormulaPtr> goals;
    FormulaSet seen;
    for (const auto& f : fs) {
      auto g = nnf(f);
      if (seen.insert(g).second) goals.push_back(g);
    }
    build_closure(goals);
    goal_bits_ = empty_bits();
    for (const auto& g : goals) set_bit(goal_bits_, index_.at(g));
  }

  SatResult run() {
    SatResult res;
    int root = intern_node(goal_bits_);
    while (expand_cursor_ < nodes_.size()) {
      if (limited_) break;
      expand_node(static_cast<int>(expand_cursor_++));
    }
    if (limited_) {
      res.kind = SatResult::Kind::ResourceLimit;
      finish_stats(res);
      return res;
    }

    eliminate();
    finish_stats(res);

    int initial = first_alive_initial(root);
    if (initial < 0) {
      res.kind = SatResult::Kind::Unsat;
      return res;
    }
    res.kind = SatResult::Kind::Sat;
    res.model = extract_lasso(initial);
    return res;
  }

private:
  // ---------------------------------------------------------------- closure

  void build_closure(const std::vector<FormulaPtr>& goals) {
    closure_ = closure(goals);
    // canonical closure order: identifiers, and with them the whole state
    // construction, do not depend on premise input order
    std::sort(closure_.begin(), closure_.end(), FormulaLess{});
    for (std::size_t i = 0; i < closure_.size(); ++i)
      index_.emplace(closure_[i], static_cast<int>(i));
    int n = static_cast<int>(closure_.size());
    words_ = (n + 63) / 64;
    kind_.resize(n);
    left_.assign(n, -1);
    right_.assign(n, -1);
    next_self_.assign(n, -1);
    complement_.assign(n, -1);
    for (int i = 0; i < n; ++i) {
      const auto& f = closure_[i];
      kind_[i] = f->kind();
      if (f->left()) left_[i] = index_.at(f->left());
      if (f->right()) right_[i] = index_.at(f->right());
      if (f->kind() == Kind::Eventually || f->kind() == Kind::Always) {
        next_self_[i] = index_.at(next(f));
        ev_next_of_[next_self_[i]] = i;
      }
      if (f->kind() == Kind::Eventually) ev_ids_.push_back(i);
    }
    // literal complements, when both polarities occur in the closure
    for (int i = 0; i < n; ++i) {
      if (kind_[i] == Kind::Not) {
        complement_[i] = left_[i];
        complement_[left_[i]] = i;
      }
    }
  }

  Bits empty_bits() const { return Bits(words_, 0); }
  static void set_bit(Bits& b, int i) { b[i >> 6] |= 1ull << (i & 63); }
  static bool get_bit(const Bits& b, int i) {
    return (b[i >> 6] >> (i & 63)) & 1;
  }

  // ------------------------------------------------------------- saturation

  bool blocked(int id, const Bits& members) const {
    switch (kind_[id]) {
      case Kind::Atom:
      case Kind::Cond:
      case Kind::Not:
        return complement_[id] >= 0 && get_bit(members, complement_[id]);
      case Kind::And:
        return blocked(left_[id], members) || blocked(right_[id], members);
      case Kind::Or:
        return blocked(left_[id], members) && blocked(right_[id], members);
      case Kind::Always:
        return blocked(left_[id], members);
      case Kind::Eventually:
      case Kind::Next:
        return false;
      default:
        throw InternalError("tableau: non-NNF member");
    }
  }

  bool beta_satisfied(int id, const Bits& members) const {
    if (kind_[id] == Kind::Or)
      return get_bit(members, left_[id]) || get_bit(members, right_[id]);
    return get_bit(members, left_[id]) || get_bit(members, next_self_[id]);
  }

  std::pair<int, int> beta_alternatives(int id) const {
    if (kind_[id] == Kind::Or) return {left_[id], right_[id]};
    return {left_[id], next_self_[id]};  // fulfil now, or defer
  }

  // Add a formula and its deterministic consequences; disjunctive choices go
  // to the beta queue. Returns false on a literal clash.
  bool absorb(int id, Bits& members, std::vector<int>& betas) const {
    if (get_bit(members, id)) return true;
    switch (kind_[id]) {
      case Kind::Atom:
      case Kind::Cond:
      case Kind::Not:
        if (complement_[id] >= 0 && get_bit(members, complement_[id]))
          return false;
        set_bit(members, id);
        return true;
      case Kind::And:
        set_bit(members, id);
        return absorb(left_[id], members, betas) &&
               absorb(right_[id], members, betas);
      case Kind::Always:
        set_bit(members, id);
        return absorb(left_[id], members, betas) &&
               absorb(next_self_[id], members, betas);
      case Kind::Or:
      case Kind::Eventually:
        set_bit(members, id);
        betas.push_back(id);
        return true;
      case Kind::Next:
        set_bit(members, id);
        return true;
      default:
        throw InternalError("tableau: non-NNF member");
    }
  }

  void saturate_rec(Bits members, std::vector<int> betas,
                    std::vector<int>& out, std::unordered_set<int>& dedup) {
    if (limited_ || (limited_ = out_of_budget())) return;
    // unit sweeps to a fixpoint, branching only when nothing is forced
    while (true) {
      bool fired = false;
      for (std::size_t i = 0; i < betas.size(); ++i) {
        int id = betas[i];
        if (beta_satisfied(id, members)) {
          betas.erase(betas.begin() + static_cast<std::ptrdiff_t>(i));
          fired = true;
          break;
        }
        auto [a, b] = beta_alternatives(id);
        bool ba = blocked(a, members), bb = blocked(b, members);
        if (ba && bb) return;  // clash on both alternatives
        if (ba || bb) {
          betas.erase(betas.begin() + static_cast<std::ptrdiff_t>(i));
          if (!absorb(ba ? b : a, members, betas)) return;
          fired = true;
          break;
        }
      }
      if (!fired) break;
    }

    if (betas.empty()) {
      int sid = intern_state(std::move(members));
      if (sid >= 0 && dedup.insert(sid).second) out.push_back(sid);
      return;
    }

    // branch on the lowest pending beta; deterministic order
    int pick = *std::min_element(betas.begin(), betas.end());
    std::vector<int> rest;
    rest.reserve(betas.size() - 1);
    for (int id : betas)
      if (id != pick) rest.push_back(id);
    auto [a, b] = beta_alternatives(pick);
    for (int alt : {a, b}) {
      Bits m = members;
      std::vector<int> bs = rest;
      if (absorb(alt, m, bs)) saturate_rec(std::move(m), std::move(bs), out, dedup);
      if (limited_) return;
    }
  }

  // ----------------------------------------------------------- construction

  struct State {
    Bits members;
    Bits next;
    int succ_node = -1;
    std::vector<int> containing_nodes;
  };

  struct Node {
    Bits oblig;
    std::vector<int> states;
    std::vector<int> preds;  // states whose successor node is this one
    int alive_count = 0;
  };

  int intern_state(Bits members) {
    auto it = state_index_.find(members);
    if (it != state_index_.end()) return it->second;
    if (states_.size() >= opts_.max_states || out_of_budget()) {
      limited_ = true;
      return -1;
    }
    State s;
    s.next = empty_bits();
    for (const auto& [next_id, inner] : ev_next_of_)
      if (get_bit(members, next_id)) set_bit(s.next, inner);
    s.members = std::move(members);
    int id = static_cast<int>(states_.size());
    state_index_.emplace(s.members, id);
    states_.push_back(std::move(s));
    return id;
  }

  int intern_node(const Bits& oblig) {
    auto it = node_index_.find(oblig);
    if (it != node_index_.end()) return it->second;
    int id = static_cast<int>(nodes_.size());
    node_index_.emplace(oblig, id);
    nodes_.push_back(Node{oblig, {}, {}, 0});
    return id;
  }

  void expand_node(int node_id) {
    std::vector<int> out;
    std::unordered_set<int> dedup;
    {
      Bits members = empty_bits();
      std::vector<int> betas;
      bool ok = true;
      const Bits oblig = nodes_[node_id].oblig;  // copy: nodes_ may grow
      for (int i = 0; i < static_cast<int>(closure_.size()) && ok; ++i)
        if (get_bit(oblig, i)) ok = absorb(i, members, betas);
      if (ok) saturate_rec(std::move(members), std::move(betas), out, dedup);
    }
    if (limited_) return;
    nodes_[node_id].states = out;
    nodes_[node_id].alive_count = static_cast<int>(out.size());
    for (int sid : out) {
      states_[sid].containing_nodes.push_back(node_id);
      if (states_[sid].succ_node < 0) {
        int succ = intern_node(states_[sid].next);
        states_[sid].succ_node = succ;
        nodes_[succ].preds.push_back(sid);
      }
    }
  }

  // ------------------------------------------------------------ elimination

  void kill(int sid) {
    if (!alive_[sid]) return;
    alive_[sid] = false;
    ++eliminated_;
    std::vector<int> work{sid};
    while (!work.empty()) {
      int s = work.back();
      work.pop_back();
      for (int node : states_[s].containing_nodes) {
        if (--nodes_[node].alive_count == 0) {
          for (int pred : nodes_[node].preds) {
            if (alive_[pred]) {
              alive_[pred] = false;
              ++eliminated_;
              work.push_back(pred);
            }
          }
        }
      }
    }
  }

  // Living states from which a living state containing `member` is reachable
  // in zero or more steps.
  std::vector<char> reachable_fulfilment(int member) const {
    std::vector<char> can(states_.size(), 0);
    std::deque<int> queue;
    for (std::size_t s = 0; s < states_.size(); ++s) {
      if (alive_[s] && get_bit(states_[s].members, member)) {
        can[s] = 1;
        queue.push_back(static_cast<int>(s));
      }
    }
    while (!queue.empty()) {
      int t = queue.front();
      queue.pop_front();
      for (int node : states_[t].containing_nodes)
        for (int u : nodes_[node].preds)
          if (alive_[u] && !can[u]) {
            can[u] = 1;
            queue.push_back(u);
          }
    }
    return can;
  }

  void eliminate() {
    alive_.assign(states_.size(), 1);
    eliminated_ = 0;
    for (std::size_t s = 0; s < states_.size(); ++s)
      if (nodes_[states_[s].succ_node].alive_count == 0)
        kill(static_cast<int>(s));

    while (true) {
      std::vector<std::vector<int>> kills(ev_ids_.size());
      auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t e = begin; e < end; ++e) {
          int ev = ev_ids_[e];
          auto can = reachable_fulfilment(left_[ev]);
          for (std::size_t s = 0; s < states_.size(); ++s)
            if (alive_[s] && get_bit(states_[s].members, ev) && !can[s])
              kills[e].push_back(static_cast<int>(s));
        }
      };
      int threads = std::max(1, opts_.threads);
      if (threads == 1 || ev_ids_.size() <= 1) {
        worker(0, ev_ids_.size());
      } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (ev_ids_.size() + threads - 1) / threads;
        for (std::size_t b = 0; b < ev_ids_.size(); b += chunk)
          pool.emplace_back(worker, b, std::min(b + chunk, ev_ids_.size()));
        for (auto& t : pool) t.join();
      }
      bool changed = false;
      for (const auto& ks : kills)
        for (int s : ks)
          if (alive_[s]) {
            kill(s);
            changed = true;
          }
      if (!changed) break;
    }
  }

  int first_alive_initial(int root) const {
    for (int s : nodes_[root].states)
      if (alive_[s]) return s;
    return -1;
  }

  // ------------------------------------------------------------- extraction

  std::vector<int> alive_successors(int sid) const {
    std::vector<int> out;
    for (int t : nodes_[states_[sid].succ_node].states)
      if (alive_[t]) out.push_back(t);
    return out;
  }

  // Shortest living path from `from` (exclusive) to a state containing
  // `member`; deterministic BFS. Returns the path states after `from`.
  std::vector<int> path_to_fulfilment(int from, int member) const {
    if (get_bit(states_[from].members, member)) return {};
    std::vector<int> parent(states_.size(), -2);
    std::deque<int> queue;
    for (int t : alive_successors(from)) {
      if (parent[t] != -2) continue;
      parent[t] = -1;
      queue.push_back(t);
    }
    while (!queue.empty()) {
      int t = queue.front();
      queue.pop_front();
      if (get_bit(states_[t].members, member)) {
        std::vector<int> path{t};
        while (parent[t] >= 0) {
          t = parent[t];
          path.push_back(t);
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      for (int u : alive_successors(t)) {
        if (parent[u] != -2) continue;
        parent[u] = t;
        queue.push_back(u);
      }
    }
    throw InternalError("tableau: unfulfillable eventuality survived elimination");
  }

  Trace extract_lasso(int initial) {
    std::vector<int> path{initial};
    std::unordered_map<int, std::size_t> round_end;  // state -> path index
    int cur = initial;

    for (std::size_t round = 0; round <= states_.size() + 1; ++round) {
      for (int ev : ev_ids_) {
        if (!get_bit(states_[cur].members, ev)) continue;
        if (get_bit(states_[cur].members, left_[ev])) continue;  // fulfilled now
        auto hop = path_to_fulfilment(cur, left_[ev]);
        for (int t : hop) path.push_back(t);
        if (!hop.empty()) cur = hop.back();
      }
      // guarantee progress so a repeated round-end state yields a real loop
      auto succs = alive_successors(cur);
      if (succs.empty())
        throw InternalError("tableau: dead end survived elimination");
      cur = succs.front();
      path.push_back(cur);

      auto it = round_end.find(cur);
      if (it != round_end.end()) {
        std::size_t i1 = it->second, i2 = path.size() - 1;
        Trace t;
        for (std::size_t i = 0; i <= i1; ++i)
          t.prefix.push_back(state_props(path[i]));
        for (std::size_t i = i1 + 1; i <= i2; ++i)
          t.loop.push_back(state_props(path[i]));
        return normalize_trace(std::move(t));
      }
      round_end.emplace(cur, path.size() - 1);
    }
    throw InternalError("tableau: lasso extraction did not close");
  }

  TraceState state_props(int sid) const {
    TraceState out;
    for (int i = 0; i < static_cast<int>(closure_.size()); ++i) {
      if (!get_bit(states_[sid].members, i)) continue;
      if (kind_[i] == Kind::Atom) out.insert(Prop{closure_[i]->name(), false});
      if (kind_[i] == Kind::Cond) out.insert(Prop{closure_[i]->name(), true});
    }
    return out;
  }

  // ---------------------------------------------------------------- helpers

  bool out_of_budget() {
    if ((++budget_probe_ & 1023) != 0) return false;
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start_)
                       .count();
    return elapsed > opts_.budget_ms;
  }

  void finish_stats(SatResult& res) {
    res.stats.state_count = states_.size();
    res.stats.eliminated_count = eliminated_;
    res.stats.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - start_)
                               .count();
  }

  SolverOptions opts_;
  std::chrono::steady_clock::time_point start_;

  std::vector<FormulaPtr> closure_;
  std::unordered_map<FormulaPtr, int, FormulaHash, FormulaEq> index_;
  std::vector<Kind> kind_;
  std::vector<int> left_, right_, next_self_, complement_;
  std::unordered_map<int, int> ev_next_of_;  // Next(<>f or []f) -> that formula
  std::vector<int> ev_ids_;
  int words_ = 1;
  Bits goal_bits_;

  std::vector<State> states_;
  std::unordered_map<Bits, int, BitsHash> state_index_;
  std::vector<Node> nodes_;
  std::unordered_map<Bits, int, BitsHash> node_index_;
  std::size_t expand_cursor_ = 0;

  std::vector<char> alive_;
  std::size_t eliminated_ = 0;
  bool limited_ = false;
  std::uint64_t budget_probe_ = 0;
};

}  // namespace detail

// Satisfiability of a finite Next-free formula set under the reflexive
// discrete-linear-time semantics. On Sat the returned trace has been checked
// against the trace evaluator; an unconfirmed trace is an internal error.
inline SatResult decide_satisfiable(const std::vector<FormulaPtr>& fs,
                                    const SolverOptions& options = {}) {
  for (const auto& f : fs)
    if (contains_next(f))
      throw Error("decide_satisfiable: inputs must be Next-free");
  detail::TableauEngine engine(fs, options);
  SatResult res = engine.run();
  if (res.kind == SatResult::Kind::Sat) {
    if (!res.model) throw InternalError("tableau: Sat without a model");
    if (!holds_on_trace(*res.model, fs, 0))
      throw InternalError("tableau: extracted trace fails evaluation");
  }
  return res;
}

}  // namespace wftl

#pragma once
// Temporal formula AST.
//
// Nodes are immutable and shared through FormulaPtr; a structural hash is
// computed once at construction so formula sets can be deduplicated cheaply.
// The Next kind is internal to the decision procedure: it never appears in
// parsed input or printed output.

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_set>
#include <utility>

#include "wftl/errors.hpp"

namespace wftl {

enum class Kind : std::uint8_t {
  Atom,        // activity proposition
  Cond,        // condition proposition c(subject)
  Not,
  And,
  Or,
  Implies,
  Eventually,  // <>
  Always,      // []
  Next,        // internal-only one-step operator
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

inline bool is_valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  auto head = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  };
  auto tail = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
  if (!head(s[0])) return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!tail(s[i])) return false;
  return true;
}

class Formula {
public:
  Kind kind() const { return kind_; }
  // Atom name or condition subject; empty for connectives.
  const std::string& name() const { return name_; }
  const FormulaPtr& left() const { return left_; }
  const FormulaPtr& right() const { return right_; }
  std::size_t hash() const { return hash_; }

  bool is_literal() const {
    if (kind_ == Kind::Atom || kind_ == Kind::Cond) return true;
    return kind_ == Kind::Not && (left_->kind() == Kind::Atom ||
                                  left_->kind() == Kind::Cond);
  }

  static FormulaPtr make(Kind k, std::string name, FormulaPtr l, FormulaPtr r) {
    return std::shared_ptr<const Formula>(
        new Formula(k, std::move(name), std::move(l), std::move(r)));
  }

private:
  Formula(Kind k, std::string name, FormulaPtr l, FormulaPtr r)
      : kind_(k), name_(std::move(name)), left_(std::move(l)),
        right_(std::move(r)) {
    hash_ = static_cast<std::size_t>(kind_) * 0x9e3779b97f4a7c15ull;
    for (char c : name_)
      hash_ = hash_ * 1099511628211ull + static_cast<unsigned char>(c);
    auto mix = [&](const FormulaPtr& f) {
      if (f) hash_ ^= f->hash() + 0x9e3779b97f4a7c15ull + (hash_ << 6) + (hash_ >> 2);
    };
    mix(left_);
    mix(right_);
  }

  Kind kind_;
  std::string name_;
  FormulaPtr left_;
  FormulaPtr right_;
  std::size_t hash_;
};

inline FormulaPtr atom(std::string name) {
  if (!is_valid_identifier(name))
    throw Error("invalid atom name '" + name + "'");
  return Formula::make(Kind::Atom, std::move(name), nullptr, nullptr);
}

// c(subject); the subject is an activity atom, never another condition.
inline FormulaPtr cond(std::string subject) {
  if (!is_valid_identifier(subject))
    throw Error("invalid condition subject '" + subject + "'");
  return Formula::make(Kind::Cond, std::move(subject), nullptr, nullptr);
}

inline FormulaPtr neg(FormulaPtr f) {
  return Formula::make(Kind::Not, "", std::move(f), nullptr);
}
inline FormulaPtr conj(FormulaPtr l, FormulaPtr r) {
  return Formula::make(Kind::And, "", std::move(l), std::move(r));
}
inline FormulaPtr disj(FormulaPtr l, FormulaPtr r) {
  return Formula::make(Kind::Or, "", std::move(l), std::move(r));
}
inline FormulaPtr implies(FormulaPtr l, FormulaPtr r) {
  return Formula::make(Kind::Implies, "", std::move(l), std::move(r));
}
inline FormulaPtr eventually(FormulaPtr f) {
  return Formula::make(Kind::Eventually, "", std::move(f), nullptr);
}
inline FormulaPtr always(FormulaPtr f) {
  return Formula::make(Kind::Always, "", std::move(f), nullptr);
}
inline FormulaPtr next(FormulaPtr f) {
  return Formula::make(Kind::Next, "", std::move(f), nullptr);
}

inline bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->hash() != b->hash() || a->kind() != b->kind()) return false;
  if (a->name() != b->name()) return false;
  return equal(a->left(), b->left()) && equal(a->right(), b->right());
}

// Total order used wherever a deterministic formula ordering is needed.
inline int compare(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return 0;
  if (!a) return b ? -1 : 0;
  if (!b) return 1;
  if (a->kind() != b->kind())
    return a->kind() < b->kind() ? -1 : 1;
  if (int c = a->name().compare(b->name())) return c < 0 ? -1 : 1;
  if (int c = compare(a->left(), b->left())) return c;
  return compare(a->right(), b->right());
}

struct FormulaHash {
  std::size_t operator()(const FormulaPtr& f) const { return f ? f->hash() : 0; }
};
struct FormulaEq {
  bool operator()(const FormulaPtr& a, const FormulaPtr& b) const {
    return equal(a, b);
  }
};
struct FormulaLess {
  bool operator()(const FormulaPtr& a, const FormulaPtr& b) const {
    return compare(a, b) < 0;
  }
};

using FormulaSet = std::unordered_set<FormulaPtr, FormulaHash, FormulaEq>;

inline bool contains_next(const FormulaPtr& f) {
  if (!f) return false;
  if (f->kind() == Kind::Next) return true;
  return contains_next(f->left()) || contains_next(f->right());
}

// Visit every atom and condition occurrence; fn(name, is_cond).
template <typename Fn>
void for_each_prop(const FormulaPtr& f, Fn&& fn) {
  if (!f) return;
  if (f->kind() == Kind::Atom) {
    fn(f->name(), false);
    return;
  }
  if (f->kind() == Kind::Cond) {
    fn(f->name(), true);
    return;
  }
  for_each_prop(f->left(), fn);
  for_each_prop(f->right(), fn);
}

}  // namespace wftl

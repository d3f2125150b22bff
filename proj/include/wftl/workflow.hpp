#pragma once
// Workflow logical expressions and model files.
//
// A workflow expression applies a pattern to arguments which are either
// activity atoms or nested pattern applications, e.g.
//
//   Seq(a, Branch(b, Concur(Seq(c, d), Seq(e, f), g, h), i, j))
//
// A model file names atoms (`atom a = "Application"`), labels workflows
// (`workflow UC2: <expression>`) and may share atoms between workflows;
// within one expression every atom occurs exactly once.

#include <cctype>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wftl/errors.hpp"
#include "wftl/pattern.hpp"

namespace wftl {

struct WorkflowExpr {
  struct Arg {
    std::string atom;                    // leaf activity, when sub is empty
    std::shared_ptr<WorkflowExpr> sub;   // nested pattern application
    bool is_atom() const { return sub == nullptr; }
  };

  std::string pattern;  // canonical pattern name (aliases resolved)
  std::vector<Arg> args;
};

// The joined entry formula: recurse through first arguments until an atom.
inline const std::string& joined_entry(const WorkflowExpr& w) {
  const WorkflowExpr::Arg& first = w.args.front();
  return first.is_atom() ? first.atom : joined_entry(*first.sub);
}

// The joined exit formula: symmetric, through last arguments.
inline const std::string& joined_exit(const WorkflowExpr& w) {
  const WorkflowExpr::Arg& last = w.args.back();
  return last.is_atom() ? last.atom : joined_exit(*last.sub);
}

inline void collect_workflow_atoms(const WorkflowExpr& w,
                                   std::vector<std::string>& out) {
  for (const auto& arg : w.args) {
    if (arg.is_atom())
      out.push_back(arg.atom);
    else
      collect_workflow_atoms(*arg.sub, out);
  }
}

inline std::string print_workflow_expr(const WorkflowExpr& w) {
  std::string out = w.pattern + "(";
  for (std::size_t i = 0; i < w.args.size(); ++i) {
    if (i) out += ", ";
    out += w.args[i].is_atom() ? w.args[i].atom : print_workflow_expr(*w.args[i].sub);
  }
  out += ")";
  return out;
}

namespace detail {

class WorkflowParser {
public:
  WorkflowParser(std::string_view text, const PatternSet& patterns)
      : text_(text), patterns_(patterns) {}

  WorkflowExpr parse() {
    WorkflowExpr w = application();
    skip_ws();
    if (i_ < text_.size())
      throw SyntaxError("unexpected trailing input in workflow expression", i_);
    std::set<std::string> seen;
    std::vector<std::string> atoms;
    collect_workflow_atoms(w, atoms);
    for (const auto& a : atoms)
      if (!seen.insert(a).second)
        throw DuplicateAtomError("atom '" + a +
                                 "' occurs more than once in one expression");
    return w;
  }

private:
  void skip_ws() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
  }

  std::string ident() {
    skip_ws();
    std::size_t start = i_;
    while (i_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[i_])) || text_[i_] == '_'))
      ++i_;
    if (i_ == start)
      throw SyntaxError("expected an identifier", start);
    return std::string(text_.substr(start, i_ - start));
  }

  bool peek(char c) {
    skip_ws();
    return i_ < text_.size() && text_[i_] == c;
  }

  void expect(char c) {
    if (!peek(c))
      throw SyntaxError(std::string("expected '") + c + "'", i_);
    ++i_;
  }

  WorkflowExpr application() {
    std::size_t at = i_;
    std::string name = ident();
    if (!peek('('))
      throw SyntaxError("workflow expression must apply a pattern", at);
    if (!patterns_.has(name))
      throw UnknownPatternError("unknown pattern '" + name + "'");
    const PatternDefinition& def = patterns_.get(name);
    expect('(');
    WorkflowExpr w;
    w.pattern = patterns_.resolve(name);
    while (true) {
      w.args.push_back(argument());
      if (peek(',')) {
        ++i_;
        continue;
      }
      break;
    }
    expect(')');
    if (w.args.size() != def.arity())
      throw ArityMismatchError(def.name, def.arity(), w.args.size());
    return w;
  }

  WorkflowExpr::Arg argument() {
    std::size_t save = i_;
    std::string name = ident();
    if (peek('(')) {
      i_ = save;
      WorkflowExpr::Arg arg;
      arg.sub = std::make_shared<WorkflowExpr>(application());
      return arg;
    }
    WorkflowExpr::Arg arg;
    arg.atom = std::move(name);
    return arg;
  }

  std::string_view text_;
  const PatternSet& patterns_;
  std::size_t i_ = 0;
};

}  // namespace detail

inline WorkflowExpr parse_workflow_expr(std::string_view text,
                                        const PatternSet& patterns) {
  return detail::WorkflowParser(text, patterns).parse();
}

struct ModelFile {
  std::map<std::string, std::string> atom_aliases;  // atom id -> display name
  std::vector<std::pair<std::string, WorkflowExpr>> workflows;  // label, expr

  std::string display_name(const std::string& atom_id) const {
    auto it = atom_aliases.find(atom_id);
    return it == atom_aliases.end() ? atom_id : it->second;
  }
};

namespace detail {

// Strip a '#' comment, ignoring '#' inside a quoted display name.
inline std::string strip_model_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

inline int paren_balance(const std::string& s) {
  int n = 0;
  for (char c : s) {
    if (c == '(') ++n;
    if (c == ')') --n;
  }
  return n;
}

}  // namespace detail

inline ModelFile parse_model_file(const std::string& text,
                                  const PatternSet& patterns) {
  ModelFile model;
  std::set<std::string> labels;
  auto lines = detail::split_lines(text);

  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string line = detail::trim(detail::strip_model_comment(lines[ln]));
    if (line.empty()) continue;
    int line_no = static_cast<int>(ln + 1);
    auto fail = [&](const std::string& msg) {
      throw SyntaxError(msg + " (line " + std::to_string(line_no) + ")", ln);
    };

    if (line.rfind("atom ", 0) == 0) {
      auto eq = line.find('=');
      if (eq == std::string::npos) fail("malformed atom line, expected '='");
      std::string id = detail::trim(line.substr(5, eq - 5));
      std::string rest = detail::trim(line.substr(eq + 1));
      if (!is_valid_identifier(id)) fail("malformed atom identifier");
      if (rest.size() < 2 || rest.front() != '"' || rest.back() != '"')
        fail("atom display name must be quoted");
      std::string display = rest.substr(1, rest.size() - 2);
      if (model.atom_aliases.count(id))
        throw DuplicateAliasError("duplicate atom alias '" + id + "' (line " +
                                  std::to_string(line_no) + ")");
      model.atom_aliases.emplace(id, display);
      continue;
    }

    if (line.rfind("workflow ", 0) == 0) {
      auto colon = line.find(':');
      if (colon == std::string::npos) fail("malformed workflow line, expected ':'");
      std::string label = detail::trim(line.substr(9, colon - 9));
      if (!is_valid_identifier(label)) fail("malformed workflow label");
      if (!labels.insert(label).second)
        throw DuplicateLabelError("duplicate workflow label '" + label +
                                  "' (line " + std::to_string(line_no) + ")");
      std::string expr = line.substr(colon + 1);
      // The expression may wrap lines until its parentheses close.
      while (detail::paren_balance(expr) > 0 && ln + 1 < lines.size()) {
        ++ln;
        expr += ' ';
        expr += detail::strip_model_comment(lines[ln]);
      }
      if (detail::paren_balance(expr) != 0) fail("unbalanced workflow expression");
      try {
        model.workflows.emplace_back(label, parse_workflow_expr(expr, patterns));
      } catch (const SyntaxError& e) {
        throw SyntaxError(std::string(e.what()) + " (workflow '" + label + "', line " +
                          std::to_string(line_no) + ")", ln);
      }
      continue;
    }

    fail("unrecognized line");
  }

  if (model.workflows.empty())
    throw EmptyModelError("model file declares no workflows");
  return model;
}

inline std::vector<Diagnostic> validate_model(const ModelFile& model) {
  std::vector<Diagnostic> out;
  for (const auto& [label, expr] : model.workflows) {
    std::vector<std::string> atoms;
    collect_workflow_atoms(expr, atoms);
    std::set<std::string> seen;
    for (const auto& a : atoms) {
      if (!seen.insert(a).second)
        out.push_back({Diagnostic::Severity::Error, "DuplicateAtom",
                       "workflow '" + label + "': atom '" + a +
                           "' occurs more than once"});
      if (!model.atom_aliases.count(a))
        out.push_back({Diagnostic::Severity::Warning, "UnaliasedAtom",
                       "workflow '" + label + "': atom '" + a +
                           "' has no display alias"});
    }
  }
  return out;
}

}  // namespace wftl

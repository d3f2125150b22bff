#pragma once
// The predefined pattern set: parsing of `.pat` files, lint diagnostics, and
// template instantiation.
//
// File format, line based:
//   /* block comments */ and # line comments
//   Name(p1,...,pn):            header; first param is the entry, last the exit
//   f1 => <>f4 / ~f1 => ~<>f4   formula lines, '/' separates formulas
//   alias Seq = Sequence        user alias directive
//
// The aliases Seq, Concur, Branch and Loop are built in whenever the four
// standard patterns are present.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "wftl/errors.hpp"
#include "wftl/formula.hpp"
#include "wftl/parse.hpp"
#include "wftl/print.hpp"
#include "wftl/substitute.hpp"

namespace wftl {

struct PatternDefinition {
  std::string name;
  std::vector<std::string> params;   // ordered; entry first, exit last
  std::vector<FormulaPtr> templates; // file order

  std::size_t arity() const { return params.size(); }
  const std::string& entry_param() const { return params.front(); }
  const std::string& exit_param() const { return params.back(); }
};

class PatternSet {
public:
  void add(PatternDefinition def) {
    if (patterns_.count(def.name) || aliases_.count(def.name))
      throw DuplicatePatternError("duplicate pattern '" + def.name + "'");
    order_.push_back(def.name);
    patterns_.emplace(def.name, std::move(def));
  }

  void add_alias(const std::string& alias, const std::string& target) {
    auto resolved = patterns_.find(resolve(target));
    if (resolved == patterns_.end())
      throw UnknownPatternError("alias target '" + target + "' is not a pattern");
    if (patterns_.count(alias))
      throw DuplicatePatternError("alias '" + alias + "' clashes with a pattern");
    auto it = aliases_.find(alias);
    if (it != aliases_.end()) {
      if (it->second == resolved->first) return;  // idempotent re-declaration
      throw DuplicateAliasError("alias '" + alias + "' already defined");
    }
    aliases_.emplace(alias, resolved->first);
  }

  bool has(const std::string& name_or_alias) const {
    return patterns_.count(name_or_alias) || aliases_.count(name_or_alias);
  }

  // Canonical pattern name for a name or alias.
  const std::string& resolve(const std::string& name_or_alias) const {
    auto a = aliases_.find(name_or_alias);
    if (a != aliases_.end()) return a->second;
    auto p = patterns_.find(name_or_alias);
    if (p != patterns_.end()) return p->first;
    throw UnknownPatternError("unknown pattern '" + name_or_alias + "'");
  }

  const PatternDefinition& get(const std::string& name_or_alias) const {
    return patterns_.at(resolve(name_or_alias));
  }

  const std::vector<std::string>& names() const { return order_; }
  const std::map<std::string, std::string>& aliases() const { return aliases_; }

private:
  std::map<std::string, PatternDefinition> patterns_;
  std::map<std::string, std::string> aliases_;
  std::vector<std::string> order_;  // file order of definitions
};

namespace detail {

// Strip /* ... */ comments, keeping newlines so line numbers survive.
inline std::string strip_block_comments(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool in_comment = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!in_comment && text[i] == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      in_comment = true;
      ++i;
      continue;
    }
    if (in_comment && text[i] == '*' && i + 1 < text.size() && text[i + 1] == '/') {
      in_comment = false;
      ++i;
      continue;
    }
    if (!in_comment)
      out += text[i];
    else if (text[i] == '\n')
      out += '\n';
  }
  if (in_comment) throw SyntaxError("unterminated /* comment", text.size());
  return out;
}

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  lines.push_back(cur);
  return lines;
}

inline std::string strip_line_comment(const std::string& line) {
  auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

}  // namespace detail

inline PatternSet parse_pattern_set(const std::string& text) {
  PatternSet set;
  PatternDefinition current;
  bool have_current = false;
  std::vector<std::pair<std::string, std::string>> alias_directives;

  auto finalize = [&](int line_no) {
    if (!have_current) return;
    if (current.templates.empty())
      throw EmptyPatternError("pattern '" + current.name +
                              "' has no formulas (line " +
                              std::to_string(line_no) + ")");
    std::set<std::string> declared(current.params.begin(), current.params.end());
    for (const auto& t : current.templates) {
      for_each_prop(t, [&](const std::string& name, bool) {
        if (!declared.count(name))
          throw UndeclaredParamError("pattern '" + current.name +
                                     "' uses undeclared atom '" + name + "'");
      });
    }
    set.add(std::move(current));
    current = PatternDefinition{};
    have_current = false;
  };

  auto lines = detail::split_lines(detail::strip_block_comments(text));
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string line = detail::trim(detail::strip_line_comment(lines[ln]));
    if (line.empty()) continue;
    int line_no = static_cast<int>(ln + 1);

    auto eq = line.find('=');
    bool directive_shape = line.rfind("alias ", 0) == 0 &&
                           eq != std::string::npos &&
                           (eq + 1 >= line.size() || line[eq + 1] != '>');
    if (directive_shape) {
      std::string alias = detail::trim(line.substr(6, eq - 6));
      std::string target = detail::trim(line.substr(eq + 1));
      if (!is_valid_identifier(alias) || !is_valid_identifier(target))
        throw SyntaxError("malformed alias directive (line " +
                          std::to_string(line_no) + ")", ln);
      alias_directives.emplace_back(alias, target);
      continue;
    }

    if (line.back() == ':') {
      finalize(line_no);
      std::string head = detail::trim(line.substr(0, line.size() - 1));
      auto open = head.find('(');
      if (open == std::string::npos || head.back() != ')')
        throw SyntaxError("malformed pattern header (line " +
                          std::to_string(line_no) + ")", ln);
      current.name = detail::trim(head.substr(0, open));
      if (!is_valid_identifier(current.name))
        throw SyntaxError("malformed pattern name (line " +
                          std::to_string(line_no) + ")", ln);
      std::string params = head.substr(open + 1, head.size() - open - 2);
      std::size_t start = 0;
      std::set<std::string> seen;
      while (start <= params.size()) {
        auto comma = params.find(',', start);
        std::string p = detail::trim(
            comma == std::string::npos ? params.substr(start)
                                       : params.substr(start, comma - start));
        if (!is_valid_identifier(p))
          throw SyntaxError("malformed parameter list (line " +
                            std::to_string(line_no) + ")", ln);
        if (!seen.insert(p).second)
          throw SyntaxError("duplicate parameter '" + p + "' (line " +
                            std::to_string(line_no) + ")", ln);
        current.params.push_back(p);
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      if (current.params.size() < 2)
        throw SyntaxError("a pattern needs at least an entry and an exit "
                          "parameter (line " + std::to_string(line_no) + ")", ln);
      have_current = true;
      continue;
    }

    if (!have_current)
      throw SyntaxError("formula before any pattern header (line " +
                        std::to_string(line_no) + ")", ln);

    // '/' separates several formulas on one line, read left to right.
    std::size_t start = 0;
    while (start <= line.size()) {
      auto slash = line.find('/', start);
      std::string piece = detail::trim(
          slash == std::string::npos ? line.substr(start)
                                     : line.substr(start, slash - start));
      if (piece.empty())
        throw SyntaxError("empty formula (line " + std::to_string(line_no) + ")", ln);
      try {
        current.templates.push_back(parse_formula(piece));
      } catch (const SyntaxError& e) {
        throw SyntaxError(std::string(e.what()) + " (line " +
                          std::to_string(line_no) + ")", ln);
      }
      if (slash == std::string::npos) break;
      start = slash + 1;
    }
  }
  finalize(static_cast<int>(lines.size()));

  static const std::pair<const char*, const char*> kBuiltinAliases[] = {
      {"Seq", "Sequence"},
      {"Concur", "Concurrency"},
      {"Branch", "Branching"},
      {"Loop", "LoopWhile"},
  };
  for (const auto& [alias, target] : kBuiltinAliases)
    if (set.has(target) && !set.has(alias)) set.add_alias(alias, target);
  for (const auto& [alias, target] : alias_directives) set.add_alias(alias, target);

  return set;
}

inline std::string print_pattern_set(const PatternSet& set) {
  std::string out;
  for (const auto& name : set.names()) {
    const auto& def = set.get(name);
    out += def.name + "(";
    for (std::size_t i = 0; i < def.params.size(); ++i) {
      if (i) out += ',';
      out += def.params[i];
    }
    out += "):\n";
    for (const auto& t : def.templates) out += print_formula(t) + "\n";
  }
  for (const auto& [alias, target] : set.aliases()) {
    bool builtin = (alias == "Seq" && target == "Sequence") ||
                   (alias == "Concur" && target == "Concurrency") ||
                   (alias == "Branch" && target == "Branching") ||
                   (alias == "Loop" && target == "LoopWhile");
    if (!builtin) out += "alias " + alias + " = " + target + "\n";
  }
  return out;
}

// Mechanical lint; consistency of the formulas themselves is out of scope.
inline std::vector<Diagnostic> validate_pattern_set(const PatternSet& set) {
  std::vector<Diagnostic> out;
  for (const auto& name : set.names()) {
    const auto& def = set.get(name);
    std::set<std::string> used;
    std::set<std::string> conditioned;
    for (const auto& t : def.templates)
      for_each_prop(t, [&](const std::string& n, bool is_cond) {
        used.insert(n);
        if (is_cond) conditioned.insert(n);
      });
    for (const auto& p : def.params) {
      if (used.count(p)) continue;
      std::string code = p == def.entry_param() ? "UnusedEntry"
                         : p == def.exit_param() ? "UnusedExit"
                                                 : "UnusedParam";
      out.push_back({Diagnostic::Severity::Warning, code,
                     "pattern '" + def.name + "': parameter '" + p +
                         "' does not occur in any formula"});
    }
    for (const auto& boundary : {def.entry_param(), def.exit_param()})
      if (conditioned.count(boundary))
        out.push_back({Diagnostic::Severity::Warning, "CondOnBoundary",
                       "pattern '" + def.name + "': condition applied to "
                       "entry/exit parameter '" + boundary + "'"});
  }
  return out;
}

inline std::vector<FormulaPtr> instantiate_pattern(
    const PatternDefinition& def, const std::vector<FormulaPtr>& args) {
  if (args.size() != def.arity())
    throw ArityMismatchError(def.name, def.arity(), args.size());
  Binding binding;
  for (std::size_t i = 0; i < args.size(); ++i) binding[def.params[i]] = args[i];
  std::vector<FormulaPtr> out;
  out.reserve(def.templates.size());
  for (const auto& t : def.templates) out.push_back(substitute(t, binding));
  return out;
}

}  // namespace wftl

#pragma once
// Logical specification generation.
//
// The generator walks a workflow expression in pre-order (outermost pattern
// first, then arguments left to right) and instantiates each pattern
// occurrence once. An atomic argument passes through unchanged; a nested
// pattern argument r is replaced by the disjunction
// `joined_entry(r) | joined_exit(r)` in every template position.
//
// Specifications from several workflows are summed: concatenation in input
// order with structural deduplication, first provenance kept.

#include <set>
#include <string>
#include <vector>

#include "wftl/errors.hpp"
#include "wftl/formula.hpp"
#include "wftl/normal_form.hpp"
#include "wftl/parse.hpp"
#include "wftl/pattern.hpp"
#include "wftl/print.hpp"
#include "wftl/trace.hpp"
#include "wftl/workflow.hpp"

namespace wftl {

struct Provenance {
  std::string workflow;       // workflow label
  std::string pattern;        // canonical pattern name
  int occurrence = 0;         // pre-order index of the occurrence
  int template_index = 0;     // index within the pattern's template list

  std::string str() const {
    return workflow + "/" + pattern + "#" + std::to_string(occurrence) + "/" +
           std::to_string(template_index);
  }
};

struct SpecEntry {
  FormulaPtr formula;
  Provenance origin;
};

class LogicalSpecification {
public:
  // Returns false when a structurally equal formula is already present.
  bool add(FormulaPtr f, Provenance origin) {
    if (!seen_.insert(f).second) return false;
    for_each_prop(f, [&](const std::string& name, bool is_cond) {
      atom_universe_.insert(Prop{name, is_cond});
    });
    entries_.push_back({std::move(f), std::move(origin)});
    return true;
  }

  const std::vector<SpecEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::set<Prop>& atom_universe() const { return atom_universe_; }

  std::vector<FormulaPtr> formulas() const {
    std::vector<FormulaPtr> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.formula);
    return out;
  }

private:
  std::vector<SpecEntry> entries_;
  FormulaSet seen_;
  std::set<Prop> atom_universe_;
};

namespace detail {

inline void generate_walk(const WorkflowExpr& w, const PatternSet& patterns,
                          const std::string& label, int& occurrence,
                          LogicalSpecification& out) {
  const PatternDefinition& def = patterns.get(w.pattern);
  int occ = occurrence++;

  std::vector<FormulaPtr> args;
  args.reserve(w.args.size());
  for (const auto& arg : w.args) {
    if (arg.is_atom())
      args.push_back(atom(arg.atom));
    else
      args.push_back(disj(atom(joined_entry(*arg.sub)),
                          atom(joined_exit(*arg.sub))));
  }

  auto instantiated = instantiate_pattern(def, args);
  for (std::size_t i = 0; i < instantiated.size(); ++i)
    out.add(instantiated[i],
            Provenance{label, def.name, occ, static_cast<int>(i)});

  for (const auto& arg : w.args)
    if (!arg.is_atom()) generate_walk(*arg.sub, patterns, label, occurrence, out);
}

}  // namespace detail

inline LogicalSpecification generate_for_expr(const WorkflowExpr& w,
                                              const PatternSet& patterns,
                                              const std::string& label) {
  LogicalSpecification spec;
  int occurrence = 0;
  detail::generate_walk(w, patterns, label, occurrence, spec);
  return spec;
}

inline LogicalSpecification sum_specs(
    const std::vector<LogicalSpecification>& specs) {
  LogicalSpecification out;
  for (const auto& s : specs)
    for (const auto& e : s.entries()) out.add(e.formula, e.origin);
  return out;
}

// Sum of the per-workflow specifications of a whole model, in file order.
inline LogicalSpecification generate_for_model(const ModelFile& model,
                                               const PatternSet& patterns) {
  std::vector<LogicalSpecification> parts;
  parts.reserve(model.workflows.size());
  for (const auto& [label, expr] : model.workflows)
    parts.push_back(generate_for_expr(expr, patterns, label));
  return sum_specs(parts);
}

// One formula per line with a trailing provenance comment. The file
// re-parses to the same formula list.
inline std::string write_spec_file(const LogicalSpecification& spec) {
  std::string out;
  for (const auto& e : spec.entries())
    out += print_formula(e.formula) + "  # " + e.origin.str() + "\n";
  return out;
}

inline std::vector<FormulaPtr> read_spec_file(const std::string& text) {
  std::vector<FormulaPtr> out;
  auto lines = detail::split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string line = detail::trim(detail::strip_line_comment(lines[ln]));
    if (line.empty()) continue;
    try {
      out.push_back(parse_formula(line));
    } catch (const SyntaxError& e) {
      throw SyntaxError(std::string(e.what()) + " (line " +
                        std::to_string(ln + 1) + ")", ln);
    }
  }
  return out;
}

}  // namespace wftl

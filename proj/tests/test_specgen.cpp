#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "wftl/specgen.hpp"

using namespace wftl;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const PatternSet& standard_patterns() {
  static PatternSet set =
      parse_pattern_set(read_file(std::string(WFTL_DATA_DIR) + "/patterns.pat"));
  return set;
}

void require_formulas(const LogicalSpecification& spec,
                      const std::vector<std::string>& expect) {
  REQUIRE(spec.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    INFO("index " << i << ": got " << print_formula(spec.entries()[i].formula)
                  << ", want " << expect[i]);
    REQUIRE(equal(spec.entries()[i].formula, parse_formula(expect[i])));
  }
}

// The specification of Seq(a, Branch(b, Concur(Seq(c,d), Seq(e,f), g, h), i, j)),
// in generation order.
const std::vector<std::string>& uc2_expected() {
  static const std::vector<std::string> fs = {
      // outer Sequence(a, Branch(...)) with (b | j) joined
      "a => <>(b | j)",
      "~a => ~<>(b | j)",
      "[]~(a & (b | j))",
      // Branching(b, Concur(...), i, j) with (c | h) joined
      "b => (<>(c | h) & ~<>i) | (~<>(c | h) & <>i)",
      "~b => ~((<>(c | h) & ~<>i) | (~<>(c | h) & <>i))",
      "(c | h) | i => <>j",
      "~((c | h) | i) => ~<>j",
      "[]~(b & j)",
      "[]~((c | h) & i)",
      "[]~(b & ((c | h) | i))",
      "[]~(((c | h) | i) & j)",
      // Concurrency(Seq(c,d), Seq(e,f), g, h) with (c | d) and (e | f) joined
      "(c | d) => <>(e | f) & <>g",
      "~(c | d) => ~(<>(e | f) & <>g)",
      "(e | f) & g => <>h",
      "~((e | f) & g) => ~<>h",
      "[]~((c | d) & ((e | f) | g))",
      "[]~(((e | f) | g) & h)",
      "[]~((c | d) & h)",
      // inner Sequence(c, d)
      "c => <>d",
      "~c => ~<>d",
      "[]~(c & d)",
      // inner Sequence(e, f)
      "e => <>f",
      "~e => ~<>f",
      "[]~(e & f)",
  };
  return fs;
}

const std::vector<std::string>& uc3_expected() {
  static const std::vector<std::string> fs = {
      "(k | l) => <>d",
      "~(k | l) => ~<>d",
      "[]~((k | l) & d)",
      "k => <>l",
      "~k => ~<>l",
      "[]~(k & l)",
  };
  return fs;
}

}  // namespace

TEST_CASE("generate: all-atomic pattern occurrence") {
  const auto& P = standard_patterns();
  auto w = parse_workflow_expr("Concur(a,b,c,d)", P);
  auto spec = generate_for_expr(w, P, "W");
  require_formulas(spec, {
                             "a => <>b & <>c",
                             "~a => ~(<>b & <>c)",
                             "b & c => <>d",
                             "~(b & c) => ~<>d",
                             "[]~(a & (b | c))",
                             "[]~((b | c) & d)",
                             "[]~(a & d)",
                         });
}

TEST_CASE("generate: nested argument becomes entry|exit disjunction") {
  const auto& P = standard_patterns();
  auto w = parse_workflow_expr("Branch(Seq(a,b),c,d,e)", P);
  auto spec = generate_for_expr(w, P, "W");
  require_formulas(spec, {
                             "(a | b) => (<>c & ~<>d) | (~<>c & <>d)",
                             "~(a | b) => ~((<>c & ~<>d) | (~<>c & <>d))",
                             "c | d => <>e",
                             "~(c | d) => ~<>e",
                             "[]~((a | b) & e)",
                             "[]~(c & d)",
                             "[]~((a | b) & (c | d))",
                             "[]~((c | d) & e)",
                             "a => <>b",
                             "~a => ~<>b",
                             "[]~(a & b)",
                         });
}

TEST_CASE("generate: the two example workflows") {
  const auto& P = standard_patterns();

  auto w3 = parse_workflow_expr("Seq(Seq(k,l),d)", P);
  auto L3 = generate_for_expr(w3, P, "UC3");
  require_formulas(L3, uc3_expected());

  auto w2 = parse_workflow_expr(
      "Seq(a, Branch(b, Concur(Seq(c, d), Seq(e, f), g, h), i, j))", P);
  auto L2 = generate_for_expr(w2, P, "UC2");
  require_formulas(L2, uc2_expected());
}

TEST_CASE("generate: provenance records pattern occurrences in pre-order") {
  const auto& P = standard_patterns();
  auto w = parse_workflow_expr(
      "Seq(a, Branch(b, Concur(Seq(c, d), Seq(e, f), g, h), i, j))", P);
  auto spec = generate_for_expr(w, P, "UC2");

  std::vector<std::pair<std::string, int>> order;
  for (const auto& e : spec.entries())
    if (order.empty() || order.back().second != e.origin.occurrence)
      order.emplace_back(e.origin.pattern, e.origin.occurrence);
  REQUIRE(order == std::vector<std::pair<std::string, int>>{
                       {"Sequence", 0},
                       {"Branching", 1},
                       {"Concurrency", 2},
                       {"Sequence", 3},
                       {"Sequence", 4},
                   });
}

TEST_CASE("generate: atoms of the expression cover the spec and vice versa") {
  const auto& P = standard_patterns();
  auto w = parse_workflow_expr(
      "Seq(a, Branch(b, Concur(Seq(c, d), Seq(e, f), g, h), i, j))", P);
  auto spec = generate_for_expr(w, P, "UC2");

  std::vector<std::string> watoms;
  collect_workflow_atoms(w, watoms);
  std::set<std::string> expr_atoms(watoms.begin(), watoms.end());

  std::set<std::string> universe_names;
  for (const auto& p : spec.atom_universe()) universe_names.insert(p.name);
  REQUIRE(universe_names == expr_atoms);

  // every atom of the expression appears in at least one generated formula
  for (const auto& a : expr_atoms) {
    bool found = false;
    for (const auto& e : spec.entries())
      for_each_prop(e.formula, [&](const std::string& n, bool) {
        if (n == a) found = true;
      });
    REQUIRE(found);
  }
}

TEST_CASE("sum: union with dedup, identity, idempotence") {
  const auto& P = standard_patterns();
  auto L2 = generate_for_expr(
      parse_workflow_expr(
          "Seq(a, Branch(b, Concur(Seq(c, d), Seq(e, f), g, h), i, j))", P),
      P, "UC2");
  auto L3 = generate_for_expr(parse_workflow_expr("Seq(Seq(k,l),d)", P), P, "UC3");

  auto sum = sum_specs({L2, L3});
  REQUIRE(sum.size() == 30);  // no syntactic overlap between the two sets

  auto twice = sum_specs({L3, L3});
  REQUIRE(twice.size() == L3.size());
  for (std::size_t i = 0; i < L3.size(); ++i) {
    REQUIRE(equal(twice.entries()[i].formula, L3.entries()[i].formula));
    REQUIRE(twice.entries()[i].origin.workflow == "UC3");
  }

  auto with_empty = sum_specs({LogicalSpecification{}, L3});
  REQUIRE(with_empty.size() == L3.size());
}

TEST_CASE("write: provenance comments and re-parse round trip") {
  const auto& P = standard_patterns();
  auto L3 = generate_for_expr(parse_workflow_expr("Seq(Seq(k,l),d)", P), P, "UC3");
  auto text = write_spec_file(L3);

  REQUIRE(text.substr(0, text.find('\n')) ==
          "(k | l) => <>d  # UC3/Sequence#0/0");

  auto back = read_spec_file(text);
  REQUIRE(back.size() == L3.size());
  for (std::size_t i = 0; i < back.size(); ++i)
    REQUIRE(equal(back[i], L3.entries()[i].formula));

  REQUIRE(write_spec_file(LogicalSpecification{}).empty());

  auto L2 = generate_for_expr(
      parse_workflow_expr(
          "Seq(a, Branch(b, Concur(Seq(c, d), Seq(e, f), g, h), i, j))", P),
      P, "UC2");
  auto back2 = read_spec_file(write_spec_file(L2));
  REQUIRE(back2.size() == 24);
  for (std::size_t i = 0; i < back2.size(); ++i)
    REQUIRE(equal(back2[i], L2.entries()[i].formula));
}

TEST_CASE("generate: deterministic output") {
  const auto& P = standard_patterns();
  auto w = parse_workflow_expr(
      "Seq(a, Branch(b, Concur(Seq(c, d), Seq(e, f), g, h), i, j))", P);
  auto a = write_spec_file(generate_for_expr(w, P, "UC2"));
  auto b = write_spec_file(generate_for_expr(w, P, "UC2"));
  REQUIRE(a == b);
}

TEST_CASE("generate: conditioned parameter rejects a nested argument") {
  auto P = parse_pattern_set(
      "Guarded(f1,f2,f4):\n"
      "f1 => <>f2 / f2 & c(f2) => <>f4 / []~(f1 & f4)\n"
      "Sequence(f1,f4):\n"
      "f1 => <>f4\n");
  auto w = parse_workflow_expr("Guarded(a, Sequence(x,y), z)", P);
  REQUIRE_THROWS_AS(generate_for_expr(w, P, "W"), CondSubstitutionError);
}

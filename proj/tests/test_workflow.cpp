#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "wftl/pattern.hpp"
#include "wftl/workflow.hpp"

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

ModelFile example_model() {
  return parse_model_file(
      read_file(std::string(WFTL_DATA_DIR) + "/car_insurance.wf"),
      standard_patterns());
}

}  // namespace

TEST_CASE("workflow expressions parse and resolve aliases") {
  auto w = parse_workflow_expr("Seq(Seq(k,l),d)", standard_patterns());
  REQUIRE(w.pattern == "Sequence");
  REQUIRE(w.args.size() == 2);
  REQUIRE_FALSE(w.args[0].is_atom());
  REQUIRE(w.args[0].sub->pattern == "Sequence");
  REQUIRE(w.args[1].is_atom());
  REQUIRE(w.args[1].atom == "d");
  REQUIRE(print_workflow_expr(w) == "Sequence(Sequence(k, l), d)");
}

TEST_CASE("workflow expressions reject structural mistakes") {
  REQUIRE_THROWS_AS(parse_workflow_expr("Seq(a,a)", standard_patterns()),
                    DuplicateAtomError);
  REQUIRE_THROWS_AS(parse_workflow_expr("Concur(a,b,c)", standard_patterns()),
                    ArityMismatchError);
  REQUIRE_THROWS_AS(parse_workflow_expr("Fork(a,b)", standard_patterns()),
                    UnknownPatternError);
  REQUIRE_THROWS_AS(parse_workflow_expr("Seq(a,b", standard_patterns()),
                    SyntaxError);
  REQUIRE_THROWS_AS(parse_workflow_expr("a", standard_patterns()), SyntaxError);
  REQUIRE_THROWS_AS(parse_workflow_expr("Seq(a, Seq(b, a))", standard_patterns()),
                    DuplicateAtomError);
}

TEST_CASE("joined entry and exit recurse through first/last arguments") {
  const auto& P = standard_patterns();

  auto w1 = parse_workflow_expr("Seq(a,b)", P);
  REQUIRE(joined_entry(w1) == "a");
  REQUIRE(joined_exit(w1) == "b");

  auto w2 = parse_workflow_expr("Branch(a,b,c,Seq(d,e))", P);
  REQUIRE(joined_entry(w2) == "a");
  REQUIRE(joined_exit(w2) == "e");

  auto w3 = parse_workflow_expr("Seq(Concur(Seq(a,b),c,d,e),f)", P);
  REQUIRE(joined_entry(w3) == "a");
  REQUIRE(joined_exit(w3) == "f");

  // definitional recursion: the joined point of the whole expression is the
  // joined point of its first/last argument whenever that argument nests
  auto w4 = parse_workflow_expr("Seq(Seq(k,l),d)", P);
  REQUIRE(joined_entry(w4) == joined_entry(*w4.args[0].sub));
  REQUIRE(joined_exit(w4) == "d");
}

TEST_CASE("workflow print/parse round trip") {
  const auto& P = standard_patterns();
  for (const char* text : {
           "Seq(a,b)",
           "Seq(a, Branch(b, Concur(Seq(c, d), Seq(e, f), g, h), i, j))",
           "Loop(a,b,c,d)",
       }) {
    auto w = parse_workflow_expr(text, P);
    auto again = parse_workflow_expr(print_workflow_expr(w), P);
    REQUIRE(print_workflow_expr(w) == print_workflow_expr(again));
  }
}

TEST_CASE("model file: the car insurance model") {
  auto model = example_model();
  REQUIRE(model.workflows.size() == 2);
  REQUIRE(model.atom_aliases.size() == 12);
  REQUIRE(model.workflows[0].first == "UC2");
  REQUIRE(model.workflows[1].first == "UC3");
  REQUIRE(model.display_name("g") == "RentVehicle");
  REQUIRE(model.display_name("unknown") == "unknown");

  std::vector<std::string> uc2_atoms;
  collect_workflow_atoms(model.workflows[0].second, uc2_atoms);
  REQUIRE(uc2_atoms == std::vector<std::string>{"a", "b", "c", "d", "e",
                                                "f", "g", "h", "i", "j"});

  // InitRepair is shared between the two workflows; that is legal.
  std::vector<std::string> uc3_atoms;
  collect_workflow_atoms(model.workflows[1].second, uc3_atoms);
  REQUIRE(uc3_atoms == std::vector<std::string>{"k", "l", "d"});

  REQUIRE(validate_model(model).empty());
}

TEST_CASE("model file: errors") {
  const auto& P = standard_patterns();
  REQUIRE_THROWS_AS(parse_model_file("", P), EmptyModelError);
  REQUIRE_THROWS_AS(parse_model_file("# only comments\n", P), EmptyModelError);
  REQUIRE_THROWS_AS(
      parse_model_file("workflow W: Seq(a,b)\nworkflow W: Seq(c,d)\n", P),
      DuplicateLabelError);
  REQUIRE_THROWS_AS(
      parse_model_file("atom a = \"X\"\natom a = \"Y\"\nworkflow W: Seq(a,b)\n", P),
      DuplicateAliasError);
  REQUIRE_THROWS_AS(parse_model_file("nonsense here\n", P), SyntaxError);
  REQUIRE_THROWS_AS(parse_model_file("workflow W: Seq(a,a)\n", P),
                    DuplicateAtomError);
}

TEST_CASE("model file: expressions may wrap lines, atoms may be shared") {
  const auto& P = standard_patterns();
  auto model = parse_model_file(
      "workflow A: Seq(a,\n"
      "  Branch(b, c, # trailing comment\n"
      "         d, e))\n"
      "workflow B: Seq(k, d)  # reuses d across workflows\n",
      P);
  REQUIRE(model.workflows.size() == 2);
  REQUIRE(joined_exit(model.workflows[0].second) == "e");

  auto diags = validate_model(model);
  // every atom lacks an alias here; warnings only
  REQUIRE_FALSE(diags.empty());
  for (const auto& d : diags) {
    REQUIRE(d.severity == Diagnostic::Severity::Warning);
    REQUIRE(d.code == "UnaliasedAtom");
  }
}

TEST_CASE("model file: alias coverage warning is per missing atom") {
  const auto& P = standard_patterns();
  auto model = parse_model_file(
      "atom a = \"Alpha\"\n"
      "workflow W: Seq(a, b)\n",
      P);
  auto diags = validate_model(model);
  REQUIRE(diags.size() == 1);
  REQUIRE(diags[0].code == "UnaliasedAtom");
  REQUIRE(diags[0].message.find("'b'") != std::string::npos);
}

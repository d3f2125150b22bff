#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"
#include "wftl/formula.hpp"
#include "wftl/normal_form.hpp"
#include "wftl/parse.hpp"
#include "wftl/print.hpp"
#include "wftl/substitute.hpp"
#include "wftl/trace.hpp"

using namespace wftl;

TEST_CASE("parse: pattern-file style formulas") {
  auto f1 = parse_formula("f1 => <>f4");
  REQUIRE(equal(f1, implies(atom("f1"), eventually(atom("f4")))));

  auto branch = parse_formula("f1 => (<>f2 & ~<>f3) | (~<>f2 & <>f3)");
  auto expect = implies(
      atom("f1"),
      disj(conj(eventually(atom("f2")), neg(eventually(atom("f3")))),
           conj(neg(eventually(atom("f2"))), eventually(atom("f3")))));
  REQUIRE(equal(branch, expect));

  REQUIRE(equal(parse_formula("p"), atom("p")));

  auto loop_line = parse_formula("f2 & c(f2) => <>f3 & ~<>f4");
  auto loop_expect =
      implies(conj(atom("f2"), cond("f2")),
              conj(eventually(atom("f3")), neg(eventually(atom("f4")))));
  REQUIRE(equal(loop_line, loop_expect));
}

TEST_CASE("parse: errors carry a position") {
  REQUIRE_THROWS_AS(parse_formula("(p & q"), SyntaxError);
  REQUIRE_THROWS_AS(parse_formula(""), SyntaxError);
  REQUIRE_THROWS_AS(parse_formula("   "), SyntaxError);
  REQUIRE_THROWS_AS(parse_formula("p & q)"), SyntaxError);
  REQUIRE_THROWS_AS(parse_formula("p # q"), SyntaxError);
  REQUIRE_THROWS_AS(parse_formula("c(p & q)"), SyntaxError);
  REQUIRE_THROWS_AS(parse_formula("c()"), SyntaxError);
  REQUIRE_THROWS_AS(parse_formula("p = q"), SyntaxError);
  REQUIRE_THROWS_AS(parse_formula("p q"), SyntaxError);

  try {
    parse_formula("(p & q");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    REQUIRE(e.position() == 0);
  }
}

TEST_CASE("parse: precedence is pinned") {
  REQUIRE(equal(parse_formula("f1 => <>f2 & <>f3"),
                parse_formula("f1 => ((<>f2) & (<>f3))")));
  // & over | over =>, prefix operators tightest, => right-associative
  REQUIRE(equal(parse_formula("a | b & c"), disj(atom("a"), conj(atom("b"), atom("c")))));
  REQUIRE(equal(parse_formula("a => b => c"),
                implies(atom("a"), implies(atom("b"), atom("c")))));
  REQUIRE(equal(parse_formula("~<>a & b"), conj(neg(eventually(atom("a"))), atom("b"))));
}

TEST_CASE("print: golden forms") {
  REQUIRE(print_formula(implies(atom("f1"), eventually(atom("f4")))) == "f1 => <>f4");
  REQUIRE(print_formula(always(neg(conj(atom("k"), atom("l"))))) == "[]~(k & l)");
  REQUIRE(print_formula(atom("p")) == "p");
  REQUIRE(print_formula(cond("f2")) == "c(f2)");
  REQUIRE(print_formula(implies(disj(atom("k"), atom("l")), eventually(atom("d")))) ==
          "(k | l) => <>d");
  REQUIRE_THROWS_AS(print_formula(next(atom("p"))), InternalError);
}

TEST_CASE("print/parse: round trip on random formulas") {
  std::mt19937 rng(20240117);
  for (int i = 0; i < 500; ++i) {
    auto f = testing::random_formula(rng, 3, 4);
    auto back = parse_formula(print_formula(f));
    INFO(print_formula(f));
    REQUIRE(equal(f, back));
  }
}

TEST_CASE("nnf: dualities and implication expansion") {
  REQUIRE(equal(nnf(neg(eventually(atom("p")))), always(neg(atom("p")))));
  REQUIRE(equal(nnf(neg(implies(atom("p"), atom("q")))),
                conj(atom("p"), neg(atom("q")))));
  REQUIRE(equal(nnf(neg(always(neg(conj(atom("a"), atom("b")))))),
                eventually(conj(atom("a"), atom("b")))));
}

TEST_CASE("nnf: semantically equivalent on random traces") {
  std::mt19937 rng(7);
  for (int i = 0; i < 300; ++i) {
    auto f = testing::random_formula(rng, 3, 6);
    auto g = nnf(f);
    auto t = testing::random_trace(rng, 3, 4, 3);
    std::size_t horizon = t.prefix.size() + t.loop.size();
    for (std::size_t pos = 0; pos < horizon; ++pos) {
      INFO(print_formula(f) << " vs " << print_formula(g) << " at " << pos
                            << " on " << trace_to_string(t));
      REQUIRE(holds_on_trace(t, f, pos) == holds_on_trace(t, g, pos));
    }
  }
}

namespace {

bool same_set(const std::vector<FormulaPtr>& a, const std::vector<FormulaPtr>& b) {
  if (a.size() != b.size()) return false;
  for (const auto& f : a) {
    bool found = false;
    for (const auto& g : b)
      if (equal(f, g)) { found = true; break; }
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("closure: fixpoint expansions") {
  auto c1 = closure({eventually(atom("p"))});
  REQUIRE(same_set(c1, {eventually(atom("p")), atom("p")
, next(eventually(atom("p")))}));

  auto c2 = closure({always(neg(atom("c")))});
  REQUIRE(same_set(c2, {always(neg(atom("c"))), neg(atom("c")), atom("c"),
                        next(always(neg(atom("c"))))}));

  auto c3 = closure({eventually(atom("p")), always(neg(atom("p")))});
  REQUIRE(same_set(c3, {eventually(atom("p")), atom("p"),
                        next(eventually(atom("p"))), always(neg(atom("p"))),
                        neg(atom("p")), next(always(neg(atom("p"))))}));
}

TEST_CASE("closure: monotone and idempotent") {
  std::mt19937 rng(99);
  for (int i = 0; i < 100; ++i) {
    std::vector<FormulaPtr> fs;
    for (int k = 0; k < 3; ++k)
      fs.push_back(nnf(testing::random_formula(rng, 3, 4)));
    auto c = closure(fs);
    auto cc = closure(c);
    REQUIRE(same_set(c, cc));
    for (const auto& f : fs) {
      bool found = false;
      for (const auto& g : c)
        if (equal(f, g)) { found = true; break; }
      REQUIRE(found);
    }
  }
}

TEST_CASE("substitute: simultaneous replacement") {
  Binding b;
  b["f1"] = atom("a");
  b["f4"] = disj(atom("b"), atom("j"));
  auto out = substitute(parse_formula("f1 => <>f4"), b);
  REQUIRE(equal(out, parse_formula("a => <>(b | j)")));

  REQUIRE(equal(substitute(atom("p"), {}), atom("p")));

  Binding swap;
  swap["x"] = atom("y");
  swap["y"] = atom("x");
  REQUIRE(equal(substitute(parse_formula("x & y"), swap), parse_formula("y & x")));

  Binding c;
  c["f2"] = disj(atom("c"), atom("h"));
  REQUIRE_THROWS_AS(substitute(parse_formula("f2 & c(f2)"), c),
                    CondSubstitutionError);
}

TEST_CASE("closure subformulas of the trivial closure example stay linear") {
  // size linear in input: a chain of operators yields one entry per node
  auto f = nnf(parse_formula("<> [] ~ (a & (b | c))"));
  auto c = closure({f});
  REQUIRE(c.size() <= 12);
}

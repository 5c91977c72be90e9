#include <catch2/catch_amalgamated.hpp>

#include "rvmon/parse.hpp"

using namespace rvmon;
using Catch::Matchers::ContainsSubstring;

namespace {

FRef parse_into(Workspace& ws, const std::string& text) {
  return parse_property(ws, text);
}

/* Parse in a throwaway workspace, return the surface rendering. */
std::string shown(const std::string& text) {
  Workspace ws;
  FRef f = parse_into(ws, text);
  return ws.formulas.show(f, kStyleSurface);
}

}  // namespace

TEST_CASE("declarations introduce sorted variables") {
  Workspace ws;
  parse_into(ws, "int x; rat p; x <= 1 && p <= 1");
  REQUIRE(ws.vars.var_count() == 2);
  CHECK(ws.vars.sort(*ws.vars.find("x")) == Sort::Int);
  CHECK(ws.vars.sort(*ws.vars.find("p")) == Sort::Rat);
}

TEST_CASE("declaration errors carry positions") {
  Workspace ws;
  CHECK_THROWS_MATCHES(parse_into(ws, "int x; int x; x = 1"), ParseError,
                       Catch::Matchers::MessageMatches(
                           ContainsSubstring("already declared")));
  Workspace ws2;
  CHECK_THROWS_MATCHES(
      parse_into(ws2, "int __la_x; __la_x = 1"), ParseError,
      Catch::Matchers::MessageMatches(ContainsSubstring("reserved")));
  Workspace ws3;
  CHECK_THROWS_MATCHES(
      parse_into(ws3, "int G; G = 1"), ParseError,
      Catch::Matchers::MessageMatches(ContainsSubstring("variable name")));
  Workspace ws4;
  CHECK_THROWS_AS(parse_into(ws4, "x = 1"), ParseError);  // nothing declared
  Workspace ws5;
  try {
    parse_into(ws5, "int x;\nx = ");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("undeclared variables are rejected where they occur") {
  Workspace ws;
  CHECK_THROWS_MATCHES(
      parse_into(ws, "int x; x <= y"), ParseError,
      Catch::Matchers::MessageMatches(ContainsSubstring("undeclared")));
}

TEST_CASE("operator precedence and associativity") {
  // && binds tighter than ||, unary tighter than U, -> weakest.
  CHECK(shown("int a; a = 1 && a = 2 || a = 3") ==
        shown("int a; (a = 1 && a = 2) || a = 3"));
  CHECK(shown("int a; a = 1 || a = 2 && a = 3") ==
        shown("int a; a = 1 || (a = 2 && a = 3)"));
  CHECK(shown("int a; G a = 1 && a = 2") ==
        shown("int a; (G a = 1) && a = 2"));
  CHECK(shown("int a; a = 1 U a = 2 U a = 3") ==
        shown("int a; a = 1 U (a = 2 U a = 3)"));
  CHECK(shown("int a; a = 1 -> a = 2 -> a = 3") ==
        shown("int a; a = 1 -> (a = 2 -> a = 3)"));
  CHECK(shown("int a; ! a = 1 && a = 2") ==
        shown("int a; (! a = 1) && a = 2"));
}

TEST_CASE("relations and congruences build canonical atoms") {
  Workspace ws;
  FRef f = parse_into(ws, "int x; x > 1");
  // over the integer sort x > 1 tightens to x >= 2
  CHECK(ws.formulas.show(f, kStyleSurface) == "x >= 2");
  CHECK(shown("int x; x >= 2") == "x >= 2");
  CHECK(shown("int x; 2 <= x") == "x >= 2");
  CHECK(shown("int x; x =_3 1") == "x =_3 1");
  CHECK(shown("int x; x !=_2 0") == "x !=_2 0");
  CHECK(shown("rat p; p <= 1.5") == "2*p <= 3");
  CHECK(shown("rat p; p >= 3/2") == "2*p >= 3");
}

TEST_CASE("trivial atoms fold to constants") {
  Workspace ws;
  CHECK(parse_into(ws, "int x; x = x") == ws.formulas.top());
  Workspace ws2;
  CHECK(parse_into(ws2, "int x; x < x") == ws2.formulas.bottom());
  Workspace ws3;
  CHECK(parse_into(ws3, "int x; 1 <= 2 && x = x") == ws3.formulas.top());
}

TEST_CASE("primes read ahead") {
  Workspace ws;
  FRef f = parse_into(ws, "int x; x' = 2");
  CHECK(ws.formulas.max_look(f) == 1);
  CHECK(ws.formulas.show(f, kStyleSurface) == "x' = 2");
  Workspace ws2;
  FRef g = parse_into(ws2, "int x; x'' <= x'");
  CHECK(ws2.formulas.max_look(g) == 2);
  CHECK(ws2.formulas.min_look(g) == 1);
}

TEST_CASE("arithmetic accepts scaling and exact division") {
  CHECK(shown("rat p; rat q; q >= (6/5)*p") == shown("rat p; rat q; 6*p <= 5*q"));
  CHECK(shown("rat p; p/2 <= 1") == "p <= 2");
  CHECK(shown("int x; 2*x + 1 - x <= 3") == "x <= 2");
  Workspace ws;
  CHECK_THROWS_MATCHES(
      parse_into(ws, "int x; x * x = 1"), ParseError,
      Catch::Matchers::MessageMatches(ContainsSubstring("nonlinear")));
  Workspace ws2;
  CHECK_THROWS_MATCHES(
      parse_into(ws2, "int x; 1 / x = 2"), ParseError,
      Catch::Matchers::MessageMatches(ContainsSubstring("division")));
  Workspace ws3;
  CHECK_THROWS_AS(parse_into(ws3, "int x; x / 0 = 1"), ParseError);
}

TEST_CASE("sort errors surface as parse errors") {
  Workspace ws;
  CHECK_THROWS_MATCHES(
      parse_into(ws, "int x; rat p; x <= p"), ParseError,
      Catch::Matchers::MessageMatches(ContainsSubstring("mixes")));
  Workspace ws2;
  CHECK_THROWS_MATCHES(
      parse_into(ws2, "rat p; p =_2 0"), ParseError,
      Catch::Matchers::MessageMatches(ContainsSubstring("rational")));
  Workspace ws3;
  CHECK_THROWS_AS(parse_into(ws3, "int x; x =_0 1"), ParseError);
}

TEST_CASE("negation produces literals in negation normal form") {
  Workspace ws;
  FRef f = parse_into(ws, "int x; !(x <= 1)");
  CHECK(ws.formulas.kind(f) == FK::NAtom);
  CHECK(ws.formulas.show(f, kStyleSurface) == "!(x <= 1)");

  CHECK(shown("int x; !!(x <= 1)") == "x <= 1");
  CHECK(shown("int x; !(G x <= 1)") == shown("int x; F !(x <= 1)"));
  CHECK(shown("int x; !(F x <= 1)") == shown("int x; G !(x <= 1)"));
  CHECK(shown("int x; !(X x <= 1)") == shown("int x; wX !(x <= 1)"));
  CHECK(shown("int x; !(wX x <= 1)") == shown("int x; X !(x <= 1)"));
  CHECK(shown("int x; !(x = 1 && x' = 2)") ==
        shown("int x; !(x = 1) || !(x' = 2)"));
  // not (a U b)  ==  G !b  ||  !b U (!a && !b)
  CHECK(shown("int x; !(x = 1 U x = 2)") ==
        "G !(x = 2) || !(x = 2) U (!(x = 1) && !(x = 2))");
  CHECK(shown("int x; x = 1 -> x' = 2") ==
        shown("int x; !(x = 1) || x' = 2"));
  CHECK(shown("int x; !(x = 1 -> x' = 2)") ==
        shown("int x; x = 1 && !(x' = 2)"));
  CHECK(shown("int x; !true && x = 1 || true") == "true");
}

TEST_CASE("strict adds a liveness requirement matching the read-ahead") {
  Workspace ws;
  FRef f = parse_into(ws, "int x; strict(x' = 2)");
  REQUIRE(ws.formulas.kind(f) == FK::And);
  const FNode& n = ws.formulas.at(f);
  REQUIRE(n.kids.size() == 2);
  bool saw_next = false;
  for (FRef k : n.kids)
    if (ws.formulas.kind(k) == FK::Xs &&
        ws.formulas.at(k).kids[0] == ws.formulas.top())
      saw_next = true;
  CHECK(saw_next);

  // depth follows the farthest read-ahead in the body
  CHECK(shown("int x; strict(x'' = 2)") ==
        shown("int x; x'' = 2 && X X true"));
  // a body reading only the evaluation instant needs nothing extra
  Workspace ws2;
  FRef g = parse_into(ws2, "int x; strict(x = 2)");
  CHECK(ws2.formulas.kind(g) == FK::Atom);
  // negation turns the liveness part into "the trace ends here"
  CHECK(shown("int x; !strict(x' = 2)") ==
        shown("int x; !(x' = 2) || wX false"));
  // temporal operators cannot appear under strict
  Workspace ws3;
  CHECK_THROWS_MATCHES(
      parse_into(ws3, "int x; strict(G x = 1)"), ParseError,
      Catch::Matchers::MessageMatches(ContainsSubstring("temporal-free")));
}

TEST_CASE("comments and whitespace are ignored") {
  CHECK(shown("int x; // introduce x\n  x <= 1 // done\n") == "x <= 1");
}

TEST_CASE("parenthesized formulas and atom sides disambiguate") {
  CHECK(shown("int x; (x <= 1)") == "x <= 1");
  CHECK(shown("int x; ((x) + 1 <= 2)") == "x <= 1");
  CHECK(shown("int x; (x <= 1) && (x >= 0)") ==
        shown("int x; x <= 1 && 0 <= x"));
  CHECK(shown("int x; G (x = 1 || x' = 2)") ==
        shown("int x; G ((x = 1) || (x' = 2))"));
}

TEST_CASE("trailing input is rejected") {
  Workspace ws;
  CHECK_THROWS_MATCHES(
      parse_into(ws, "int x; x = 1 x = 2"), ParseError,
      Catch::Matchers::MessageMatches(ContainsSubstring("end of input")));
}

TEST_CASE("surface rendering parses back to the same formula") {
  const std::string decls = "int t; rat p; int b;\n";
  const std::vector<std::string> props = {
      "G ((b = 2 || b <= 0) || (p' <= p + 3 && b' = 2))",
      "F (strict(b' = 2 && t <= 2 && p' >= (6/5)*p))",
      "F (strict(b' = 2 && t <= 2 && p' >= (6/5)*p)) || "
      "G ((b = 2 || b <= 0) || (p' <= p + 3 && b' = 2))",
      "G (p' > p U b = 2)",
      "(wX b = 1) U (t = 0 && F b = 2)",
      "G F (b =_2 1)",
      "!(t = 1 U b = 2) -> G (p >= 0)",
  };
  for (const std::string& prop : props) {
    Workspace ws;
    FRef f = parse_into(ws, decls + prop);
    std::string text = ws.formulas.show(f, kStyleSurface);
    Workspace ws2;
    FRef g = parse_into(ws2, decls + text);
    CHECK(ws2.formulas.show(g, kStyleSurface) == text);
  }
}

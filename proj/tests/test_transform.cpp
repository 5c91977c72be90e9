#include <catch2/catch_amalgamated.hpp>

#include "rvmon/parse.hpp"
#include "rvmon/transform.hpp"

using namespace rvmon;

namespace {

std::string banded(Workspace& ws, FRef f) {
  return ws.formulas.show(f, kStyleBanded);
}

}  // namespace

TEST_CASE("band transform leaves positive instant-window formulas alone") {
  Workspace ws;
  FRef f = parse_property(ws, "int x; G (x <= 1 || x = 0)");
  CHECK(to_lookback(ws, f) == f);
}

TEST_CASE("one-ahead reads move onto the previous/current band") {
  Workspace ws;
  FRef f = to_lookback(ws, parse_property(ws, "int x; x' = 2"));
  REQUIRE(ws.formulas.kind(f) == FK::Xw);
  CHECK(banded(ws, f) == "wX x_cur = 2");

  Workspace ws2;
  FRef g = to_lookback(ws2, parse_property(ws2, "int x; G (x' >= x)"));
  CHECK(banded(ws2, g) == "G wX x_pre <= x_cur");
}

TEST_CASE("strong negated literals take the strong next and flip positive") {
  Workspace ws;
  FRef f = to_lookback(ws, parse_property(ws, "int x; !(x' = 2)"));
  REQUIRE(ws.formulas.kind(f) == FK::Xs);
  CHECK(ws.formulas.kind(ws.formulas.at(f).kids[0]) == FK::Atom);
  CHECK(banded(ws, f) == "X x_cur != 2");

  // an instant-window negation folds to the complement atom directly
  Workspace ws2;
  FRef g = to_lookback(ws2, parse_property(ws2, "int x; !(x = 2)"));
  CHECK(ws2.formulas.kind(g) == FK::Atom);
  CHECK(banded(ws2, g) == "x_cur != 2");
}

TEST_CASE("band transform rejects two-ahead input") {
  Workspace ws;
  FRef f = parse_property(ws, "int x; x'' = 2");
  CHECK_THROWS_AS(to_lookback(ws, f), std::logic_error);
}

TEST_CASE("two-ahead reads route through a derived column") {
  Workspace ws;
  FRef f = lower_lookahead(ws, parse_property(ws, "int x; x'' = 2"));
  CHECK(ws.formulas.max_look(f) == 1);
  CHECK(ws.formulas.show(f, kStyleSurface) ==
        "__la_x_1' = 2 && wX __la_x_1 = x' || wX wX false");
  auto d = ws.vars.find("__la_x_1");
  REQUIRE(d.has_value());
  REQUIRE(ws.vars.derivation(*d).has_value());
  CHECK(ws.vars.derivation(*d)->source == *ws.vars.find("x"));
  CHECK(ws.vars.derivation(*d)->shift == 1);
}

TEST_CASE("negated two-ahead reads require the instants to exist") {
  Workspace ws;
  FRef f = lower_lookahead(ws, parse_property(ws, "int x; !(x'' = 2)"));
  CHECK(ws.formulas.max_look(f) == 1);
  // the weak link and the strong liveness chain merge under one strong next
  CHECK(ws.formulas.show(f, kStyleSurface) ==
        "!(__la_x_1' = 2) && X (__la_x_1 = x' && X true)");
}

TEST_CASE("each lowering pass peels one level") {
  Workspace ws;
  FRef f = lower_lookahead(ws, parse_property(ws, "int x; x''' <= 5"));
  CHECK(ws.formulas.max_look(f) == 1);
  auto d2 = ws.vars.find("__la_x_2");
  auto d1 = ws.vars.find("__la_x_1");
  REQUIRE(d2.has_value());
  REQUIRE(d1.has_value());
  CHECK(ws.vars.derivation(*d2)->shift == 2);
  CHECK(ws.vars.derivation(*d1)->shift == 1);
  std::set<AtomId> atoms;
  ws.formulas.collect_atoms(f, atoms);
  CHECK(atoms.size() == 3);  // main read plus one link per level
}

TEST_CASE("atoms spanning several variables link each one") {
  Workspace ws;
  FRef f = lower_lookahead(ws, parse_property(ws, "int x; int y; x'' >= y''"));
  CHECK(ws.formulas.max_look(f) == 1);
  std::string s = ws.formulas.show(f, kStyleSurface);
  CHECK(s.find("__la_x_1") != std::string::npos);
  CHECK(s.find("__la_y_1") != std::string::npos);
  std::set<AtomId> atoms;
  ws.formulas.collect_atoms(f, atoms);
  CHECK(atoms.size() == 3);  // the compare plus two links
}

TEST_CASE("mixed-level atoms only rewrite the farthest reads") {
  Workspace ws;
  FRef f = lower_lookahead(ws, parse_property(ws, "int x; x'' >= x"));
  CHECK(ws.formulas.max_look(f) == 1);
  std::string s = ws.formulas.show(f, kStyleSurface);
  CHECK(s.find("__la_x_1'") != std::string::npos);
}

TEST_CASE("lowering is the identity without deep reads") {
  Workspace ws;
  FRef f = parse_property(ws, "int x; G (x' >= x) && F (x = 2)");
  CHECK(lower_lookahead(ws, f) == f);
  CHECK(ws.vars.var_count() == 1);
}

TEST_CASE("lowered formulas band-transform cleanly") {
  Workspace ws;
  FRef f = to_lookback(ws, lower_lookahead(ws, parse_property(
                               ws, "int x; G (x'' >= x)")));
  CHECK(ws.formulas.max_look(f) <= 0);  // nothing reads ahead any more
  CHECK_FALSE(ws.formulas.mentions_role(f, Role::Look));
}

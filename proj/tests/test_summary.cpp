#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "rvmon/letters.hpp"
#include "rvmon/oracle.hpp"
#include "rvmon/parse.hpp"
#include "rvmon/summary.hpp"
#include "rvmon/transform.hpp"

using namespace rvmon;

namespace {

FRef banded_of(Workspace& ws, const std::string& prop) {
  return to_lookback(ws, lower_lookahead(ws, parse_property(ws, prop)));
}

LinExpr of_term(TermId t) {
  LinExpr e;
  e.add_term(t, Rat(1));
  return e;
}

LinExpr of_const(long k) {
  LinExpr e;
  e.add_const(Rat(k));
  return e;
}

AtomId mk(Workspace& ws, LinExpr l, CmpOp op, LinExpr r) {
  AtomOrConst ac = ws.atoms.make(l, op, r);
  REQUIRE(ac.atom.has_value());
  return *ac.atom;
}

Dnf cube_of(std::vector<AtomId> atoms) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  return Dnf{{std::move(atoms)}};
}

/* Everything the graph tests need about the rising-to-2 property. */
struct Rig {
  Workspace ws;
  FRef banded;
  Alphabet al;
  Nfa nfa;
  Dfa dfa;
  TermId cur, init, pre;

  explicit Rig(const std::string& prop = "int x; G (x' >= x) && F (x = 2)") {
    banded = banded_of(ws, prop);
    al = build_alphabet(ws, banded);
    nfa = build_nfa(ws, banded);
    dfa = build_dfa(ws, nfa, al);
    VarIdx x = *ws.vars.find("x");
    cur = ws.vars.term(x, Role::Cur);
    init = ws.vars.term(x, Role::Init);
    pre = ws.vars.term(x, Role::Pre);
  }

  int state_after(const std::vector<long>& xs) {
    Trace tr;
    for (long v : xs) tr.rows.push_back({Rat(v)});
    return run_dfa(dfa, trace_to_word(ws, al, tr)).back();
  }
};

/* Direct expansion of the iterated one-step image along a word: one fresh
 * variable copy per intermediate instant and a single projection, sharing
 * no code with update()'s step chaining. */
Dnf history(Workspace& ws, const std::vector<VarIdx>& vars,
            const std::vector<Cube>& word) {
  int n = static_cast<int>(word.size());
  std::vector<std::map<VarIdx, TermId>> w(n + 1);
  std::vector<TermId> bound;
  for (VarIdx v : vars) {
    w[0][v] = ws.vars.term(v, Role::Init);
    w[n][v] = ws.vars.term(v, Role::Cur);
  }
  for (int i = 1; i < n; ++i)
    for (VarIdx v : vars) {
      std::string name = "__w" + std::to_string(i) + "_" + ws.vars.name(v);
      std::optional<VarIdx> f = ws.vars.find(name);
      VarIdx fv = f ? *f : ws.vars.declare(name, ws.vars.sort(v));
      w[i][v] = ws.vars.term(fv, Role::Cur);
      bound.push_back(w[i][v]);
    }
  Dnf conj = Dnf::top();
  for (int i = 0; i < n; ++i) {
    std::map<TermId, TermId> m;
    for (VarIdx v : vars) {
      TermId p = ws.vars.find_term(v, Role::Pre);
      TermId c = ws.vars.find_term(v, Role::Cur);
      if (p >= 0) m[p] = w[i].at(v);
      if (c >= 0) m[c] = w[i + 1].at(v);
    }
    conj = ws.arith.and_(conj, ws.arith.rename(Dnf{{word[i]}}, m));
  }
  return ws.arith.eliminate(conj, bound);
}

}  // namespace

TEST_CASE("one-step image through a letter") {
  Rig r;
  Workspace& ws = r.ws;
  AtomId ge = mk(ws, of_term(r.pre), CmpOp::Le, of_term(r.cur));   // rises
  AtomId eq2 = mk(ws, of_term(r.cur), CmpOp::Eq, of_const(2));     // hits 2
  Cube step{ge, eq2};
  std::sort(step.begin(), step.end());

  // a start pinned below-or-at 2 but not 2, stepped upward onto 2
  Dnf phi = cube_of({mk(ws, of_term(r.cur), CmpOp::Eq, of_term(r.init)),
                     mk(ws, of_term(r.init), CmpOp::Ne, of_const(2))});
  Dnf got = update(ws, phi, step);
  Dnf want = cube_of({mk(ws, of_term(r.init), CmpOp::Lt, of_const(2)),
                      mk(ws, of_term(r.cur), CmpOp::Eq, of_const(2))});
  CHECK(ws.arith.equivalent(got, want));

  // a non-strict start is preserved by a non-strict step
  Dnf wide = cube_of({mk(ws, of_term(r.init), CmpOp::Le, of_term(r.cur))});
  CHECK(ws.arith.equivalent(update(ws, wide, Cube{ge}), wide));
}

TEST_CASE("an unconstrained property has the trivial image") {
  Workspace ws;
  FRef banded = banded_of(ws, "int x; true");
  Dnf seed = seed_identity(ws, banded);
  CHECK(seed.is_top());
  CHECK(update(ws, seed, Cube{}).is_top());
}

TEST_CASE("seeds pin the constrained variables") {
  Rig r;
  Dnf seed = seed_identity(r.ws, r.banded);
  CHECK(r.ws.arith.equivalent(
      seed, cube_of({mk(r.ws, of_term(r.cur), CmpOp::Eq, of_term(r.init))})));

  Dnf pinned = seed_values(r.ws, r.banded, {Rat(5)});
  CHECK(r.ws.arith.equivalent(
      pinned, cube_of({mk(r.ws, of_term(r.cur), CmpOp::Eq, of_const(5))})));

  CHECK_THROWS_AS(seed_values(r.ws, r.banded, {}), std::logic_error);
}

TEST_CASE("the graph from the undecided state closes at twelve nodes") {
  Rig r;
  Workspace& ws = r.ws;
  int C = r.state_after({0});
  REQUIRE_FALSE(r.dfa.is_final(C));

  ConstraintGraph g = build_constraint_graph(
      ws, r.dfa, C, seed_identity(ws, r.banded), Equivalence::logical());
  CHECK(g.complete);
  CHECK(g.nodes.size() == 12);
  CHECK(g.nodes[0].dfa_state == C);

  // every node formula is satisfiable and every edge recomputes
  for (const CgNode& n : g.nodes) CHECK(ws.arith.sat(n.phi));
  for (const CgEdge& e : g.edges)
    CHECK(ws.arith.equivalent(update(ws, g.nodes[e.from].phi, e.letter),
                              g.nodes[e.to].phi));

  auto has_node = [&](int dfa_state, const Dnf& phi) {
    return std::any_of(g.nodes.begin(), g.nodes.end(), [&](const CgNode& n) {
      return n.dfa_state == dfa_state && ws.arith.equivalent(n.phi, phi);
    });
  };
  int B = r.state_after({2});
  int D = r.state_after({1, 0});
  AtomId x_eq_x0 = mk(ws, of_term(r.cur), CmpOp::Eq, of_term(r.init));
  AtomId x_ge_x0 = mk(ws, of_term(r.init), CmpOp::Le, of_term(r.cur));
  AtomId x_lt_x0 = mk(ws, of_term(r.cur), CmpOp::Lt, of_term(r.init));
  AtomId x0_le_2 = mk(ws, of_term(r.init), CmpOp::Le, of_const(2));
  AtomId x0_lt_2 = mk(ws, of_term(r.init), CmpOp::Lt, of_const(2));
  AtomId x_eq_2 = mk(ws, of_term(r.cur), CmpOp::Eq, of_const(2));
  AtomId x_ne_2 = mk(ws, of_term(r.cur), CmpOp::Ne, of_const(2));
  AtomId x_ge_2 = mk(ws, of_const(2), CmpOp::Le, of_term(r.cur));
  AtomId x_lt_2 = mk(ws, of_term(r.cur), CmpOp::Lt, of_const(2));

  CHECK(has_node(C, cube_of({x_eq_x0})));
  CHECK(has_node(C, cube_of({x_ge_x0, x_ne_2})));
  CHECK(has_node(B, cube_of({x0_le_2, x_eq_2})));
  CHECK(has_node(B, cube_of({x0_le_2, x_ge_2})));
  CHECK(has_node(B, cube_of({x0_lt_2, x_eq_2})));
  CHECK(has_node(B, cube_of({x0_lt_2, x_ge_2})));
  CHECK(has_node(D, cube_of({x_lt_x0})));
  CHECK(has_node(D, cube_of({x0_le_2})));
  CHECK(has_node(D, cube_of({x0_lt_2})));
  CHECK(has_node(D, cube_of({x0_le_2, x_lt_2})));
  CHECK(has_node(D, cube_of({x0_lt_2, x_lt_2})));
  CHECK(has_node(D, Dnf::top()));

  Anticipation a = fsat_funs(ws, g);
  CHECK(ws.arith.equivalent(a.fsat, cube_of({x0_le_2})));
  CHECK(a.funs.is_top());
}

TEST_CASE("the graph from the already-satisfied state has four nodes") {
  Rig r;
  Workspace& ws = r.ws;
  int B = r.state_after({2});
  REQUIRE(r.dfa.is_final(B));

  ConstraintGraph g = build_constraint_graph(
      ws, r.dfa, B, seed_identity(ws, r.banded), Equivalence::logical());
  CHECK(g.complete);
  CHECK(g.nodes.size() == 4);

  auto has_node = [&](bool fin, const Dnf& phi) {
    return std::any_of(g.nodes.begin(), g.nodes.end(), [&](const CgNode& n) {
      return n.is_final == fin && ws.arith.equivalent(n.phi, phi);
    });
  };
  CHECK(has_node(true, cube_of({mk(ws, of_term(r.cur), CmpOp::Eq,
                                   of_term(r.init))})));
  CHECK(has_node(true, cube_of({mk(ws, of_term(r.init), CmpOp::Le,
                                   of_term(r.cur))})));
  CHECK(has_node(false, cube_of({mk(ws, of_term(r.cur), CmpOp::Lt,
                                    of_term(r.init))})));
  CHECK(has_node(false, Dnf::top()));

  // both extensions remain possible from a satisfied-but-live state
  Anticipation a = fsat_funs(ws, g);
  CHECK(a.fsat.is_top());
  CHECK(a.funs.is_top());
}

TEST_CASE("node formulas agree with the directly expanded word image") {
  Rig r;
  Workspace& ws = r.ws;
  int C = r.state_after({0});
  ConstraintGraph g = build_constraint_graph(
      ws, r.dfa, C, seed_identity(ws, r.banded), Equivalence::logical());

  std::vector<std::vector<std::pair<Cube, int>>> out(g.nodes.size());
  for (const CgEdge& e : g.edges) out[e.from].emplace_back(e.letter, e.to);

  VarIdx x = *ws.vars.find("x");
  int checked = 0;
  // every path of length up to three from the seed
  std::vector<std::pair<std::vector<Cube>, int>> frontier{{{}, 0}};
  for (int depth = 0; depth < 3; ++depth) {
    std::vector<std::pair<std::vector<Cube>, int>> next;
    for (const auto& [word, node] : frontier)
      for (const auto& [letter, to] : out[node]) {
        std::vector<Cube> w = word;
        w.push_back(letter);
        Dnf direct = history(ws, {x}, w);
        CAPTURE(depth, to);
        CHECK(ws.arith.equivalent(direct, g.nodes[to].phi));
        ++checked;
        next.emplace_back(std::move(w), to);
      }
    frontier = std::move(next);
  }
  CHECK(checked >= 15);
}

TEST_CASE("the node budget guards divergent closures") {
  Rig r;
  int C = r.state_after({0});
  Dnf seed = seed_identity(r.ws, r.banded);
  CHECK_THROWS_WITH(build_constraint_graph(r.ws, r.dfa, C, seed,
                                           Equivalence::logical(), 5),
                    Catch::Matchers::ContainsSubstring("finite summary"));
  // the seed itself is always admitted: a self-closing loop passes limit 0
  Workspace ws2;
  FRef triv = banded_of(ws2, "int x; true");
  Alphabet al2 = build_alphabet(ws2, triv);
  Dfa dfa2 = build_dfa(ws2, build_nfa(ws2, triv), al2);
  Trace one;
  one.rows.push_back({Rat(0)});
  int loop = run_dfa(dfa2, trace_to_word(ws2, al2, one)).back();
  ConstraintGraph g2 = build_constraint_graph(
      ws2, dfa2, loop, seed_identity(ws2, triv), Equivalence::logical(), 0);
  CHECK(g2.complete);
  CHECK(g2.nodes.size() == 1);
  CHECK(g2.edges.size() == 1);
}

TEST_CASE("a visitor can stop the closure early") {
  Rig r;
  Workspace& ws = r.ws;
  int C = r.state_after({0});
  int seen = 0;
  ConstraintGraph g = build_constraint_graph(
      ws, r.dfa, C, seed_identity(ws, r.banded), Equivalence::logical(), 10000,
      [&](const ConstraintGraph& partial, int node) {
        ++seen;
        return partial.nodes[node].is_final;
      });
  CHECK_FALSE(g.complete);
  CHECK(g.nodes.back().is_final);
  CHECK(g.nodes.size() < 12);
  CHECK(seen == static_cast<int>(g.nodes.size()));
  CHECK_THROWS_AS(fsat_funs(ws, g), std::logic_error);
}

TEST_CASE("capped equivalence closes value-chasing integer properties") {
  for (long seed_val : {-2L, 0L, 5L, 7L}) {
    Workspace ws;
    FRef banded = banded_of(ws, "int x; G (x' > x)");
    Alphabet al = build_alphabet(ws, banded);
    Dfa dfa = build_dfa(ws, build_nfa(ws, banded), al);
    Trace one;
    one.rows.push_back({Rat(seed_val)});
    int p = run_dfa(dfa, trace_to_word(ws, al, one)).back();

    std::vector<Rat> row{Rat(seed_val)};
    Int k = cutoff_k(ws, banded, row);
    Dnf seed = seed_values(ws, banded, row);

    // plain equivalence chases the risen value forever
    CHECK_THROWS_AS(build_constraint_graph(ws, dfa, p, seed,
                                           Equivalence::logical(), 40),
                    NodeLimitExceeded);
    ConstraintGraph g = build_constraint_graph(ws, dfa, p, seed,
                                               Equivalence::cutoff(k), 10000);
    CHECK(g.complete);
    CHECK(g.nodes.size() <= 8);
    Anticipation a = fsat_funs(ws, g);
    CHECK(a.fsat.is_top());  // keep rising
    CHECK(a.funs.is_top());  // or fall once
  }
}

TEST_CASE("the cap spans the property and seed constants") {
  Workspace ws;
  FRef banded = banded_of(ws, "int x; G (x' > x)");
  // canonical gap constant -1, seed 5, zero: widest pair is 5 - (-1)
  CHECK(cutoff_k(ws, banded, {Rat(5)}) == Int(6));
  CHECK(cutoff_k(ws, banded, {Rat(0)}) == Int(1));
}

TEST_CASE("summaries are cached per state") {
  Rig r;
  SummaryCache cache;
  int C = r.state_after({0});
  const StateSummary& s1 = state_summary(r.ws, r.dfa, r.banded, C, cache);
  const StateSummary& s2 = state_summary(r.ws, r.dfa, r.banded, C, cache);
  CHECK(&s1 == &s2);
  CHECK(s1.graph.nodes.size() == 12);
  CHECK(cache.size() == 1);

  int B = r.state_after({2});
  state_summary(r.ws, r.dfa, r.banded, B, cache);
  CHECK(cache.size() == 2);
}

TEST_CASE("graph rendering carries states, formulas, and letters") {
  Rig r;
  int B = r.state_after({2});
  ConstraintGraph g = build_constraint_graph(
      r.ws, r.dfa, B, seed_identity(r.ws, r.banded), Equivalence::logical());
  std::string dot = cg_dot(r.ws, g);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("doublecircle") != std::string::npos);
  CHECK(dot.find("init -> n0") != std::string::npos);
  CHECK(dot.find("x0") != std::string::npos);
}

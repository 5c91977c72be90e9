#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "rvmon/automata.hpp"
#include "rvmon/oracle.hpp"
#include "rvmon/parse.hpp"
#include "rvmon/transform.hpp"

using namespace rvmon;

namespace {

Trace tr_of(const std::vector<std::vector<long>>& rows) {
  Trace t;
  for (const auto& r : rows) {
    std::vector<Rat> row;
    for (long v : r) row.emplace_back(v);
    t.rows.push_back(std::move(row));
  }
  return t;
}

/* The full front pipeline: parse, rewrite read-ahead, band. */
FRef banded_of(Workspace& ws, const std::string& prop) {
  return to_lookback(ws, lower_lookahead(ws, parse_property(ws, prop)));
}

bool has_move(const std::vector<Move>& ms, FRef residual, std::size_t natoms,
              EndMark mark) {
  return std::any_of(ms.begin(), ms.end(), [&](const Move& m) {
    return m.residual == residual && m.atoms.size() == natoms &&
           m.mark == mark;
  });
}

}  // namespace

TEST_CASE("one-step rewrite of literals and constants") {
  Workspace ws;
  FRef f = banded_of(ws, "int x; x = 2");
  std::vector<Move> ms = delta(ws, f);
  REQUIRE(ms.size() == 2);
  CHECK(has_move(ms, ws.formulas.top(), 1, EndMark::None));
  CHECK(has_move(ms, ws.formulas.bottom(), 1, EndMark::None));
  AtomId c = ws.formulas.at(f).atom;
  for (const Move& m : ms)
    CHECK(m.atoms.front() == (m.residual == ws.formulas.top()
                                  ? c
                                  : ws.atoms.neg(c)));

  CHECK(delta(ws, ws.formulas.top()) ==
        std::vector<Move>{{ws.formulas.top(), {}, EndMark::None}});
  CHECK(delta(ws, ws.formulas.bottom()) ==
        std::vector<Move>{{ws.formulas.bottom(), {}, EndMark::None}});
}

TEST_CASE("one-step rewrite of the recurring operators") {
  Workspace ws;
  FRef g = banded_of(ws, "int x; G (x = 2)");
  std::vector<Move> ms = delta(ws, g);
  // recur on the atom, or certify on a last letter, or die on the complement
  REQUIRE(ms.size() == 3);
  CHECK(has_move(ms, g, 1, EndMark::NotLast));
  CHECK(has_move(ms, ws.formulas.top(), 1, EndMark::Last));
  CHECK(has_move(ms, ws.formulas.bottom(), 1, EndMark::None));

  Workspace ws2;
  FRef fe = banded_of(ws2, "int x; F (x = 2)");
  std::vector<Move> ms2 = delta(ws2, fe);
  REQUIRE(ms2.size() == 4);
  CHECK(has_move(ms2, fe, 0, EndMark::NotLast));
  CHECK(has_move(ms2, ws2.formulas.bottom(), 0, EndMark::Last));
  CHECK(has_move(ms2, ws2.formulas.top(), 1, EndMark::None));
  CHECK(has_move(ms2, ws2.formulas.bottom(), 1, EndMark::None));

  Workspace ws3;
  FRef xs = banded_of(ws3, "int x; X (x = 2)");
  std::vector<Move> ms3 = delta(ws3, xs);
  REQUIRE(ms3.size() == 2);
  CHECK(has_move(ms3, ws3.formulas.at(xs).kids[0], 0, EndMark::NotLast));
  CHECK(has_move(ms3, ws3.formulas.bottom(), 0, EndMark::Last));
}

TEST_CASE("alphabets enumerate consistent polarity choices") {
  Workspace ws;
  FRef f = banded_of(ws, "int x; G (x' >= x) && F (x = 2)");
  Alphabet al = build_alphabet(ws, f);
  CHECK(al.base.size() == 2);
  CHECK(al.cur_base.size() == 1);
  CHECK(al.theta.size() == 4);
  CHECK(al.theta_cur.size() == 2);
  CHECK(al.reads_previous);

  Workspace ws2;
  Alphabet trivial = build_alphabet(ws2, banded_of(ws2, "int x; true"));
  CHECK(trivial.theta == std::vector<Cube>{{}});
  CHECK(trivial.theta_cur == std::vector<Cube>{{}});
  CHECK_FALSE(trivial.reads_previous);

  Workspace ws3;
  // x <= 0 together with x >= 5 is inconsistent: one choice dies
  Alphabet clash =
      build_alphabet(ws3, banded_of(ws3, "int x; F (x <= 0) && G (x >= 5)"));
  CHECK(clash.base.size() == 2);
  CHECK(clash.theta.size() == 3);
}

TEST_CASE("the alphabet guard rejects constraint blowups") {
  Workspace ws;
  std::string prop = "int x; x = 1";
  for (int i = 2; i <= 17; ++i) prop += " || x = " + std::to_string(i);
  FRef f = banded_of(ws, prop);
  CHECK_THROWS_WITH(build_alphabet(ws, f),
                    Catch::Matchers::ContainsSubstring("limit"));
  CHECK(build_alphabet(ws, f, 17).base.size() == 17);
}

TEST_CASE("each trace position satisfies exactly one letter") {
  Workspace ws;
  FRef f = banded_of(ws, "int x; G (x' >= x) && F (x = 2)");
  Alphabet al = build_alphabet(ws, f);
  Trace tr = tr_of({{0}, {1}, {3}});
  std::vector<Cube> w = trace_to_word(ws, al, tr);
  REQUIRE(w.size() == 3);
  CHECK(w[0].size() == 1);          // first letter: current-only atoms
  CHECK(w[1] == w[2]);              // both steps rise and miss 2
  CHECK(w[1].size() == 2);

  // uniqueness, brute force over the alphabet
  for (int i = 1; i < tr.length(); ++i) {
    int hits = 0;
    for (const Cube& letter : al.theta) {
      bool all = true;
      for (AtomId a : letter) {
        std::optional<bool> got =
            ws.atoms.eval(a, [&](TermId t) -> std::optional<Rat> {
              const TermInfo& ti = ws.vars.info(t);
              return ti.role == Role::Pre ? tr.rows[i - 1][ti.var]
                                          : tr.rows[i][ti.var];
            });
        all = all && got.value_or(false);
      }
      hits += all ? 1 : 0;
    }
    CHECK(hits == 1);
  }
}

TEST_CASE("closure sizes of the pinned automata") {
  // read-ahead rises-forever with a visit obligation: three live residuals
  Workspace ws;
  Nfa lookahead =
      build_nfa(ws, banded_of(ws, "int x; G (x' >= x) && F (x = 2)"));
  CHECK(lookahead.states.size() == 5);
  CHECK(lookahead.top == -1);  // no advance discharges the G obligation
  CHECK(lookahead.bot >= 0);

  // a single current-instant constraint discharges immediately
  Workspace ws2;
  Nfa atom = build_nfa(ws2, banded_of(ws2, "int x; x = 2"));
  CHECK(atom.states.size() == 4);
  CHECK(atom.top >= 0);
  CHECK(atom.is_final(atom.top));
  CHECK(atom.is_final(atom.acc));
  CHECK_FALSE(atom.is_final(atom.bot));
  CHECK_FALSE(atom.is_final(atom.initial));

  // two live states: wait for the handover, then keep it
  Workspace ws3;
  Nfa handover = build_nfa(
      ws3, banded_of(ws3, "int x; int y; (y >= 0) U (x > y && G (x > y))"));
  CHECK(handover.states.size() == 4);
  CHECK(handover.top == -1);

  Workspace ws4;
  FRef f4 = banded_of(ws4, "int x; int y; (y >= 0) U (x > y && G (x > y))");
  CHECK_THROWS_WITH(build_nfa(ws4, f4, 1),
                    Catch::Matchers::ContainsSubstring("STATE_LIMIT"));
}

TEST_CASE("subset construction reproduces the handover landscape") {
  Workspace ws;
  FRef f = banded_of(ws, "int x; int y; (y >= 0) U (x > y && G (x > y))");
  Alphabet al = build_alphabet(ws, f);
  CHECK(al.theta.size() == 4);
  CHECK_FALSE(al.reads_previous);
  Nfa nfa = build_nfa(ws, f);
  Dfa dfa = build_dfa(ws, nfa, al);

  CHECK(dfa.members.size() == 4);
  int finals = 0;
  for (std::size_t s = 0; s < dfa.members.size(); ++s)
    finals += dfa.is_final(static_cast<int>(s)) ? 1 : 0;
  CHECK(finals == 2);

  // determinism and totality
  for (const std::vector<int>& row : dfa.next) {
    REQUIRE(row.size() == al.theta.size());
    for (int t : row) {
      CHECK(t >= 0);
      CHECK(t < static_cast<int>(dfa.members.size()));
    }
  }

  std::vector<Verdict> labels = label_by_reachability(dfa);
  CHECK(labels[dfa.initial] == Verdict::CV);
  std::multiset<Verdict> all(labels.begin(), labels.end());
  CHECK(all == std::multiset<Verdict>{Verdict::CV, Verdict::CS, Verdict::CS,
                                      Verdict::PV});

  // the five-step run: watch, watch, hand over, fall back, hand over again
  Trace tr = tr_of({{0, 0}, {0, 3}, {4, 3}, {0, 3}, {0, -1}});
  std::vector<int> states = run_dfa(dfa, trace_to_word(ws, al, tr));
  std::vector<Verdict> got;
  for (int s : states) got.push_back(labels[s]);
  CHECK(got == std::vector<Verdict>{Verdict::CV, Verdict::CV, Verdict::CS,
                                    Verdict::CV, Verdict::CS});
}

TEST_CASE("subset construction with read-ahead tracks only the band") {
  Workspace ws;
  FRef f = banded_of(ws, "int x; G (x' >= x) && F (x = 2)");
  Alphabet al = build_alphabet(ws, f);
  Nfa nfa = build_nfa(ws, f);
  Dfa dfa = build_dfa(ws, nfa, al);
  CHECK(dfa.members.size() == 4);
  CHECK_THROWS_AS(label_by_reachability(dfa), std::logic_error);

  // the monotone-but-never-2 trace loops in one non-final state
  Trace tr = tr_of({{0}, {1}, {3}, {4}});
  std::vector<int> states = run_dfa(dfa, trace_to_word(ws, al, tr));
  CHECK(states[0] == states[1]);
  CHECK(states[1] == states[2]);
  CHECK(states[2] == states[3]);
  CHECK_FALSE(dfa.is_final(states[0]));
  CHECK(states[0] != dfa.initial);

  // an immediate 2 satisfies both conjuncts outright
  std::vector<int> good = run_dfa(dfa, trace_to_word(ws, al, tr_of({{2}})));
  CHECK(dfa.is_final(good[0]));
}

TEST_CASE("acceptance agrees with the reference semantics") {
  const std::vector<std::string> props = {
      "int x; G (x' >= x) && F (x = 2)",
      "int x; int y; (y >= 0) U (x > y && G (x > y))",
      "int x; F (x = 2) || G (x <= 0)",
      "int x; X (x = 1) && wX (x = 1)",
      "int x; strict(x' = 1)",
      "int x; G (x <= 1 -> X (x = 0))",
  };
  for (const std::string& prop : props) {
    Workspace ws;
    FRef orig = parse_property(ws, prop);
    FRef banded = to_lookback(ws, lower_lookahead(ws, orig));
    Alphabet al = build_alphabet(ws, banded);
    Nfa nfa = build_nfa(ws, banded);
    Dfa dfa = build_dfa(ws, nfa, al);
    for (int len = 1; len <= 3; ++len) {
      int total = 1;
      for (int i = 0; i < len; ++i) total *= 4;
      for (int mask = 0; mask < total; ++mask) {
        std::vector<std::vector<long>> rows;
        int m = mask;
        for (int i = 0; i < len; ++i) {
          rows.push_back({m % 4, (m % 4 + 1) % 3});
          m /= 4;
        }
        Trace tr = tr_of(rows);
        instrument(ws.vars, tr);
        std::vector<int> states = run_dfa(dfa, trace_to_word(ws, al, tr));
        bool accepted = dfa.is_final(states.back());
        CAPTURE(prop, rows);
        CHECK(accepted == oracle::holds(ws, tr, orig, 0));
      }
    }
  }
}

TEST_CASE("a trivial property collapses to an accepting loop") {
  Workspace ws;
  FRef f = banded_of(ws, "int x; true");
  Alphabet al = build_alphabet(ws, f);
  Nfa nfa = build_nfa(ws, f);
  CHECK(nfa.top == nfa.initial);
  Dfa dfa = build_dfa(ws, nfa, al);
  CHECK(dfa.members.size() == 2);
  std::vector<int> run = run_dfa(dfa, trace_to_word(ws, al, tr_of({{0}})));
  CHECK(dfa.is_final(run[0]));
  std::vector<Verdict> labels = label_by_reachability(dfa);
  CHECK(labels[run[0]] == Verdict::PS);
  CHECK(labels[dfa.initial] == Verdict::CV);
}

TEST_CASE("letter merging drops atoms covered in both polarities") {
  Workspace ws;
  FRef f = banded_of(ws, "int x; int y; (y >= 0) U (x > y && G (x > y))");
  Alphabet al = build_alphabet(ws, f);
  std::vector<Cube> all = merge_letters(ws.atoms, al.theta);
  CHECK(all == std::vector<Cube>{{}});

  AtomId keep = al.base[0];
  std::vector<Cube> half;
  for (const Cube& c : al.theta)
    if (std::find(c.begin(), c.end(), keep) != c.end()) half.push_back(c);
  std::vector<Cube> merged = merge_letters(ws.atoms, half);
  CHECK(merged == std::vector<Cube>{{keep}});
}

TEST_CASE("renderings carry the automaton shape") {
  Workspace ws;
  FRef f = banded_of(ws, "int x; G (x' >= x) && F (x = 2)");
  Alphabet al = build_alphabet(ws, f);
  Nfa nfa = build_nfa(ws, f);
  Dfa dfa = build_dfa(ws, nfa, al);

  std::string ndot = nfa_dot(ws, nfa);
  CHECK(ndot.find("digraph") != std::string::npos);
  CHECK(ndot.find("doublecircle") != std::string::npos);
  CHECK(ndot.find("q+") != std::string::npos);
  CHECK(ndot.find("init ->") != std::string::npos);

  std::string ddot = dfa_dot(ws, nfa, dfa);
  CHECK(ddot.find("digraph") != std::string::npos);
  CHECK(ddot.find("doublecircle") != std::string::npos);
  CHECK(ddot.find("->") != std::string::npos);

  CHECK_THROWS_AS(dfa.letter_index(Cube{-7}), std::logic_error);
}

#include "rvmon/summary.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "rvmon/letters.hpp"

namespace rvmon {

/* Variables mentioned by the banded formula's constraints. */
std::vector<VarIdx> constrained_vars(Workspace& ws, FRef banded) {
  std::set<AtomId> atoms;
  ws.formulas.collect_atoms(banded, atoms);
  std::set<VarIdx> vars;
  for (AtomId a : atoms)
    for (TermId t : ws.atoms.terms_of(a)) vars.insert(ws.vars.info(t).var);
  return {vars.begin(), vars.end()};
}

namespace {

Dnf conj_of(const std::vector<AtomOrConst>& parts) {
  Cube cube;
  for (const AtomOrConst& p : parts) {
    if (!p.atom) {
      if (!p.constant) return Dnf::bottom();
      continue;
    }
    cube.push_back(*p.atom);
  }
  std::sort(cube.begin(), cube.end());
  cube.erase(std::unique(cube.begin(), cube.end()), cube.end());
  return Dnf{{std::move(cube)}};
}

}  // namespace

Dnf update(Workspace& ws, const Dnf& phi, const Cube& letter) {
  // rename the formula's current values and the letter's previous-instant
  // reads to one shared intermediate copy, then project it away
  std::map<TermId, TermId> phi_map, letter_map;
  std::vector<TermId> tmps;
  for (VarIdx v = 0; v < ws.vars.var_count(); ++v) {
    TermId cur = ws.vars.find_term(v, Role::Cur);
    TermId pre = ws.vars.find_term(v, Role::Pre);
    if (cur < 0 && pre < 0) continue;
    TermId tmp = ws.vars.term(v, Role::Tmp);
    if (cur >= 0) phi_map[cur] = tmp;
    if (pre >= 0) letter_map[pre] = tmp;
    tmps.push_back(tmp);
  }
  Dnf mid = ws.arith.rename(phi, phi_map);
  Dnf step = ws.arith.rename(Dnf{{letter}}, letter_map);
  Dnf conj = ws.arith.and_(mid, step);
  return ws.arith.simplify(ws.arith.eliminate(conj, tmps));
}

Dnf seed_identity(Workspace& ws, FRef banded) {
  std::vector<AtomOrConst> eqs;
  for (VarIdx v : constrained_vars(ws, banded)) {
    LinExpr now, start;
    now.add_term(ws.vars.term(v, Role::Cur), Rat(1));
    start.add_term(ws.vars.term(v, Role::Init), Rat(1));
    eqs.push_back(ws.atoms.make(now, CmpOp::Eq, start));
  }
  return conj_of(eqs);
}

Dnf seed_values(Workspace& ws, FRef banded, const std::vector<Rat>& row) {
  std::vector<AtomOrConst> eqs;
  for (VarIdx v : constrained_vars(ws, banded)) {
    if (static_cast<std::size_t>(v) >= row.size())
      throw std::logic_error("seed row lacks a value for a constrained variable");
    LinExpr now, val;
    now.add_term(ws.vars.term(v, Role::Cur), Rat(1));
    val.add_const(row[v]);
    eqs.push_back(ws.atoms.make(now, CmpOp::Eq, val));
  }
  return conj_of(eqs);
}

ConstraintGraph build_constraint_graph(Workspace& ws, const Dfa& dfa,
                                       int start_state, const Dnf& seed,
                                       Equivalence equiv, int node_limit,
                                       const NodeVisitor& visit) {
  if (!ws.arith.sat(seed))
    throw std::logic_error("constraint graph seed is unsatisfiable");

  auto same = [&](const Dnf& a, const Dnf& b) {
    return equiv.kind == Equivalence::Logical
               ? ws.arith.equivalent(a, b)
               : ws.arith.cutoff_equivalent(a, b, equiv.k);
  };

  // per DFA state: outgoing merged letters and their targets
  std::vector<std::vector<std::pair<Cube, int>>> steps(dfa.members.size());
  auto steps_of = [&](int p) -> const std::vector<std::pair<Cube, int>>& {
    if (steps[p].empty()) {
      std::map<int, std::vector<Cube>> by_target;
      for (std::size_t li = 0; li < dfa.alpha.theta.size(); ++li)
        by_target[dfa.next[p][li]].push_back(dfa.alpha.theta[li]);
      for (auto& [q, cubes] : by_target)
        for (Cube& m : merge_letters(ws.atoms, std::move(cubes)))
          steps[p].emplace_back(std::move(m), q);
    }
    return steps[p];
  };

  ConstraintGraph g;
  g.equiv = equiv;
  g.nodes.push_back(
      {start_state, ws.arith.simplify(seed), dfa.is_final(start_state)});
  if (visit && visit(g, 0)) return g;

  for (std::size_t at = 0; at < g.nodes.size(); ++at) {
    for (const auto& [letter, q] : steps_of(g.nodes[at].dfa_state)) {
      Dnf next = update(ws, g.nodes[at].phi, letter);
      if (!ws.arith.sat(next)) continue;
      int target = -1;
      for (std::size_t j = 0; j < g.nodes.size(); ++j)
        if (g.nodes[j].dfa_state == q && same(g.nodes[j].phi, next)) {
          target = static_cast<int>(j);
          break;
        }
      if (target < 0) {
        if (static_cast<int>(g.nodes.size()) >= node_limit)
          throw NodeLimitExceeded(
              "NODE_LIMIT_EXCEEDED: constraint graph exceeded " +
              std::to_string(node_limit) +
              " nodes; finite summary not established");
        target = static_cast<int>(g.nodes.size());
        g.nodes.push_back({q, std::move(next), dfa.is_final(q)});
        g.edges.push_back({static_cast<int>(at), letter, target});
        if (visit && visit(g, target)) return g;
        continue;
      }
      g.edges.push_back({static_cast<int>(at), letter, target});
    }
  }
  g.complete = true;
  return g;
}

Anticipation fsat_funs(Workspace& ws, const ConstraintGraph& g) {
  if (!g.complete)
    throw std::logic_error("anticipation conditions need a completed graph");
  Dnf fin = Dnf::bottom(), non = Dnf::bottom();
  for (const CgNode& n : g.nodes) {
    Dnf& side = n.is_final ? fin : non;
    side = ws.arith.or_(side, n.phi);
  }
  std::vector<TermId> current;
  for (VarIdx v = 0; v < ws.vars.var_count(); ++v) {
    TermId t = ws.vars.find_term(v, Role::Cur);
    if (t >= 0) current.push_back(t);
  }
  return {ws.arith.simplify(ws.arith.eliminate(fin, current)),
          ws.arith.simplify(ws.arith.eliminate(non, current))};
}

Int cutoff_k(Workspace& ws, FRef banded, const std::vector<Rat>& seed_row) {
  std::set<AtomId> atoms;
  ws.formulas.collect_atoms(banded, atoms);
  std::vector<Rat> consts;
  for (AtomId a : atoms)
    for (const Rat& c : ws.atoms.constants(a)) consts.push_back(c);
  consts.insert(consts.end(), seed_row.begin(), seed_row.end());
  consts.emplace_back(0);
  Rat lo = consts.front(), hi = consts.front();
  for (const Rat& c : consts) {
    if (c < lo) lo = c;
    if (c > hi) hi = c;
  }
  Rat gap = hi - lo;
  return floor_div(gap);
}

const StateSummary& state_summary(Workspace& ws, const Dfa& dfa, FRef banded,
                                  int state, SummaryCache& cache,
                                  int node_limit) {
  auto it = cache.find(state);
  if (it == cache.end()) {
    auto s = std::make_shared<StateSummary>();
    s->graph = build_constraint_graph(ws, dfa, state, seed_identity(ws, banded),
                                      Equivalence::logical(), node_limit);
    s->cond = fsat_funs(ws, s->graph);
    it = cache.emplace(state, std::move(s)).first;
  }
  return *it->second;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string letter_label(const Workspace& ws, const Cube& c) {
  std::string out = "{";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ", ";
    out += ws.atoms.show(c[i], kStyleLetter);
  }
  return out + "}";
}

}  // namespace

std::string cg_dot(const Workspace& ws, const ConstraintGraph& g) {
  std::ostringstream out;
  out << "digraph cg {\n  rankdir=TB;\n  node [shape=circle];\n"
      << "  init [shape=point];\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const CgNode& n = g.nodes[i];
    out << "  n" << i << " [label=\"P" << n.dfa_state << "\\n"
        << dot_escape(show_dnf(ws.atoms, n.phi, kStyleState)) << "\"";
    if (n.is_final) out << ", shape=doublecircle";
    out << "];\n";
  }
  out << "  init -> n0;\n";
  // one drawn edge per node pair, letters stacked
  std::map<std::pair<int, int>, std::vector<std::string>> grouped;
  for (const CgEdge& e : g.edges)
    grouped[{e.from, e.to}].push_back(
        dot_escape(letter_label(ws, e.letter)));
  for (const auto& [pair, labels] : grouped) {
    out << "  n" << pair.first << " -> n" << pair.second << " [label=\"";
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (i) out << "\\n";
      out << labels[i];
    }
    out << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace rvmon

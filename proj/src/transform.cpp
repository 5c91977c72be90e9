#include "rvmon/transform.hpp"

#include <map>
#include <stdexcept>

namespace rvmon {

namespace {

/* The derived variable carrying v(i + shift), declared on first use. */
VarIdx derived_var(Workspace& ws, VarIdx v, int shift) {
  std::string name =
      "__la_" + ws.vars.name(v) + "_" + std::to_string(shift);
  if (auto found = ws.vars.find(name)) return *found;
  return ws.vars.declare_derived(name, ws.vars.sort(v), v, shift);
}

FRef xw_chain(FormulaTable& F, FRef base, int n) {
  for (int i = 0; i < n; ++i) base = F.xw(base);
  return base;
}

FRef xs_chain(FormulaTable& F, FRef base, int n) {
  for (int i = 0; i < n; ++i) base = F.xs(base);
  return base;
}

struct LoweredAtom {
  AtomId atom;                // reads at most level - 1 ahead
  std::vector<AtomId> links;  // __la_v_j = v^{level-1} per replaced var
};

/* Replace every read of v at `level` by a one-ahead read of the derived
 * variable __la_v_{level-1}, and record the linking constraints that tie
 * the derived column to the source where both are visible. */
LoweredAtom lower_atom(Workspace& ws, AtomId a, int level) {
  std::map<TermId, TermId> map;
  std::vector<AtomId> links;
  const std::vector<TermId> terms = ws.atoms.terms_of(a);  // make() grows it
  for (TermId t : terms) {
    const TermInfo ti = ws.vars.info(t);  // copy: term() may grow the table
    if (ti.role != Role::Look || ti.look != level) continue;
    VarIdx d = derived_var(ws, ti.var, level - 1);
    map[t] = ws.vars.term(d, Role::Look, 1);
    LinExpr lhs;
    lhs.add_term(ws.vars.term(d, Role::Cur), Rat(1));
    LinExpr rhs;
    rhs.add_term(ws.vars.term(ti.var, Role::Look, level - 1), Rat(1));
    AtomOrConst link = ws.atoms.make(lhs, CmpOp::Eq, rhs, 0);
    links.push_back(*link.atom);
  }
  AtomOrConst out = ws.atoms.rename(a, map);
  return LoweredAtom{*out.atom, std::move(links)};
}

FRef lower_pass(Workspace& ws, FRef f, int level, std::map<FRef, FRef>& memo) {
  if (auto it = memo.find(f); it != memo.end()) return it->second;
  FormulaTable& F = ws.formulas;
  const FNode n = F.at(f);  // copy: the table may grow while we rebuild
  FRef out = f;
  switch (n.kind) {
    case FK::True:
    case FK::False:
      break;
    case FK::Atom: {
      if (ws.atoms.max_look(n.atom).value_or(0) < level) break;
      LoweredAtom low = lower_atom(ws, n.atom, level);
      std::vector<FRef> conj{F.atom(low.atom)};
      for (AtomId l : low.links) conj.push_back(F.xw(F.atom(l)));
      out = F.dis({F.con(std::move(conj)), xw_chain(F, F.bottom(), level)});
      break;
    }
    case FK::NAtom: {
      if (ws.atoms.max_look(n.atom).value_or(0) < level) break;
      LoweredAtom low = lower_atom(ws, n.atom, level);
      std::vector<FRef> conj{F.natom(low.atom)};
      for (AtomId l : low.links) conj.push_back(F.xw(F.atom(l)));
      conj.push_back(xs_chain(F, F.top(), level));
      out = F.con(std::move(conj));
      break;
    }
    default: {
      std::vector<FRef> kids;
      kids.reserve(n.kids.size());
      for (FRef k : n.kids) kids.push_back(lower_pass(ws, k, level, memo));
      switch (n.kind) {
        case FK::And: out = F.con(std::move(kids)); break;
        case FK::Or: out = F.dis(std::move(kids)); break;
        case FK::Xs: out = F.xs(kids[0]); break;
        case FK::Xw: out = F.xw(kids[0]); break;
        case FK::U: out = F.until(kids[0], kids[1]); break;
        case FK::G: out = F.globally(kids[0]); break;
        case FK::F: out = F.eventually(kids[0]); break;
        default: break;
      }
    }
  }
  memo.emplace(f, out);
  return out;
}

/* The previous/current-band image of a one-ahead atom. */
AtomId band_atom(Workspace& ws, AtomId a) {
  std::map<TermId, TermId> map;
  for (TermId t : ws.atoms.terms_of(a)) {
    const TermInfo ti = ws.vars.info(t);  // copy: term() may grow the table
    if (ti.role == Role::Cur || (ti.role == Role::Look && ti.look == 0)) {
      map[t] = ws.vars.term(ti.var, Role::Pre);
    } else if (ti.role == Role::Look && ti.look == 1) {
      map[t] = ws.vars.term(ti.var, Role::Cur);
    } else {
      throw std::logic_error("band transform: unexpected term role");
    }
  }
  AtomOrConst out = ws.atoms.rename(a, map);
  return *out.atom;
}

FRef back_walk(Workspace& ws, FRef f, std::map<FRef, FRef>& memo) {
  if (auto it = memo.find(f); it != memo.end()) return it->second;
  FormulaTable& F = ws.formulas;
  const FNode n = F.at(f);
  FRef out = f;
  switch (n.kind) {
    case FK::True:
    case FK::False:
      break;
    case FK::Atom:
      if (ws.atoms.max_look(n.atom).value_or(0) > 0)
        out = F.xw(F.atom(band_atom(ws, n.atom)));
      break;
    case FK::NAtom:
      if (ws.atoms.max_look(n.atom).value_or(0) > 0)
        out = F.xs(F.atom(ws.atoms.neg(band_atom(ws, n.atom))));
      else
        out = F.atom(ws.atoms.neg(n.atom));
      break;
    default: {
      std::vector<FRef> kids;
      kids.reserve(n.kids.size());
      for (FRef k : n.kids) kids.push_back(back_walk(ws, k, memo));
      switch (n.kind) {
        case FK::And: out = F.con(std::move(kids)); break;
        case FK::Or: out = F.dis(std::move(kids)); break;
        case FK::Xs: out = F.xs(kids[0]); break;
        case FK::Xw: out = F.xw(kids[0]); break;
        case FK::U: out = F.until(kids[0], kids[1]); break;
        case FK::G: out = F.globally(kids[0]); break;
        case FK::F: out = F.eventually(kids[0]); break;
        default: break;
      }
    }
  }
  memo.emplace(f, out);
  return out;
}

}  // namespace

FRef lower_lookahead(Workspace& ws, FRef f) {
  for (int level = ws.formulas.max_look(f); level >= 2;
       level = ws.formulas.max_look(f)) {
    std::map<FRef, FRef> memo;
    f = lower_pass(ws, f, level, memo);
  }
  return f;
}

FRef to_lookback(Workspace& ws, FRef f) {
  if (ws.formulas.max_look(f) > 1)
    throw std::logic_error("band transform: formula reads two or more ahead");
  std::map<FRef, FRef> memo;
  return back_walk(ws, f, memo);
}

}  // namespace rvmon

#include "rvmon/oracle.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace rvmon::oracle {

namespace {

/* Subformulas in dependency order (kids first), with slot numbers. */
struct Shape {
  std::vector<FRef> order;
  std::map<FRef, int> slot;

  Shape(FormulaTable& F, FRef f) { visit(F, f); }
  void visit(FormulaTable& F, FRef f) {
    if (slot.count(f)) return;
    for (FRef k : F.at(f).kids) visit(F, k);
    slot.emplace(f, static_cast<int>(order.size()));
    order.push_back(f);
  }
};

int role_offset(const TermInfo& ti) {
  switch (ti.role) {
    case Role::Pre: return -1;
    case Role::Cur: return 0;
    case Role::Look: return ti.look;
    default:
      throw std::logic_error("oracle: formula reads a bound-copy term");
  }
}

}  // namespace

bool holds(Workspace& ws, const Trace& tr, FRef f, int pos) {
  int n = tr.length();
  if (n == 0) throw std::logic_error("oracle: empty trace");
  if (pos < 0 || pos >= n)
    throw std::logic_error("oracle: position outside the trace");
  FormulaTable& F = ws.formulas;
  Shape sh(F, f);
  std::vector<std::vector<char>> val(sh.order.size(),
                                     std::vector<char>(n, 0));
  for (int j = n - 1; j >= 0; --j) {
    bool last = j == n - 1;
    for (std::size_t s = 0; s < sh.order.size(); ++s) {
      const FNode& nd = F.at(sh.order[s]);
      auto kid = [&](int i) { return val[sh.slot.at(nd.kids[i])][j] != 0; };
      auto next = [&](int i) { return val[sh.slot.at(nd.kids[i])][j + 1] != 0; };
      auto self_next = [&] { return val[s][j + 1] != 0; };
      bool v = false;
      switch (nd.kind) {
        case FK::True: v = true; break;
        case FK::False: v = false; break;
        case FK::Atom:
        case FK::NAtom: {
          auto got = ws.atoms.eval(nd.atom, [&](TermId t) -> std::optional<Rat> {
            const TermInfo& ti = ws.vars.info(t);
            int at = j + role_offset(ti);
            if (at < 0 || at >= n) return std::nullopt;
            const auto& row = tr.rows[at];
            if (static_cast<std::size_t>(ti.var) >= row.size())
              throw std::logic_error(
                  "oracle: trace lacks a column; instrument the trace first");
            return row[ti.var];
          });
          v = nd.kind == FK::Atom ? got.value_or(true)
                                  : (got.has_value() && !*got);
          break;
        }
        case FK::And:
          v = true;
          for (std::size_t i = 0; i < nd.kids.size(); ++i) v = v && kid(i);
          break;
        case FK::Or:
          v = false;
          for (std::size_t i = 0; i < nd.kids.size(); ++i) v = v || kid(i);
          break;
        case FK::Xs: v = !last && next(0); break;
        case FK::Xw: v = last || next(0); break;
        case FK::G: v = kid(0) && (last || self_next()); break;
        case FK::F: v = kid(0) || (!last && self_next()); break;
        case FK::U: v = kid(1) || (kid(0) && !last && self_next()); break;
      }
      val[s][j] = v;
    }
  }
  return val[sh.slot.at(f)][pos] != 0;
}

namespace {

/* Evenly spaced rationals strictly between a and b. */
void fill_between(std::vector<Rat>& out, const Rat& a, const Rat& b, int k) {
  Rat span = b - a;
  for (int i = 1; i <= k; ++i) {
    Rat p = a + span * Rat(i) / Rat(k + 1);
    out.push_back(p);
  }
}

std::vector<Rat> rat_candidates(std::vector<Rat> thr, int nvars) {
  std::sort(thr.begin(), thr.end());
  thr.erase(std::unique(thr.begin(), thr.end()), thr.end());
  if (thr.empty()) thr = {Rat(0), Rat(1)};
  std::vector<Rat> ext;
  ext.push_back(thr.front() - 2);
  ext.insert(ext.end(), thr.begin(), thr.end());
  ext.push_back(thr.back() + 2);
  int gaps = static_cast<int>(ext.size()) - 1;
  int inner = std::min(2 * nvars + 1,
                       std::max(1, (16 - static_cast<int>(ext.size())) / gaps));
  std::vector<Rat> out;
  for (std::size_t i = 0; i < ext.size(); ++i) {
    out.push_back(ext[i]);
    if (i + 1 < ext.size()) fill_between(out, ext[i], ext[i + 1], inner);
  }
  return out;
}

std::vector<Rat> int_candidates(std::vector<Rat> thr) {
  std::vector<Int> pts;
  if (thr.empty()) thr = {Rat(0)};
  for (const Rat& t : thr) {
    Int base = floor_div(t);
    for (Int d(-2); d <= 2; d += 1) pts.push_back(base + d);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() > 20) {  // keep the ends and thin the middle
    std::vector<Int> kept;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (i < 8 || i + 8 >= pts.size() || i % 2 == 0) kept.push_back(pts[i]);
    pts = std::move(kept);
  }
  std::vector<Rat> out;
  for (const Int& p : pts) out.push_back(Rat(p));
  return out;
}

}  // namespace

Grid default_grid(Workspace& ws, FRef f) {
  std::set<AtomId> atoms;
  ws.formulas.collect_atoms(f, atoms);
  std::set<VarIdx> vars_rat, vars_int;
  std::vector<Rat> thr_rat, thr_int;
  for (AtomId a : atoms) {
    const LinAtom& la = ws.atoms.at(a);
    for (const auto& [t, c] : la.coeffs) {
      VarIdx v = ws.vars.info(t).var;
      (la.sort == Sort::Rat ? vars_rat : vars_int).insert(v);
    }
    if (la.coeffs.size() == 1 && la.rel != Rel::ModEq &&
        la.rel != Rel::ModNe) {
      Rat t = Rat(-la.cst) / Rat(la.coeffs[0].second);
      (la.sort == Sort::Rat ? thr_rat : thr_int).push_back(t);
    }
  }
  Grid g;
  std::vector<Rat> rat_pts =
      rat_candidates(thr_rat, static_cast<int>(vars_rat.size()));
  std::vector<Rat> int_pts = int_candidates(thr_int);
  for (VarIdx v : vars_rat) g.values[v] = rat_pts;
  for (VarIdx v : vars_int) g.values[v] = int_pts;
  return g;
}

namespace {

using Letter = std::vector<Rat>;  // indexed by VarIdx

/* A continuation's visible behaviour: the letters still readable by
 * lookahead atoms, and each subformula's value at the suffix head. */
struct SuffixType {
  std::vector<int> win;
  std::vector<char> col;
  bool operator<(const SuffixType& o) const {
    if (win != o.win) return win < o.win;
    return col < o.col;
  }
};

struct Search {
  Workspace& ws;
  const Shape& sh;
  const Trace& prefix;
  const std::vector<Letter>& letters;
  int reach;  // letters a lookahead atom can read past its instant

  /* Value of term t read at offset `off` from the suffix head, where the
   * suffix consists of `win` letters (and more beyond, when win is full). */
  std::optional<Rat> suffix_value(const std::vector<int>& win, int off,
                                  const TermInfo& ti) const {
    if (off < static_cast<int>(win.size()))
      return letters[win[off]][ti.var];
    if (static_cast<int>(win.size()) < reach) return std::nullopt;  // ended
    throw std::logic_error("oracle: read past the lookahead window");
  }

  std::vector<char> seed_col(int letter) const {
    return step_col(letter, nullptr, {});  // nothing follows the head
  }

  std::vector<int> win_of(const std::vector<int>& full) const {
    std::vector<int> w(full.begin(),
                       full.begin() + std::min<std::size_t>(full.size(),
                                                            reach));
    return w;
  }

  /* Column at a fresh head letter, given the rest of the suffix (null rest
   * means the head is the whole continuation). */
  std::vector<char> step_col(int head, const SuffixType* rest,
                             const std::vector<int>& rest_win) const {
    FormulaTable& F = ws.formulas;
    std::vector<char> col(sh.order.size(), 0);
    for (std::size_t s = 0; s < sh.order.size(); ++s) {
      const FNode& nd = F.at(sh.order[s]);
      auto kid = [&](int i) { return col[sh.slot.at(nd.kids[i])] != 0; };
      auto rest_kid = [&](int i) {
        return rest->col[sh.slot.at(nd.kids[i])] != 0;
      };
      auto rest_self = [&] { return rest->col[s] != 0; };
      bool v = false;
      switch (nd.kind) {
        case FK::True: v = true; break;
        case FK::False: v = false; break;
        case FK::Atom:
        case FK::NAtom: {
          auto got =
              ws.atoms.eval(nd.atom, [&](TermId t) -> std::optional<Rat> {
                const TermInfo& ti = ws.vars.info(t);
                int off = role_offset(ti);
                if (off == 0) return letters[head][ti.var];
                return suffix_value(rest_win, off - 1, ti);
              });
          v = nd.kind == FK::Atom ? got.value_or(true)
                                  : (got.has_value() && !*got);
          break;
        }
        case FK::And:
          v = true;
          for (std::size_t i = 0; i < nd.kids.size(); ++i) v = v && kid(i);
          break;
        case FK::Or:
          v = false;
          for (std::size_t i = 0; i < nd.kids.size(); ++i) v = v || kid(i);
          break;
        case FK::Xs: v = rest && rest_kid(0); break;
        case FK::Xw: v = !rest || rest_kid(0); break;
        case FK::G: v = kid(0) && (!rest || rest_self()); break;
        case FK::F: v = kid(0) || (rest && rest_self()); break;
        case FK::U:
          v = kid(1) || (kid(0) && rest && rest_self());
          break;
      }
      col[s] = v;
    }
    return col;
  }

  /* Fold the observed prefix backward against a suffix type; the result is
   * whether prefix + that continuation satisfies the root formula. */
  bool fold_prefix(const SuffixType& type) const {
    FormulaTable& F = ws.formulas;
    int n = prefix.length();
    std::vector<char> ahead = type.col;  // column at position j + 1
    std::vector<char> here(sh.order.size(), 0);
    for (int j = n - 1; j >= 0; --j) {
      for (std::size_t s = 0; s < sh.order.size(); ++s) {
        const FNode& nd = F.at(sh.order[s]);
        auto kid = [&](int i) { return here[sh.slot.at(nd.kids[i])] != 0; };
        auto next = [&](int i) { return ahead[sh.slot.at(nd.kids[i])] != 0; };
        auto self_next = [&] { return ahead[s] != 0; };
        bool v = false;
        switch (nd.kind) {
          case FK::True: v = true; break;
          case FK::False: v = false; break;
          case FK::Atom:
          case FK::NAtom: {
            auto got =
                ws.atoms.eval(nd.atom, [&](TermId t) -> std::optional<Rat> {
                  const TermInfo& ti = ws.vars.info(t);
                  int at = j + role_offset(ti);
                  if (at < 0) throw std::logic_error("oracle: backward read");
                  if (at < n) return prefix.rows[at][ti.var];
                  return suffix_value(type.win, at - n, ti);
                });
            v = nd.kind == FK::Atom ? got.value_or(true)
                                    : (got.has_value() && !*got);
            break;
          }
          case FK::And:
            v = true;
            for (std::size_t i = 0; i < nd.kids.size(); ++i) v = v && kid(i);
            break;
          case FK::Or:
            v = false;
            for (std::size_t i = 0; i < nd.kids.size(); ++i) v = v || kid(i);
            break;
          case FK::Xs: v = next(0); break;  // the continuation is non-empty
          case FK::Xw: v = next(0); break;
          case FK::G: v = kid(0) && self_next(); break;
          case FK::F: v = kid(0) || self_next(); break;
          case FK::U: v = kid(1) || (kid(0) && self_next()); break;
        }
        here[s] = v;
      }
      ahead = here;
    }
    return ahead[sh.slot.at(f_root)] != 0;
  }

  FRef f_root;
};

}  // namespace

Outcome rv_state_bounded(Workspace& ws, FRef f, const Trace& prefix,
                         const Grid& grid, int state_cap) {
  FormulaTable& F = ws.formulas;
  Shape sh(F, f);

  // Collect the variables the formula reads; all must be source columns.
  std::set<VarIdx> used;
  std::set<AtomId> atoms;
  F.collect_atoms(f, atoms);
  for (AtomId a : atoms)
    for (TermId t : ws.atoms.terms_of(a)) {
      const TermInfo& ti = ws.vars.info(t);
      if (ti.role == Role::Pre)
        throw std::logic_error("oracle: continuation search reads backward");
      if (ws.vars.derivation(ti.var))
        throw std::logic_error(
            "oracle: continuation search needs the original formula");
      used.insert(ti.var);
    }

  // Candidate letters: the product of per-variable grids.
  std::vector<std::vector<Rat>> axes(ws.vars.var_count(), {Rat(0)});
  for (VarIdx v : used) {
    auto it = grid.values.find(v);
    if (it != grid.values.end() && !it->second.empty()) axes[v] = it->second;
  }
  std::size_t count = 1;
  for (VarIdx v : used) {
    count *= axes[v].size();
    if (count > 8192)
      throw std::logic_error("oracle: grid spans too many letters");
  }
  std::vector<Letter> letters;
  Letter cur(ws.vars.var_count(), Rat(0));
  std::vector<VarIdx> vlist(used.begin(), used.end());
  std::vector<std::size_t> pick(vlist.size(), 0);
  for (;;) {
    for (std::size_t i = 0; i < vlist.size(); ++i)
      cur[vlist[i]] = axes[vlist[i]][pick[i]];
    letters.push_back(cur);
    std::size_t i = 0;
    for (; i < vlist.size(); ++i) {
      if (++pick[i] < axes[vlist[i]].size()) break;
      pick[i] = 0;
    }
    if (i == vlist.size()) break;
  }

  Search search{ws, sh, prefix, letters, std::max(0, F.max_look(f)), f};

  Outcome out;
  out.sat_now = holds(ws, prefix, f, 0);

  bool found_sat = false, found_unsat = false, capped = false;
  std::set<SuffixType> seen;
  std::deque<SuffixType> todo;
  auto admit = [&](SuffixType&& t) {
    if (found_sat && found_unsat) return;
    if (seen.count(t)) return;
    if (static_cast<int>(seen.size()) >= state_cap) {
      capped = true;
      return;
    }
    (search.fold_prefix(t) ? found_sat : found_unsat) = true;
    todo.push_back(t);
    seen.insert(std::move(t));
  };

  for (std::size_t a = 0; a < letters.size() && !(found_sat && found_unsat);
       ++a) {
    SuffixType t;
    t.win = search.win_of({static_cast<int>(a)});
    t.col = search.seed_col(static_cast<int>(a));
    admit(std::move(t));
  }
  while (!todo.empty() && !(found_sat && found_unsat) && !capped) {
    SuffixType t = todo.front();
    todo.pop_front();
    for (std::size_t a = 0; a < letters.size(); ++a) {
      std::vector<int> full{static_cast<int>(a)};
      full.insert(full.end(), t.win.begin(), t.win.end());
      SuffixType nt;
      nt.col = search.step_col(static_cast<int>(a), &t, t.win);
      nt.win = search.win_of(full);
      admit(std::move(nt));
      if ((found_sat && found_unsat) || capped) break;
    }
  }

  out.cont_sat = found_sat ? Wit::Found : capped ? Wit::Capped : Wit::NoneInGrid;
  out.cont_unsat =
      found_unsat ? Wit::Found : capped ? Wit::Capped : Wit::NoneInGrid;
  return out;
}

}  // namespace rvmon::oracle

#include "rvmon/arith.hpp"

#include <algorithm>
#include <cassert>

namespace rvmon {

/* ------------------------------------------------------------------ qf.hpp */

void Dnf::normalize() {
  for (auto& c : cubes) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  std::sort(cubes.begin(), cubes.end());
  cubes.erase(std::unique(cubes.begin(), cubes.end()), cubes.end());
}

bool merge_cubes(const AtomTable& atoms, const Cube& a, const Cube& b,
                 Cube& out) {
  out.clear();
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (AtomId x : out) {
    AtomId nx = atoms.neg(x);
    if (std::binary_search(out.begin(), out.end(), nx)) return false;
  }
  return true;
}

std::vector<TermId> dnf_terms(const AtomTable& atoms, const Dnf& d) {
  std::vector<TermId> out;
  for (const auto& c : d.cubes)
    for (AtomId a : c)
      for (TermId t : atoms.terms_of(a)) out.push_back(t);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string show_cube(const AtomTable& atoms, const Cube& c, int style) {
  if (c.empty()) return "true";
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += " && ";
    s += atoms.show(c[i], style);
  }
  return s;
}

std::string show_dnf(const AtomTable& atoms, const Dnf& d, int style) {
  if (d.is_bottom()) return "false";
  if (d.is_top()) return "true";
  std::string s;
  for (std::size_t i = 0; i < d.cubes.size(); ++i) {
    if (i) s += " || ";
    bool paren = d.cubes.size() > 1 && d.cubes[i].size() > 1;
    if (paren) s += "(";
    s += show_cube(atoms, d.cubes[i], style);
    if (paren) s += ")";
  }
  return s;
}

/* ------------------------------------------------------------- row helpers */

ArithEngine::Row ArithEngine::row_of(AtomId a) const {
  const LinAtom& la = atoms_->at(a);
  Row r;
  for (const auto& [t, c] : la.coeffs) r.coeffs.emplace(t, Rat(c));
  r.cst = Rat(la.cst);
  r.rel = la.rel;
  r.mod = la.mod;
  return r;
}

std::optional<bool> ArithEngine::const_check(const Row& r) {
  if (!r.coeffs.empty()) return std::nullopt;
  switch (r.rel) {
    case Rel::Eq: return r.cst == 0;
    case Rel::Ne: return r.cst != 0;
    case Rel::Le: return r.cst <= 0;
    case Rel::Lt: return r.cst < 0;
    case Rel::ModEq:
    case Rel::ModNe: {
      Rat c = r.cst;
      c.canonicalize();
      if (c.get_den() != 1) throw ValueError("fractional congruence constant");
      bool eq = euclid_mod(Int(c.get_num()), r.mod) == 0;
      return r.rel == Rel::ModEq ? eq : !eq;
    }
  }
  return std::nullopt;
}

namespace {

rvmon::CmpOp op_of(Rel r) {
  switch (r) {
    case Rel::Eq: return CmpOp::Eq;
    case Rel::Ne: return CmpOp::Ne;
    case Rel::Le: return CmpOp::Le;
    case Rel::Lt: return CmpOp::Lt;
    case Rel::ModEq: return CmpOp::ModEq;
    case Rel::ModNe: return CmpOp::ModNe;
  }
  return CmpOp::Eq;
}

}  // namespace

std::optional<Cube> ArithEngine::rows_to_cube(const Rows& rows) {
  Cube out;
  for (const Row& r : rows) {
    if (auto c = const_check(r)) {
      if (!*c) return std::nullopt;
      continue;
    }
    LinExpr lhs;
    for (const auto& [t, c] : r.coeffs) lhs.add_term(t, c);
    lhs.add_const(r.cst);
    // Congruence rows need integer scaling before make() accepts them.
    if (r.rel == Rel::ModEq || r.rel == Rel::ModNe) {
      Int scale(1);
      auto fold = [&scale](const Rat& q) {
        Rat c = q;
        c.canonicalize();
        Int den = c.get_den();
        mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), den.get_mpz_t());
      };
      for (const auto& [t, c] : lhs.coeffs) fold(c);
      fold(lhs.cst);
      if (scale != 1) {
        for (auto& [t, c] : lhs.coeffs) c *= Rat(scale);
        lhs.cst *= Rat(scale);
        // f/s ==_m 0  <=>  f ==_{m*s} 0
        LinExpr scaled = lhs;
        AtomOrConst made =
            atoms_->make(scaled, op_of(r.rel), LinExpr{}, r.mod * scale);
        if (!made.atom) {
          if (!made.constant) return std::nullopt;
          continue;
        }
        out.push_back(*made.atom);
        continue;
      }
    }
    AtomOrConst made = atoms_->make(lhs, op_of(r.rel), LinExpr{}, r.mod);
    if (!made.atom) {
      if (!made.constant) return std::nullopt;
      continue;
    }
    out.push_back(*made.atom);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (AtomId x : out)
    if (std::binary_search(out.begin(), out.end(), atoms_->neg(x)))
      return std::nullopt;
  return out;
}

/* --------------------------------------------------------- elimination core */

void ArithEngine::split_ne(const Rows& rows, std::size_t idx,
                           std::vector<Rows>& out) {
  // f != 0  ->  f < 0  or  -f < 0
  Rows lt = rows;
  lt[idx].rel = Rel::Lt;
  Rows gt = rows;
  gt[idx].rel = Rel::Lt;
  for (auto& [t, c] : gt[idx].coeffs) c = -c;
  gt[idx].cst = -gt[idx].cst;
  out.push_back(std::move(lt));
  out.push_back(std::move(gt));
}

std::vector<ArithEngine::Rows> ArithEngine::elim_term_rat(Rows rows, TermId t) {
  // 1. equality substitution
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].rel != Rel::Eq || !rows[i].has(t)) continue;
    Row eq = rows[i];
    rows.erase(rows.begin() + i);
    Rat a = eq.coeffs[t];
    eq.coeffs.erase(t);
    // t = -(rest)/a
    for (Row& r : rows) {
      auto it = r.coeffs.find(t);
      if (it == r.coeffs.end()) continue;
      Rat b = it->second;
      r.coeffs.erase(it);
      Rat k = -b / a;
      for (const auto& [u, c] : eq.coeffs) {
        Rat add = c * k;
        auto jt = r.coeffs.find(u);
        if (jt == r.coeffs.end()) {
          if (add != 0) r.coeffs.emplace(u, add);
        } else {
          jt->second += add;
          if (jt->second == 0) r.coeffs.erase(jt);
        }
      }
      Rat addc = eq.cst * k;
      r.cst += addc;
    }
    return {std::move(rows)};
  }
  // 2. disequality split
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].rel == Rel::Ne && rows[i].has(t)) {
      std::vector<Rows> out;
      split_ne(rows, i, out);
      return out;
    }
  }
  // 3. Fourier-Motzkin on Le/Lt
  Rows context;
  std::vector<Row> uppers, lowers;
  for (Row& r : rows) {
    if (!r.has(t)) {
      context.push_back(std::move(r));
      continue;
    }
    assert(r.rel == Rel::Le || r.rel == Rel::Lt);
    if (r.coeffs[t] > 0)
      uppers.push_back(std::move(r));
    else
      lowers.push_back(std::move(r));
  }
  for (const Row& lo : lowers) {
    for (const Row& up : uppers) {
      // lo: -b*t + s REL 0 (b>0), up: a*t + r REL 0 (a>0)
      Rat a = up.coeffs.at(t);
      Rat b = -lo.coeffs.at(t);
      Row comb;
      comb.rel = (lo.rel == Rel::Lt || up.rel == Rel::Lt) ? Rel::Lt : Rel::Le;
      auto acc = [&comb](TermId u, const Rat& v) {
        auto it = comb.coeffs.find(u);
        if (it == comb.coeffs.end()) {
          if (v != 0) comb.coeffs.emplace(u, v);
        } else {
          it->second += v;
          if (it->second == 0) comb.coeffs.erase(it);
        }
      };
      for (const auto& [u, c] : lo.coeffs)
        if (u != t) acc(u, c * a);
      for (const auto& [u, c] : up.coeffs)
        if (u != t) acc(u, c * b);
      comb.cst = lo.cst * a + up.cst * b;
      context.push_back(std::move(comb));
    }
  }
  return {std::move(context)};
}

std::vector<ArithEngine::Rows> ArithEngine::elim_term_int(Rows rows, TermId t) {
  // 1. equality substitution (multiply-through, plus divisibility)
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].rel != Rel::Eq || !rows[i].has(t)) continue;
    Row eq = rows[i];
    rows.erase(rows.begin() + i);
    Rat a = eq.coeffs[t];
    if (a < 0) {  // normalize a > 0
      for (auto& [u, c] : eq.coeffs) c = -c;
      eq.cst = -eq.cst;
      a = -a;
    }
    eq.coeffs.erase(t);
    for (Row& r : rows) {
      auto it = r.coeffs.find(t);
      if (it == r.coeffs.end()) continue;
      Rat b = it->second;
      r.coeffs.erase(it);
      // r := a*r - b*eq   (eq == 0 identically; a > 0 keeps direction)
      for (auto& [u, c] : r.coeffs) c *= a;
      r.cst *= a;
      if (r.mod != 0) {
        Rat ar = a;
        ar.canonicalize();
        r.mod *= Int(ar.get_num());
      }
      for (const auto& [u, c] : eq.coeffs) {
        Rat add = -b * c;
        auto jt = r.coeffs.find(u);
        if (jt == r.coeffs.end()) {
          if (add != 0) r.coeffs.emplace(u, add);
        } else {
          jt->second += add;
          if (jt->second == 0) r.coeffs.erase(jt);
        }
      }
      Rat addc = -b * eq.cst;
      r.cst += addc;
    }
    if (a != 1) {
      Row divis;
      divis.coeffs = eq.coeffs;
      divis.cst = eq.cst;
      divis.rel = Rel::ModEq;
      Rat ar = a;
      ar.canonicalize();
      divis.mod = Int(ar.get_num());
      rows.push_back(std::move(divis));
    }
    return {std::move(rows)};
  }
  // 2. disequality split
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].rel == Rel::Ne && rows[i].has(t)) {
      std::vector<Rows> out;
      split_ne(rows, i, out);
      return out;
    }
  }
  // 3. Cooper.  Tighten strict t-rows first: over Z, f < 0 <=> f + 1 <= 0.
  for (Row& r : rows) {
    if (r.rel == Rel::Lt && r.has(t)) {
      r.rel = Rel::Le;
      r.cst += 1;
    }
  }
  // Scale every t-row so |coeff(t)| becomes delta, then treat delta*t as a
  // unit variable; the scaling divisibility t' ==_delta 0 joins the mod rows.
  Int delta(1);
  for (const Row& r : rows) {
    if (!r.has(t)) continue;
    Rat c = r.coeffs.at(t);
    c.canonicalize();
    if (c.get_den() != 1) throw ValueError("fractional integer coefficient");
    Int a = abs(Int(c.get_num()));
    mpz_lcm(delta.get_mpz_t(), delta.get_mpz_t(), a.get_mpz_t());
  }
  Rows context;
  struct TRow {
    Row row;   // with coeff(t) removed
    int sign;  // +1: t' + row <= 0 / mod; -1: -t' + row <= 0 / mod
  };
  std::vector<TRow> trows;
  for (Row& r : rows) {
    if (!r.has(t)) {
      context.push_back(std::move(r));
      continue;
    }
    Rat c = r.coeffs.at(t);
    c.canonicalize();
    Int a(c.get_num());
    Int mag = abs(a);
    Rat factor = Rat(delta) / Rat(mag);
    r.coeffs.erase(t);
    for (auto& [u, cc] : r.coeffs) cc *= factor;
    r.cst *= factor;
    if (r.mod != 0) {
      Rat fr = factor;
      fr.canonicalize();
      if (fr.get_den() != 1) throw ValueError("non-integral mod scale");
      r.mod *= Int(fr.get_num());
    }
    trows.push_back(TRow{std::move(r), a > 0 ? 1 : -1});
  }
  if (delta != 1) {
    Row divis;
    divis.rel = Rel::ModEq;
    divis.mod = delta;
    trows.push_back(TRow{std::move(divis), 1});
  }
  Int D = delta;
  for (const TRow& tr : trows)
    if (tr.row.mod != 0)
      mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), tr.row.mod.get_mpz_t());

  // substitute t' = expr + j into a t-row
  auto plug = [](const TRow& tr, const Row* bound, const Int& j) {
    // t-row: sign*t' + row REL 0; with t' = bound + j:
    //   row + sign*(bound + j) REL 0
    Row out = tr.row;
    auto acc = [&out](TermId u, const Rat& v) {
      auto it = out.coeffs.find(u);
      if (it == out.coeffs.end()) {
        if (v != 0) out.coeffs.emplace(u, v);
      } else {
        it->second += v;
        if (it->second == 0) out.coeffs.erase(it);
      }
    };
    Rat s(tr.sign);
    Rat shift(j);
    if (bound) {
      for (const auto& [u, c] : bound->coeffs) acc(u, c * s);
      shift += bound->cst;
    }
    Rat add = shift * s;
    out.cst += add;
    return out;
  };

  // lower bounds: -t' + s <= 0  (sign == -1, rel Le)  =>  t' >= s
  std::vector<Row> lowers;
  for (const TRow& tr : trows)
    if (tr.sign == -1 && tr.row.rel == Rel::Le) lowers.push_back(tr.row);

  std::vector<Rows> out;
  if (lowers.empty()) {
    // phi_-inf: upper rows are true at -infinity; only mod rows constrain.
    for (Int j(0); j < D; j += 1) {
      Rows branch = context;
      bool dead = false;
      for (const TRow& tr : trows) {
        if (tr.row.mod == 0) continue;  // Le row, true at -inf
        Row b = plug(tr, nullptr, j);
        if (auto c = const_check(b)) {
          if (!*c) {
            dead = true;
            break;
          }
        } else {
          branch.push_back(std::move(b));
        }
      }
      if (!dead) out.push_back(std::move(branch));
    }
    return out;
  }
  for (const Row& bound : lowers) {
    for (Int j(0); j < D; j += 1) {
      Rows branch = context;
      bool dead = false;
      for (const TRow& tr : trows) {
        Row b = plug(tr, &bound, j);
        if (auto c = const_check(b)) {
          if (!*c) {
            dead = true;
            break;
          }
        } else {
          branch.push_back(std::move(b));
        }
      }
      if (!dead) out.push_back(std::move(branch));
    }
  }
  return out;
}

bool ArithEngine::sat_rows(Rows start) {
  std::vector<Rows> stack{std::move(start)};
  while (!stack.empty()) {
    Rows rows = std::move(stack.back());
    stack.pop_back();
    bool dead = false;
    Rows live;
    for (Row& r : rows) {
      if (auto c = const_check(r)) {
        if (!*c) {
          dead = true;
          break;
        }
      } else {
        live.push_back(std::move(r));
      }
    }
    if (dead) continue;
    if (live.empty()) return true;
    TermId t = -1;
    for (const Row& r : live)
      for (const auto& [u, c] : r.coeffs)
        if (t < 0 || u < t) t = u;
    if (t < 0) return true;
    Sort s = atoms_->vars().sort_of_term(t);
    std::vector<Rows> branches = s == Sort::Int ? elim_term_int(std::move(live), t)
                                                : elim_term_rat(std::move(live), t);
    for (auto& b : branches) stack.push_back(std::move(b));
  }
  return false;
}

/* ----------------------------------------------------------- sat interface */

bool ArithEngine::sat_cube(const Cube& c) {
  auto it = sat_memo_.find(c);
  if (it != sat_memo_.end()) return it->second;
  // syntactic complement check
  bool result = true;
  for (AtomId a : c)
    if (std::binary_search(c.begin(), c.end(), atoms_->neg(a))) {
      result = false;
      break;
    }
  if (result) {
    // per-sort split
    Rows ints, rats;
    for (AtomId a : c)
      (atoms_->at(a).sort == Sort::Int ? ints : rats).push_back(row_of(a));
    result = sat_rows(std::move(ints)) && sat_rows(std::move(rats));
  }
  sat_memo_.emplace(c, result);
  return result;
}

bool ArithEngine::sat(const Dnf& d) {
  for (const Cube& c : d.cubes)
    if (sat_cube(c)) return true;
  return false;
}

/* --------------------------------------------------------- structural ops */

namespace {

/* Drop cubes that are supersets of another cube (the subset is weaker and
 * absorbs the superset in a disjunction). */
void prune_subsumed(std::vector<Cube>& cubes) {
  std::vector<Cube> keep;
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    bool subsumed = false;
    for (std::size_t j = 0; j < cubes.size() && !subsumed; ++j) {
      if (i == j) continue;
      const Cube& a = cubes[j];
      const Cube& b = cubes[i];
      if (a.size() > b.size()) continue;
      if (a.size() == b.size() && !(a < b) && !(b < a) && j > i) continue;
      if (std::includes(b.begin(), b.end(), a.begin(), a.end())) subsumed = true;
    }
    if (!subsumed) keep.push_back(cubes[i]);
  }
  cubes = std::move(keep);
}

}  // namespace

Dnf ArithEngine::and_(const Dnf& a, const Dnf& b) {
  Dnf out;
  for (const Cube& ca : a.cubes) {
    for (const Cube& cb : b.cubes) {
      Cube m;
      if (merge_cubes(*atoms_, ca, cb, m)) out.cubes.push_back(std::move(m));
    }
  }
  out.normalize();
  prune_subsumed(out.cubes);
  out.normalize();
  return out;
}

Dnf ArithEngine::or_(const Dnf& a, const Dnf& b) {
  Dnf out = a;
  out.cubes.insert(out.cubes.end(), b.cubes.begin(), b.cubes.end());
  out.normalize();
  prune_subsumed(out.cubes);
  out.normalize();
  return out;
}

Dnf ArithEngine::negate(const Dnf& d) {
  Dnf acc = Dnf::top();
  for (const Cube& c : d.cubes) {
    Dnf clause;  // disjunction of complements
    for (AtomId a : c) clause.cubes.push_back(Cube{atoms_->neg(a)});
    clause.normalize();
    acc = and_(acc, clause);
    if (acc.is_bottom()) return acc;
  }
  return acc;
}

/* ------------------------------------------------------------- eliminate */

Dnf ArithEngine::eliminate(const Dnf& d, const std::vector<TermId>& targets) {
  if (targets.empty()) return d;
  Dnf out;
  for (const Cube& c : d.cubes) {
    Rows rows;
    rows.reserve(c.size());
    for (AtomId a : c) rows.push_back(row_of(a));
    std::vector<Rows> work{std::move(rows)};
    std::vector<Rows> done;
    while (!work.empty()) {
      Rows cur = std::move(work.back());
      work.pop_back();
      TermId t = -1;
      for (const Row& r : cur) {
        for (TermId u : targets)
          if (r.has(u) && (t < 0 || u < t)) t = u;
      }
      if (t < 0) {
        done.push_back(std::move(cur));
        continue;
      }
      Sort s = atoms_->vars().sort_of_term(t);
      std::vector<Rows> branches = s == Sort::Int
                                       ? elim_term_int(std::move(cur), t)
                                       : elim_term_rat(std::move(cur), t);
      for (auto& b : branches) work.push_back(std::move(b));
    }
    for (const Rows& rs : done) {
      if (auto cube = rows_to_cube(rs)) out.cubes.push_back(std::move(*cube));
    }
  }
  out.normalize();
  prune_subsumed(out.cubes);
  out.normalize();
  return out;
}

/* ----------------------------------------------------------- equivalence */

bool ArithEngine::implies(const Dnf& a, const Dnf& b) {
  auto key = std::make_pair(a.cubes, b.cubes);
  auto it = imp_memo_.find(key);
  if (it != imp_memo_.end()) return it->second;
  Dnf nb = negate(b);
  bool result = !sat(and_(a, nb));
  imp_memo_.emplace(std::move(key), result);
  return result;
}

bool ArithEngine::equivalent(const Dnf& a, const Dnf& b) {
  if (a == b) return true;
  return implies(a, b) && implies(b, a);
}

/* -------------------------------------------------------------- simplify */

Dnf ArithEngine::simplify(const Dnf& d) {
  Dnf out;
  for (const Cube& cube0 : d.cubes) {
    if (!sat_cube(cube0)) continue;
    std::vector<AtomId> cur(cube0.begin(), cube0.end());
    for (int pass = 0; pass < 5; ++pass) {
      bool changed = false;

      // Rewrite through unit equalities: x = e lets every other atom drop x.
      for (std::size_t i = 0; i < cur.size(); ++i) {
        const LinAtom& la = atoms_->at(cur[i]);
        if (la.rel != Rel::Eq) continue;
        TermId pivot = -1;
        Rat pc;
        for (const auto& [t, c] : la.coeffs) {
          if (abs(c) == 1) {
            pivot = t;
            pc = Rat(c);
            break;
          }
        }
        if (pivot < 0) continue;
        // pivot = -(rest)/pc
        for (std::size_t j = 0; j < cur.size(); ++j) {
          if (j == i) continue;
          const LinAtom& lb = atoms_->at(cur[j]);
          bool hasp = false;
          for (const auto& [t, c] : lb.coeffs)
            if (t == pivot) hasp = true;
          if (!hasp) continue;
          Row r = row_of(cur[j]);
          Rat b = r.coeffs[pivot];
          r.coeffs.erase(pivot);
          Rat k = -b / pc;
          for (const auto& [u, c] : la.coeffs) {
            if (u == pivot) continue;
            Rat add = Rat(c) * k;
            auto jt = r.coeffs.find(u);
            if (jt == r.coeffs.end()) {
              if (add != 0) r.coeffs.emplace(u, add);
            } else {
              jt->second += add;
              if (jt->second == 0) r.coeffs.erase(jt);
            }
          }
          Rat addc = Rat(la.cst) * k;
          r.cst += addc;
          std::optional<Cube> rebuilt = rows_to_cube({r});
          if (!rebuilt) {  // contradiction surfaced
            cur.clear();
            changed = true;
            break;
          }
          AtomId repl = rebuilt->empty() ? -1 : rebuilt->front();
          if (repl != cur[j]) {
            changed = true;
            if (repl < 0)
              cur.erase(cur.begin() + j);
            else
              cur[j] = repl;
            break;  // indices shifted; restart the inner scan
          }
        }
        if (changed) break;
      }
      if (cur.empty()) break;
      if (changed) continue;

      // Pairwise same-hyperplane folds.
      auto negated = [&](const std::vector<std::pair<TermId, Int>>& v) {
        auto out2 = v;
        for (auto& [t, c] : out2) c = -c;
        return out2;
      };
      for (std::size_t i = 0; i < cur.size() && !changed; ++i) {
        for (std::size_t j = i + 1; j < cur.size() && !changed; ++j) {
          const LinAtom &A = atoms_->at(cur[i]), &B = atoms_->at(cur[j]);
          if (A.mod != 0 || B.mod != 0) continue;
          bool same = A.coeffs == B.coeffs;
          bool opp = A.coeffs == negated(B.coeffs);
          if (!same && !opp) continue;
          auto drop = [&](std::size_t k) {
            cur.erase(cur.begin() + k);
            changed = true;
          };
          auto replace_pair = [&](Rel rel, const LinAtom& base) {
            Row r;
            for (const auto& [t, c] : base.coeffs) r.coeffs.emplace(t, Rat(c));
            r.cst = Rat(base.cst);
            r.rel = rel;
            std::optional<Cube> rebuilt = rows_to_cube({r});
            std::size_t hi = std::max(i, j), lo = std::min(i, j);
            cur.erase(cur.begin() + hi);
            cur.erase(cur.begin() + lo);
            if (rebuilt && !rebuilt->empty()) cur.push_back(rebuilt->front());
            changed = true;
          };
          if (same && A.rel == Rel::Le && B.rel == Rel::Le) {
            drop(A.cst >= B.cst ? j : i);  // keep the tighter (larger cst)
          } else if (same && A.rel == Rel::Lt && B.rel == Rel::Lt) {
            drop(A.cst >= B.cst ? j : i);
          } else if (same && A.rel == Rel::Le && B.rel == Rel::Lt) {
            if (A.cst > B.cst) drop(j); else drop(i);
          } else if (same && A.rel == Rel::Lt && B.rel == Rel::Le) {
            if (B.cst > A.cst) drop(i); else drop(j);
          } else if (A.rel == Rel::Eq &&
                     (B.rel == Rel::Le || B.rel == Rel::Lt)) {
            // f = -cstA on B's hyperplane: B implied iff it evaluates true
            Rat v = same ? Rat(B.cst - A.cst) : Rat(B.cst + A.cst);
            if ((B.rel == Rel::Le && v <= 0) || (B.rel == Rel::Lt && v < 0))
              drop(j);
          } else if (B.rel == Rel::Eq &&
                     (A.rel == Rel::Le || A.rel == Rel::Lt)) {
            Rat v = same ? Rat(A.cst - B.cst) : Rat(A.cst + B.cst);
            if ((A.rel == Rel::Le && v <= 0) || (A.rel == Rel::Lt && v < 0))
              drop(i);
          } else if (A.rel == Rel::Le && B.rel == Rel::Le && opp &&
                     A.cst == -B.cst) {
            replace_pair(Rel::Eq, A);  // f <= 0 and f >= 0
          } else if (A.rel == Rel::Le && B.rel == Rel::Ne &&
                     ((same && A.cst == B.cst) || (opp && A.cst == -B.cst))) {
            replace_pair(Rel::Lt, A);  // <= plus != on the boundary -> <
          } else if (A.rel == Rel::Ne && B.rel == Rel::Le &&
                     ((same && A.cst == B.cst) || (opp && A.cst == -B.cst))) {
            replace_pair(Rel::Lt, B);
          }
        }
      }
      if (!changed) break;
    }
    if (cur.empty() && !cube0.empty()) continue;  // contradiction surfaced
    std::sort(cur.begin(), cur.end());
    cur.erase(std::unique(cur.begin(), cur.end()), cur.end());
    Cube c(cur.begin(), cur.end());
    if (!sat_cube(c)) continue;
    out.cubes.push_back(std::move(c));
  }
  out.normalize();
  prune_subsumed(out.cubes);
  out.normalize();
  return out;
}

/* ---------------------------------------------------------------- cutoff */

Dnf ArithEngine::cap_constants(const Dnf& d, const Int& K) {
  Dnf out;
  for (const Cube& c : d.cubes) {
    Cube nc;
    for (AtomId a : c) {
      const LinAtom& la = atoms_->at(a);
      if (la.rel == Rel::ModEq || la.rel == Rel::ModNe) {
        nc.push_back(a);  // residues live in [0, m): already finite
        continue;
      }
      bool unit1 = la.coeffs.size() == 1 && abs(la.coeffs[0].second) == 1;
      bool unit2 = la.coeffs.size() == 2 &&
                   ((la.coeffs[0].second == 1 && la.coeffs[1].second == -1) ||
                    (la.coeffs[0].second == -1 && la.coeffs[1].second == 1));
      if (!unit1 && !unit2)
        throw UnsupportedFragment("cutoff capping needs unit-shaped atoms: " +
                                  atoms_->show(a, kStyleState));
      if (abs(la.cst) <= K) {
        nc.push_back(a);
        continue;
      }
      Row r = row_of(a);
      r.cst = Rat(la.cst < 0 ? -K : K);
      std::optional<Cube> rebuilt = rows_to_cube({r});
      if (!rebuilt) {
        nc.clear();
        nc.push_back(-1);  // marker: dead cube
        break;
      }
      if (!rebuilt->empty()) nc.push_back(rebuilt->front());
    }
    if (!nc.empty() && nc.front() == -1) continue;
    std::sort(nc.begin(), nc.end());
    nc.erase(std::unique(nc.begin(), nc.end()), nc.end());
    out.cubes.push_back(std::move(nc));
  }
  out.normalize();
  return out;
}

bool ArithEngine::cutoff_equivalent(const Dnf& a, const Dnf& b, const Int& K) {
  return equivalent(cap_constants(a, K), cap_constants(b, K));
}

/* --------------------------------------------------- renaming / plugging */

Dnf ArithEngine::rename(const Dnf& d, const std::map<TermId, TermId>& m) {
  Dnf out;
  for (const Cube& c : d.cubes) {
    Cube nc;
    bool dead = false;
    for (AtomId a : c) {
      AtomOrConst r = atoms_->rename(a, m);
      if (!r.atom) {
        if (!r.constant) {
          dead = true;
          break;
        }
        continue;
      }
      nc.push_back(*r.atom);
    }
    if (dead) continue;
    std::sort(nc.begin(), nc.end());
    nc.erase(std::unique(nc.begin(), nc.end()), nc.end());
    bool comp = false;
    for (AtomId x : nc)
      if (std::binary_search(nc.begin(), nc.end(), atoms_->neg(x))) comp = true;
    if (comp) continue;
    out.cubes.push_back(std::move(nc));
  }
  out.normalize();
  return out;
}

Dnf ArithEngine::instantiate(const Dnf& d, const std::map<TermId, Rat>& vals) {
  Dnf out;
  for (const Cube& c : d.cubes) {
    Cube nc;
    bool dead = false;
    for (AtomId a : c) {
      Row r = row_of(a);
      for (const auto& [t, v] : vals) {
        auto it = r.coeffs.find(t);
        if (it == r.coeffs.end()) continue;
        Rat add = it->second * v;
        r.cst += add;
        r.coeffs.erase(it);
      }
      std::optional<Cube> rebuilt = rows_to_cube({r});
      if (!rebuilt) {
        dead = true;
        break;
      }
      for (AtomId x : *rebuilt) nc.push_back(x);
    }
    if (dead) continue;
    std::sort(nc.begin(), nc.end());
    nc.erase(std::unique(nc.begin(), nc.end()), nc.end());
    bool comp = false;
    for (AtomId x : nc)
      if (std::binary_search(nc.begin(), nc.end(), atoms_->neg(x))) comp = true;
    if (comp) continue;
    out.cubes.push_back(std::move(nc));
  }
  out.normalize();
  return out;
}

}  // namespace rvmon

#include "rvmon/formula.hpp"

#include <algorithm>
#include <climits>

namespace rvmon {

FormulaTable::FormulaTable(ArithEngine& eng) : eng_(&eng) {
  intern(FNode{FK::True, -1, {}});
  intern(FNode{FK::False, -1, {}});
}

FRef FormulaTable::intern(FNode n) {
  auto it = index_.find(n);
  if (it != index_.end()) return it->second;
  FRef id = static_cast<FRef>(nodes_.size());
  int mx = -1, mn = INT_MAX;
  uint8_t mask = 0;
  if (n.kind == FK::Atom || n.kind == FK::NAtom) {
    if (auto band = atoms().offset_band(n.atom)) {
      mx = band->second;
      mn = band->first;
    }
    for (Role r : {Role::Look, Role::Pre, Role::Cur, Role::Init, Role::Tmp})
      if (atoms().mentions_role(n.atom, r)) mask |= uint8_t(1u << int(r));
  } else {
    for (FRef k : n.kids) {
      mx = std::max(mx, max_look_[k]);
      mn = std::min(mn, min_look_[k]);
      mask |= role_mask_[k];
    }
  }
  index_.emplace(n, id);
  nodes_.push_back(std::move(n));
  max_look_.push_back(mx);
  min_look_.push_back(mn);
  role_mask_.push_back(mask);
  return id;
}

bool FormulaTable::mentions_role(FRef f, Role r) const {
  return (role_mask_[f] >> int(r)) & 1u;
}

bool FormulaTable::atom_total(AtomId a) const {
  auto band = eng_->atoms().offset_band(a);
  return !band || (band->first == 0 && band->second == 0);
}

FRef FormulaTable::atom(AtomId a) { return intern(FNode{FK::Atom, a, {}}); }

FRef FormulaTable::natom(AtomId a) { return intern(FNode{FK::NAtom, a, {}}); }

FRef FormulaTable::con(std::vector<FRef> fs) {
  std::vector<FRef> kids;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    FRef f = fs[i];
    if (f == top()) continue;
    if (f == bottom()) return bottom();
    if (kind(f) == FK::And) {
      const auto& ks = at(f).kids;
      fs.insert(fs.end(), ks.begin(), ks.end());
      continue;
    }
    kids.push_back(f);
  }
  std::sort(kids.begin(), kids.end());
  kids.erase(std::unique(kids.begin(), kids.end()), kids.end());

  // A weak literal and its strong negation cannot hold together.
  {
    std::set<AtomId> pos, neg;
    for (FRef k : kids) {
      if (kind(k) == FK::Atom) pos.insert(at(k).atom);
      if (kind(k) == FK::NAtom) neg.insert(at(k).atom);
    }
    for (AtomId a : pos)
      if (neg.count(a)) return bottom();
  }

  // Literals whose window is the current instant always evaluate, so an
  // arithmetically impossible combination sinks the conjunction.
  {
    Cube total;
    for (FRef k : kids) {
      if (kind(k) == FK::Atom && atom_total(at(k).atom))
        total.push_back(at(k).atom);
      else if (kind(k) == FK::NAtom && atom_total(at(k).atom))
        total.push_back(atoms().neg(at(k).atom));
    }
    std::sort(total.begin(), total.end());
    total.erase(std::unique(total.begin(), total.end()), total.end());
    if (total.size() >= 2 && !eng_->sat_cube(total)) return bottom();
  }

  // X f && X g  ==  X (f && g); the strong flavor wins when mixed.
  {
    std::vector<FRef> xs_args, xw_args, rest;
    for (FRef k : kids) {
      if (kind(k) == FK::Xs)
        xs_args.push_back(at(k).kids[0]);
      else if (kind(k) == FK::Xw)
        xw_args.push_back(at(k).kids[0]);
      else
        rest.push_back(k);
    }
    if (xs_args.size() + xw_args.size() >= 2) {
      std::vector<FRef> inner = xs_args;
      inner.insert(inner.end(), xw_args.begin(), xw_args.end());
      FRef merged =
          xs_args.empty() ? xw(con(std::move(inner))) : xs(con(std::move(inner)));
      rest.push_back(merged);
      return con(std::move(rest));
    }
  }

  // Drop conjuncts entailed by a sibling.
  std::vector<bool> dropped(kids.size(), false);
  for (std::size_t j = 0; j < kids.size(); ++j) {
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i == j || dropped[i] || dropped[j]) continue;
      if (ent(kids[i], kids[j]) && (!ent(kids[j], kids[i]) || i < j)) {
        dropped[j] = true;
        break;
      }
    }
  }
  std::vector<FRef> final_kids;
  for (std::size_t i = 0; i < kids.size(); ++i)
    if (!dropped[i]) final_kids.push_back(kids[i]);

  if (final_kids.empty()) return top();
  if (final_kids.size() == 1) return final_kids[0];
  return intern(FNode{FK::And, -1, std::move(final_kids)});
}

FRef FormulaTable::dis(std::vector<FRef> fs) {
  std::vector<FRef> kids;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    FRef f = fs[i];
    if (f == bottom()) continue;
    if (f == top()) return top();
    if (kind(f) == FK::Or) {
      const auto& ks = at(f).kids;
      fs.insert(fs.end(), ks.begin(), ks.end());
      continue;
    }
    kids.push_back(f);
  }
  std::sort(kids.begin(), kids.end());
  kids.erase(std::unique(kids.begin(), kids.end()), kids.end());

  // A weak literal or its strong negation: one of them holds everywhere.
  {
    std::set<AtomId> pos, neg;
    for (FRef k : kids) {
      if (kind(k) == FK::Atom) pos.insert(at(k).atom);
      if (kind(k) == FK::NAtom) neg.insert(at(k).atom);
    }
    for (AtomId a : pos)
      if (neg.count(a)) return top();
  }

  // Weak literals are true whenever their window leaves the trace, so an
  // arithmetically exhaustive set of them covers every instant.  Strong
  // negated literals join only when their window is the current instant.
  {
    Cube refute;
    for (FRef k : kids) {
      if (kind(k) == FK::Atom)
        refute.push_back(atoms().neg(at(k).atom));
      else if (kind(k) == FK::NAtom && atom_total(at(k).atom))
        refute.push_back(at(k).atom);
      // non-total strong literals simply don't participate
    }
    std::sort(refute.begin(), refute.end());
    refute.erase(std::unique(refute.begin(), refute.end()), refute.end());
    if (refute.size() >= 2 && !eng_->sat_cube(refute)) return top();
  }

  // X f || X g  ==  X (f || g); the weak flavor wins when mixed.
  {
    std::vector<FRef> xs_args, xw_args, rest;
    for (FRef k : kids) {
      if (kind(k) == FK::Xs)
        xs_args.push_back(at(k).kids[0]);
      else if (kind(k) == FK::Xw)
        xw_args.push_back(at(k).kids[0]);
      else
        rest.push_back(k);
    }
    if (xs_args.size() + xw_args.size() >= 2) {
      std::vector<FRef> inner = xs_args;
      inner.insert(inner.end(), xw_args.begin(), xw_args.end());
      FRef merged =
          xw_args.empty() ? xs(dis(std::move(inner))) : xw(dis(std::move(inner)));
      rest.push_back(merged);
      return dis(std::move(rest));
    }
  }

  // Drop disjuncts that entail a sibling (the weaker one absorbs them).
  std::vector<bool> dropped(kids.size(), false);
  for (std::size_t j = 0; j < kids.size(); ++j) {
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i == j || dropped[i] || dropped[j]) continue;
      if (ent(kids[j], kids[i]) && (!ent(kids[i], kids[j]) || i < j)) {
        dropped[j] = true;
        break;
      }
    }
  }
  std::vector<FRef> final_kids;
  for (std::size_t i = 0; i < kids.size(); ++i)
    if (!dropped[i]) final_kids.push_back(kids[i]);

  if (final_kids.empty()) return bottom();
  if (final_kids.size() == 1) return final_kids[0];
  return intern(FNode{FK::Or, -1, std::move(final_kids)});
}

FRef FormulaTable::xs(FRef f) {
  if (f == bottom()) return bottom();
  return intern(FNode{FK::Xs, -1, {f}});
}

FRef FormulaTable::xw(FRef f) {
  if (f == top()) return top();
  return intern(FNode{FK::Xw, -1, {f}});
}

FRef FormulaTable::until(FRef a, FRef b) {
  if (b == top()) return top();
  if (b == bottom()) return bottom();
  if (a == bottom()) return b;
  if (a == top()) return eventually(b);
  return intern(FNode{FK::U, -1, {a, b}});
}

FRef FormulaTable::globally(FRef f) {
  if (f == top() || f == bottom()) return f;
  if (kind(f) == FK::G) return f;
  return intern(FNode{FK::G, -1, {f}});
}

FRef FormulaTable::eventually(FRef f) {
  if (f == top() || f == bottom()) return f;
  if (kind(f) == FK::F) return f;
  return intern(FNode{FK::F, -1, {f}});
}

/* ------------------------------------------------------------- entailment */

bool FormulaTable::ent(FRef a, FRef b) {
  if (a == b) return true;
  if (b == top() || a == bottom()) return true;
  if (a == top() || b == bottom()) return false;
  auto key = std::make_pair(a, b);
  auto it = ent_memo_.find(key);
  if (it != ent_memo_.end()) return it->second;
  // Seed with false: the rules below only recurse on strictly smaller
  // right-hand or left-hand sides, so cycles cannot occur, but the seed keeps
  // a would-be cycle conservative rather than wrong.
  ent_memo_.emplace(key, false);
  bool r = ent_core(a, b);
  ent_memo_[key] = r;
  return r;
}

bool FormulaTable::ent_core(FRef a, FRef b) {
  const FNode& na = nodes_[a];
  const FNode& nb = nodes_[b];

  if (nb.kind == FK::And) {
    bool all = true;
    for (FRef k : nb.kids)
      if (!ent(a, k)) {
        all = false;
        break;
      }
    if (all) return true;
  }
  if (nb.kind == FK::Or) {
    for (FRef k : nb.kids)
      if (ent(a, k)) return true;
  }
  if (na.kind == FK::And) {
    for (FRef k : na.kids)
      if (ent(k, b)) return true;
  }
  if (na.kind == FK::Or) {
    bool all = true;
    for (FRef k : na.kids)
      if (!ent(k, b)) {
        all = false;
        break;
      }
    if (all) return true;
  }

  if (na.kind == FK::G && ent(na.kids[0], b)) return true;
  if (nb.kind == FK::F && ent(a, nb.kids[0])) return true;
  if (nb.kind == FK::U && ent(a, nb.kids[1])) return true;
  if (na.kind == FK::G && nb.kind == FK::Xw && ent(a, nb.kids[0])) return true;
  if (na.kind == FK::G && nb.kind == FK::G && ent(na.kids[0], nb.kids[0]))
    return true;
  if (na.kind == FK::F && nb.kind == FK::F && ent(na.kids[0], nb.kids[0]))
    return true;
  if (na.kind == FK::U && nb.kind == FK::U && ent(na.kids[0], nb.kids[0]) &&
      ent(na.kids[1], nb.kids[1]))
    return true;
  if (na.kind == FK::U && nb.kind == FK::F && ent(na.kids[1], nb.kids[0]))
    return true;
  if (na.kind == FK::Xs && (nb.kind == FK::Xs || nb.kind == FK::Xw) &&
      ent(na.kids[0], nb.kids[0]))
    return true;
  if (na.kind == FK::Xw && nb.kind == FK::Xw && ent(na.kids[0], nb.kids[0]))
    return true;

  AtomTable& at_ = eng_->atoms();
  auto band = [&](AtomId x) {
    auto w = at_.offset_band(x);
    return w ? *w : std::pair<int, int>{0, 0};
  };
  auto unsat2 = [&](AtomId x, AtomId y) {
    Cube c{std::min(x, y), std::max(x, y)};
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return !eng_->sat_cube(c);
  };
  if (na.kind == FK::Atom && nb.kind == FK::Atom) {
    auto [l1, h1] = band(na.atom);
    auto [l2, h2] = band(nb.atom);
    // b's window must cover a's: wherever b evaluates, a does too.
    if (l1 >= l2 && h1 <= h2 && unsat2(na.atom, at_.neg(nb.atom))) return true;
  }
  if (na.kind == FK::NAtom && nb.kind == FK::NAtom) {
    auto [l1, h1] = band(na.atom);
    auto [l2, h2] = band(nb.atom);
    // a asserts its window evaluates; b's must then evaluate as well.
    if (l2 >= l1 && h2 <= h1 && unsat2(nb.atom, at_.neg(na.atom))) return true;
  }
  if (na.kind == FK::NAtom && nb.kind == FK::Atom) {
    // not-c1 with an evaluating window forces c2 wherever c2 evaluates.
    if (unsat2(at_.neg(na.atom), at_.neg(nb.atom))) return true;
  }
  return false;
}

/* -------------------------------------------------------------- utilities */

void FormulaTable::collect_atoms(FRef f, std::set<AtomId>& out) const {
  const FNode& n = nodes_[f];
  if (n.kind == FK::Atom || n.kind == FK::NAtom) {
    out.insert(n.atom);
    return;
  }
  for (FRef k : n.kids) collect_atoms(k, out);
}

namespace {
/* Precedence: unary 4, U 3, && 2, || 1. */
int level(FK k) {
  switch (k) {
    case FK::And: return 2;
    case FK::Or: return 1;
    case FK::U: return 3;
    default: return 4;
  }
}
}  // namespace

std::string FormulaTable::show(FRef f, int style) const {
  const FNode& n = nodes_[f];
  auto child = [&](FRef k, int need) {
    std::string s = show(k, style);
    if (level(nodes_[k].kind) < need) return "(" + s + ")";
    return s;
  };
  switch (n.kind) {
    case FK::True: return "true";
    case FK::False: return "false";
    case FK::Atom: return eng_->atoms().show(n.atom, style);
    case FK::NAtom: return "!(" + eng_->atoms().show(n.atom, style) + ")";
    case FK::And: {
      std::string s;
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        if (i) s += " && ";
        s += child(n.kids[i], 3);
      }
      return s;
    }
    case FK::Or: {
      std::string s;
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        if (i) s += " || ";
        s += child(n.kids[i], 2);
      }
      return s;
    }
    case FK::U:
      return child(n.kids[0], 4) + " U " + child(n.kids[1], 3);
    case FK::Xs: return "X " + child(n.kids[0], 4);
    case FK::Xw: return "wX " + child(n.kids[0], 4);
    case FK::G: return "G " + child(n.kids[0], 4);
    case FK::F: return "F " + child(n.kids[0], 4);
  }
  return "?";
}

}  // namespace rvmon

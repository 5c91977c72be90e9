#include "rvmon/atoms.hpp"

#include <algorithm>
#include <numeric>

namespace rvmon {

bool operator<(const LinAtom& a, const LinAtom& b) {
  if (a.rel != b.rel) return a.rel < b.rel;
  if (a.mod != b.mod) return a.mod < b.mod;
  if (a.cst != b.cst) return a.cst < b.cst;
  return a.coeffs < b.coeffs;
}

namespace {

Int gcd_all(const std::vector<std::pair<TermId, Int>>& coeffs) {
  Int g = 0;
  for (const auto& [t, c] : coeffs) {
    Int a = abs(c);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
  }
  return g;
}

}  // namespace

std::optional<bool> AtomTable::check(const LinAtom& la, const Rat& value) {
  switch (la.rel) {
    case Rel::Eq:
      return value == 0;
    case Rel::Ne:
      return value != 0;
    case Rel::Le:
      return value <= 0;
    case Rel::Lt:
      return value < 0;
    case Rel::ModEq:
    case Rel::ModNe: {
      if (!is_integral(value))
        throw ValueError("congruence over a non-integer value");
      Int n(value.get_num());
      bool eq = euclid_mod(n, la.mod) == 0;
      return la.rel == Rel::ModEq ? eq : !eq;
    }
  }
  return std::nullopt;
}

AtomOrConst AtomTable::canonicalize(LinAtom la) {
  // Constant fold when no terms remain.
  auto fold = [&]() -> AtomOrConst {
    Rat v(la.cst);
    return AtomOrConst{std::nullopt, *check(la, v)};
  };
  if (la.coeffs.empty()) return fold();

  // Establish the (single) sort.
  la.sort = vars_->sort_of_term(la.coeffs.front().first);
  for (const auto& [t, c] : la.coeffs)
    if (vars_->sort_of_term(t) != la.sort)
      throw ValueError("atom mixes int and rat variables");

  bool is_int = la.sort == Sort::Int;

  if (la.rel == Rel::ModEq || la.rel == Rel::ModNe) {
    if (!is_int) throw ValueError("congruence atom over rational variables");
    if (la.mod < 1) throw ValueError("congruence modulus must be >= 1");
    // Divide the whole form by its gcd; the modulus shrinks by gcd(g, m):
    // g*f ==_m 0  <=>  f ==_{m/gcd(g,m)} 0.
    {
      Int g = gcd_all(la.coeffs);
      Int ac = abs(la.cst);
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ac.get_mpz_t());
      if (g > 1) {
        for (auto& [t, c] : la.coeffs) c /= g;
        la.cst /= g;
        Int d;
        mpz_gcd(d.get_mpz_t(), g.get_mpz_t(), la.mod.get_mpz_t());
        la.mod /= d;
        if (la.mod == 1) return fold();
      }
    }
    // Reduce into [0, m); drop vanished coefficients.
    std::vector<std::pair<TermId, Int>> red;
    for (auto& [t, c] : la.coeffs) {
      Int r = euclid_mod(c, la.mod);
      if (r != 0) red.emplace_back(t, r);
    }
    la.coeffs = std::move(red);
    la.cst = euclid_mod(la.cst, la.mod);
    if (la.coeffs.empty()) return fold();
    // Pick the lexicographically smaller of f and -f (both valid forms).
    LinAtom alt = la;
    for (auto& [t, c] : alt.coeffs) c = euclid_mod(-c, la.mod);
    alt.cst = euclid_mod(-la.cst, la.mod);
    std::erase_if(alt.coeffs, [](const auto& p) { return p.second == 0; });
    if (!alt.coeffs.empty() && alt < la) la = alt;
    return AtomOrConst{intern(std::move(la)), false};
  }

  if (la.rel == Rel::Eq || la.rel == Rel::Ne) {
    Int g = gcd_all(la.coeffs);
    if (is_int) {
      if (euclid_mod(la.cst, g) != 0) {
        // g | f(terms) always; f = 0 impossible.
        return AtomOrConst{std::nullopt, la.rel == Rel::Ne};
      }
      for (auto& [t, c] : la.coeffs) c /= g;
      la.cst /= g;
    } else {
      Int ac = abs(la.cst);
      Int gg;
      mpz_gcd(gg.get_mpz_t(), g.get_mpz_t(), ac.get_mpz_t());
      if (gg == 0) gg = g;
      if (gg > 1) {
        for (auto& [t, c] : la.coeffs) c /= gg;
        la.cst /= gg;
      }
    }
    if (la.coeffs.front().second < 0) {
      for (auto& [t, c] : la.coeffs) c = -c;
      la.cst = -la.cst;
    }
    return AtomOrConst{intern(std::move(la)), false};
  }

  // Le / Lt.
  if (is_int && la.rel == Rel::Lt) {
    la.rel = Rel::Le;
    la.cst += 1;
  }
  Int g = gcd_all(la.coeffs);
  if (is_int) {
    if (g > 1) {
      for (auto& [t, c] : la.coeffs) c /= g;
      // f <= 0 with f = g*f' + c: f' <= floor(-c/g) i.e. new cst = -floor(-c/g)
      Int q;
      Int negc = -la.cst;
      mpz_fdiv_q(q.get_mpz_t(), negc.get_mpz_t(), g.get_mpz_t());
      la.cst = -q;
    }
  } else {
    Int ac = abs(la.cst);
    Int gg;
    mpz_gcd(gg.get_mpz_t(), g.get_mpz_t(), ac.get_mpz_t());
    if (gg == 0) gg = g;
    if (gg > 1) {
      for (auto& [t, c] : la.coeffs) c /= gg;
      la.cst /= gg;
    }
  }
  return AtomOrConst{intern(std::move(la)), false};
}

LinAtom AtomTable::complement(const LinAtom& la) const {
  LinAtom out = la;
  switch (la.rel) {
    case Rel::Eq:
      out.rel = Rel::Ne;
      return out;
    case Rel::Ne:
      out.rel = Rel::Eq;
      return out;
    case Rel::ModEq:
      out.rel = Rel::ModNe;
      return out;
    case Rel::ModNe:
      out.rel = Rel::ModEq;
      return out;
    case Rel::Le:
      // not(f <= 0)  ==  -f < 0
      out.rel = Rel::Lt;
      break;
    case Rel::Lt:
      // not(f < 0)  ==  -f <= 0
      out.rel = Rel::Le;
      break;
  }
  for (auto& [t, c] : out.coeffs) c = -c;
  out.cst = -la.cst;
  if (out.sort == Sort::Int && out.rel == Rel::Lt) {
    out.rel = Rel::Le;
    out.cst += 1;
  }
  return out;
}

AtomId AtomTable::intern(LinAtom la) {
  auto it = index_.find(la);
  if (it != index_.end()) return it->second;

  AtomId id = static_cast<AtomId>(atoms_.size());
  index_.emplace(la, id);
  atoms_.push_back(la);
  neg_.push_back(-1);
  {
    std::vector<TermId> ts;
    ts.reserve(la.coeffs.size());
    for (const auto& [t, c] : la.coeffs) ts.push_back(t);
    term_sets_.push_back(std::move(ts));
  }

  LinAtom comp = complement(la);
  auto jt = index_.find(comp);
  AtomId cid;
  if (jt != index_.end()) {
    cid = jt->second;
  } else {
    cid = static_cast<AtomId>(atoms_.size());
    index_.emplace(comp, cid);
    atoms_.push_back(comp);
    neg_.push_back(-1);
    std::vector<TermId> ts;
    for (const auto& [t, c] : comp.coeffs) ts.push_back(t);
    term_sets_.push_back(std::move(ts));
  }
  neg_[id] = cid;
  neg_[cid] = id;
  return id;
}

AtomOrConst AtomTable::make(const LinExpr& lhs, CmpOp op, const LinExpr& rhs,
                            const Int& m) {
  LinExpr diff = lhs;
  diff.add_scaled(rhs, Rat(-1));

  // Integer-scale by the lcm of denominators.
  Int scale(1);
  auto fold_den = [&scale](const Rat& r) {
    Rat c = r;
    c.canonicalize();
    Int den = c.get_den();
    mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), den.get_mpz_t());
  };
  for (const auto& [t, c] : diff.coeffs) fold_den(c);
  fold_den(diff.cst);

  LinAtom la;
  for (const auto& [t, c] : diff.coeffs) {
    Rat scaled = c * Rat(scale);
    scaled.canonicalize();
    la.coeffs.emplace_back(t, Int(scaled.get_num()));
  }
  std::sort(la.coeffs.begin(), la.coeffs.end());
  Rat scaled_cst = diff.cst * Rat(scale);
  scaled_cst.canonicalize();
  la.cst = Int(scaled_cst.get_num());
  la.mod = m;
  switch (op) {
    case CmpOp::Eq: la.rel = Rel::Eq; break;
    case CmpOp::Ne: la.rel = Rel::Ne; break;
    case CmpOp::Le: la.rel = Rel::Le; break;
    case CmpOp::Lt: la.rel = Rel::Lt; break;
    case CmpOp::ModEq: la.rel = Rel::ModEq; break;
    case CmpOp::ModNe: la.rel = Rel::ModNe; break;
  }
  if (la.rel == Rel::ModEq || la.rel == Rel::ModNe) {
    if (scale != 1)
      throw ValueError("congruence atom with fractional coefficients");
  }
  return canonicalize(std::move(la));
}

AtomOrConst AtomTable::subst_term(AtomId a, TermId from, TermId to) {
  std::map<TermId, TermId> m;
  m[from] = to;
  return rename(a, m);
}

AtomOrConst AtomTable::rename(AtomId a, const std::map<TermId, TermId>& map) {
  const LinAtom& la = atoms_[a];
  LinExpr e;
  for (const auto& [t, c] : la.coeffs) {
    auto it = map.find(t);
    e.add_term(it == map.end() ? t : it->second, Rat(c));
  }
  e.add_const(Rat(la.cst));
  LinExpr zero;
  CmpOp op = CmpOp::Eq;
  switch (la.rel) {
    case Rel::Eq: op = CmpOp::Eq; break;
    case Rel::Ne: op = CmpOp::Ne; break;
    case Rel::Le: op = CmpOp::Le; break;
    case Rel::Lt: op = CmpOp::Lt; break;
    case Rel::ModEq: op = CmpOp::ModEq; break;
    case Rel::ModNe: op = CmpOp::ModNe; break;
  }
  return make(e, op, zero, la.mod);
}

AtomOrConst AtomTable::subst_value(AtomId a, TermId from, const Rat& value) {
  const LinAtom& la = atoms_[a];
  LinExpr e;
  for (const auto& [t, c] : la.coeffs) {
    if (t == from) {
      Rat prod = Rat(c) * value;
      e.add_const(prod);
    } else {
      e.add_term(t, Rat(c));
    }
  }
  e.add_const(Rat(la.cst));
  LinExpr zero;
  CmpOp op = CmpOp::Eq;
  switch (la.rel) {
    case Rel::Eq: op = CmpOp::Eq; break;
    case Rel::Ne: op = CmpOp::Ne; break;
    case Rel::Le: op = CmpOp::Le; break;
    case Rel::Lt: op = CmpOp::Lt; break;
    case Rel::ModEq: op = CmpOp::ModEq; break;
    case Rel::ModNe: op = CmpOp::ModNe; break;
  }
  return make(e, op, zero, la.mod);
}

bool AtomTable::is_mc(AtomId a) const {
  const LinAtom& la = atoms_[a];
  if (la.rel == Rel::ModEq || la.rel == Rel::ModNe) return false;
  if (la.coeffs.size() == 1) return abs(la.coeffs[0].second) == 1;
  if (la.coeffs.size() == 2) {
    const Int& c0 = la.coeffs[0].second;
    const Int& c1 = la.coeffs[1].second;
    if (!((c0 == 1 && c1 == -1) || (c0 == -1 && c1 == 1))) return false;
    if (la.cst == 0) return true;
    // x < y over the integers canonicalizes to x - y + 1 <= 0.
    return la.sort == Sort::Int && la.rel == Rel::Le && la.cst == 1;
  }
  return false;
}

bool AtomTable::is_ipc(AtomId a) const {
  const LinAtom& la = atoms_[a];
  if (la.sort != Sort::Int) return false;
  if (la.rel == Rel::ModEq || la.rel == Rel::ModNe) {
    if (la.coeffs.size() == 1) return la.coeffs[0].second == 1;
    if (la.coeffs.size() == 2) {
      const Int& c0 = la.coeffs[0].second;
      const Int& c1 = la.coeffs[1].second;
      return (c0 == 1 && c1 == la.mod - 1) || (c0 == la.mod - 1 && c1 == 1);
    }
    return false;
  }
  if (la.coeffs.size() == 1) return abs(la.coeffs[0].second) == 1;
  if (la.coeffs.size() == 2) {
    // variable-to-variable equality only
    const Int& c0 = la.coeffs[0].second;
    const Int& c1 = la.coeffs[1].second;
    return la.rel == Rel::Eq && la.cst == 0 &&
           ((c0 == 1 && c1 == -1) || (c0 == -1 && c1 == 1));
  }
  return false;
}

bool AtomTable::is_gap(AtomId a) const {
  const LinAtom& la = atoms_[a];
  if (la.sort != Sort::Int) return false;
  if (la.rel == Rel::ModEq || la.rel == Rel::ModNe) return false;
  if (la.coeffs.size() != 2) return false;
  const Int& c0 = la.coeffs[0].second;
  const Int& c1 = la.coeffs[1].second;
  return (c0 == 1 && c1 == -1) || (c0 == -1 && c1 == 1);
}

std::vector<Rat> AtomTable::constants(AtomId a) const {
  const LinAtom& la = atoms_[a];
  if (la.rel == Rel::ModEq || la.rel == Rel::ModNe) return {};
  if (la.coeffs.size() == 1) {
    Rat d = Rat(-la.cst) / Rat(la.coeffs[0].second);
    d.canonicalize();
    return {d};
  }
  return {Rat(-la.cst)};
}

std::vector<Int> AtomTable::moduli(AtomId a) const {
  const LinAtom& la = atoms_[a];
  if (la.rel == Rel::ModEq || la.rel == Rel::ModNe) return {la.mod};
  return {};
}

std::optional<int> AtomTable::max_look(AtomId a) const {
  std::optional<int> out;
  for (TermId t : term_sets_[a]) {
    const TermInfo& ti = vars_->info(t);
    if (ti.role == Role::Look)
      out = out ? std::max(*out, ti.look) : ti.look;
  }
  return out;
}

std::optional<int> AtomTable::min_look(AtomId a) const {
  std::optional<int> out;
  for (TermId t : term_sets_[a]) {
    const TermInfo& ti = vars_->info(t);
    if (ti.role == Role::Look)
      out = out ? std::min(*out, ti.look) : ti.look;
  }
  return out;
}

bool AtomTable::mentions_role(AtomId a, Role r) const {
  for (TermId t : term_sets_[a])
    if (vars_->info(t).role == r) return true;
  return false;
}

std::optional<std::pair<int, int>> AtomTable::offset_band(AtomId a) const {
  std::optional<std::pair<int, int>> out;
  auto fold = [&](int off) {
    if (!out)
      out = {off, off};
    else
      out = {std::min(out->first, off), std::max(out->second, off)};
  };
  for (TermId t : term_sets_[a]) {
    const TermInfo& ti = vars_->info(t);
    switch (ti.role) {
      case Role::Pre: fold(-1); break;
      case Role::Cur: fold(0); break;
      case Role::Look: fold(ti.look); break;
      default: break;
    }
  }
  return out;
}

std::string AtomTable::show(AtomId a, int style) const {
  LinAtom la = atoms_[a];
  if (la.rel == Rel::ModEq || la.rel == Rel::ModNe) {
    // Balanced residues read like the surface syntax (x =_k y + d).
    for (auto& [t, c] : la.coeffs)
      if (2 * c > la.mod) c -= la.mod;
    if (2 * la.cst > la.mod) la.cst -= la.mod;
  }
  auto side = [&](bool positive) {
    std::string s;
    for (const auto& [t, c] : la.coeffs) {
      if ((c > 0) != positive) continue;
      Int mag = abs(c);
      if (!s.empty()) s += " + ";
      if (mag != 1) s += mag.get_str() + "*";
      s += vars_->term_name(t, style);
    }
    bool cpos = la.cst > 0;
    if (la.cst != 0 && cpos == positive) {
      Int mag = abs(la.cst);
      if (!s.empty()) s += " + ";
      s += mag.get_str();
    }
    if (s.empty()) s = "0";
    return s;
  };
  std::string op;
  switch (la.rel) {
    case Rel::Eq: op = "="; break;
    case Rel::Ne: op = "!="; break;
    case Rel::Le: op = "<="; break;
    case Rel::Lt: op = "<"; break;
    case Rel::ModEq: op = "=_" + la.mod.get_str(); break;
    case Rel::ModNe: op = "!=_" + la.mod.get_str(); break;
  }
  bool pos_term = false, neg_term = false;
  for (const auto& [t, c] : la.coeffs) (c > 0 ? pos_term : neg_term) = true;
  if (!pos_term && neg_term) {
    // Keep variables on the left: render from the negated side.
    if (la.rel == Rel::Le) op = ">=";
    if (la.rel == Rel::Lt) op = ">";
    return side(false) + " " + op + " " + side(true);
  }
  return side(true) + " " + op + " " + side(false);
}

}  // namespace rvmon

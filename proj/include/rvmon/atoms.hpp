#pragma once
/*
 * Canonical linear-arithmetic atoms.
 *
 * Every atom is normalized to   f REL 0   where f is an integer-scaled
 * linear form over interned terms:
 *
 *   Eq / Ne       f = 0, f != 0      (sign-normalized: first coeff > 0)
 *   Le / Lt       f <= 0, f < 0     (Lt only over the rational sort: over
 *                                    the integer sort f < 0 is tightened to
 *                                    f + 1 <= 0 during canonicalization)
 *   ModEq / ModNe f ==_m 0, f !=_m 0 (integer sort only; coefficients and
 *                                    constant reduced into [0, m))
 *
 * Forms are gcd-reduced, so syntactic equality of canonical atoms coincides
 * with equality of the constraints up to scaling.  Atoms are interned into
 * an AtomTable; the table also precomputes each atom's complement.
 *
 * An atom is single-sorted: all of its terms share one sort.  Atoms whose
 * form has no terms fold to constants before interning.
 */

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rvmon/value.hpp"
#include "rvmon/vars.hpp"

namespace rvmon {

using AtomId = int32_t;

enum class Rel : uint8_t { Eq, Ne, Le, Lt, ModEq, ModNe };

struct LinAtom {
  std::vector<std::pair<TermId, Int>> coeffs;  // sorted by TermId, nonzero
  Int cst = 0;
  Rel rel = Rel::Eq;
  Int mod = 0;  // >= 2 for ModEq/ModNe, else 0
  Sort sort = Sort::Rat;

  bool operator==(const LinAtom&) const = default;
};

/* A not-yet-canonical linear expression with rational coefficients, the
 * parser/substitution workspace. */
struct LinExpr {
  std::map<TermId, Rat> coeffs;
  Rat cst = 0;

  void add_term(TermId t, const Rat& c) {
    auto it = coeffs.find(t);
    if (it == coeffs.end()) {
      if (c != 0) coeffs.emplace(t, c);
    } else {
      it->second += c;
      if (it->second == 0) coeffs.erase(it);
    }
  }
  void add_const(const Rat& c) { cst += c; }
  void add_scaled(const LinExpr& e, const Rat& k) {
    for (const auto& [t, c] : e.coeffs) {
      Rat prod = c * k;
      add_term(t, prod);
    }
    Rat prod = e.cst * k;
    add_const(prod);
  }
};

/* Result of atom construction: a real atom, or a constant truth value when
 * the constraint had no free terms (or was vacuous / impossible). */
struct AtomOrConst {
  std::optional<AtomId> atom;  // set unless constant
  bool constant = false;       // meaningful when !atom
};

/* Surface comparison operators (>, >= are normalized away by side swap). */
enum class CmpOp : uint8_t { Eq, Ne, Le, Lt, ModEq, ModNe };

class AtomTable {
 public:
  explicit AtomTable(VarTable& vars) : vars_(&vars) {}

  /* Build the canonical atom for  lhs OP rhs  (modulus m for ModEq/ModNe).
   * Throws ValueError for mixed-sort atoms, nonlinear input is excluded by
   * construction of LinExpr.  Returns a constant when term-free. */
  AtomOrConst make(const LinExpr& lhs, CmpOp op, const LinExpr& rhs,
                   const Int& m = 0);

  /* Complement: the canonical atom of the negated constraint.  Involutive. */
  AtomId neg(AtomId a) const { return neg_[a]; }

  const LinAtom& at(AtomId a) const { return atoms_[a]; }
  int count() const { return static_cast<int>(atoms_.size()); }

  /* Substitution: rewrite term t as another term (same sort). */
  AtomOrConst subst_term(AtomId a, TermId from, TermId to);
  /* Substitution by an exact value. */
  AtomOrConst subst_value(AtomId a, TermId from, const Rat& value);
  /* Simultaneous term renaming over the whole atom. */
  AtomOrConst rename(AtomId a, const std::map<TermId, TermId>& map);

  /* Exact evaluation; nullopt when some term has no value ("not well
   * defined").  getter returns nullopt for absent terms. */
  template <typename Getter>
  std::optional<bool> eval(AtomId a, Getter&& getter) const {
    const LinAtom& la = atoms_[a];
    Rat acc(la.cst);
    for (const auto& [t, c] : la.coeffs) {
      std::optional<Rat> v = getter(t);
      if (!v) return std::nullopt;
      Rat prod = Rat(c) * *v;
      acc += prod;
    }
    return check(la, acc);
  }

  /* --- shape queries (monitorable-fragment detection) ------------------- */
  bool is_mc(AtomId a) const;       // p OP q, p/q variable-or-constant
  bool is_ipc(AtomId a) const;      // x=y | x OP d | x ==_k y+d | x ==_k d
  bool is_gap(AtomId a) const;      // integer difference with offset (x-y>=k)
  /* MC/gap "compared constant" values of the atom (canonical scale). */
  std::vector<Rat> constants(AtomId a) const;
  std::vector<Int> moduli(AtomId a) const;

  /* --- occurrence queries ---------------------------------------------- */
  const std::vector<TermId>& terms_of(AtomId a) const { return term_sets_[a]; }
  /* Largest / smallest Look offset among terms; nullopt if no Look terms. */
  std::optional<int> max_look(AtomId a) const;
  std::optional<int> min_look(AtomId a) const;
  bool mentions_role(AtomId a, Role r) const;

  /* Offset band for banded/state atoms: Pre counts as -1, Cur as 0, Look(k)
   * as k; Init/Tmp are ignored.  Used by entailment boundary guards. */
  std::optional<std::pair<int, int>> offset_band(AtomId a) const;

  std::string show(AtomId a, int style) const;

  VarTable& vars() { return *vars_; }
  const VarTable& vars() const { return *vars_; }

 private:
  AtomId intern(LinAtom la);
  AtomOrConst canonicalize(LinAtom la);
  static std::optional<bool> check(const LinAtom& la, const Rat& value);
  LinAtom complement(const LinAtom& la) const;

  VarTable* vars_;
  std::vector<LinAtom> atoms_;
  std::vector<AtomId> neg_;
  std::vector<std::vector<TermId>> term_sets_;
  std::map<LinAtom, AtomId> index_;
};

bool operator<(const LinAtom& a, const LinAtom& b);

}  // namespace rvmon

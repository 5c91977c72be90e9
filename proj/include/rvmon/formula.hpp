#pragma once

/* Temporal formulas over linear-constraint atoms, finite-trace semantics.
 *
 * Nodes are hash-consed: structurally equal formulas share one id, so
 * equality of ids is equality of normal forms.  The builders apply local
 * canonicalization (flattening, unit folding, complementary-literal folds,
 * next-operator merging, entailment absorption), which keeps the residual
 * formulas produced during automaton construction in a small normal form.
 *
 * Literal semantics over a finite trace:
 *   - a positive literal whose value window leaves the trace holds;
 *   - a negated literal additionally asserts the window stays inside.
 * X is the strong next (requires a successor), wX the weak one.
 */

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "rvmon/arith.hpp"

namespace rvmon {

enum class FK : uint8_t {
  True,
  False,
  Atom,   // weak positive literal
  NAtom,  // strong negated literal
  And,
  Or,
  Xs,  // strong next
  Xw,  // weak next
  U,   // until (kids[0] U kids[1])
  G,
  F,
};

using FRef = int32_t;

struct FNode {
  FK kind = FK::True;
  AtomId atom = -1;
  std::vector<FRef> kids;

  friend bool operator==(const FNode& a, const FNode& b) {
    return a.kind == b.kind && a.atom == b.atom && a.kids == b.kids;
  }
  friend bool operator<(const FNode& a, const FNode& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.atom != b.atom) return a.atom < b.atom;
    return a.kids < b.kids;
  }
};

struct Workspace;

class FormulaTable {
 public:
  explicit FormulaTable(ArithEngine& eng);

  FRef top() const { return 0; }
  FRef bottom() const { return 1; }
  FRef atom(AtomId a);
  FRef natom(AtomId a);
  FRef con(std::vector<FRef> fs);
  FRef dis(std::vector<FRef> fs);
  FRef xs(FRef f);
  FRef xw(FRef f);
  FRef until(FRef a, FRef b);
  FRef globally(FRef f);
  FRef eventually(FRef f);

  const FNode& at(FRef f) const { return nodes_[f]; }
  FK kind(FRef f) const { return nodes_[f].kind; }
  std::size_t count() const { return nodes_.size(); }

  /* Conservative entailment: true means a |= b in every model; false means
   * unknown.  Used to absorb redundant conjuncts/disjuncts and to compare
   * residuals. */
  bool ent(FRef a, FRef b);

  /* Occurrence data, cached per node. */
  int max_look(FRef f) const { return max_look_[f]; }    // -1: no literals
  int min_look(FRef f) const { return min_look_[f]; }    // INT_MAX: none
  bool mentions_role(FRef f, Role r) const;
  void collect_atoms(FRef f, std::set<AtomId>& out) const;

  /* Parseable rendering (kStyleSurface) / diagnostic rendering. */
  std::string show(FRef f, int style) const;

  AtomTable& atoms() { return eng_->atoms(); }
  ArithEngine& arith() { return *eng_; }

 private:
  FRef intern(FNode n);
  bool atom_total(AtomId a) const;  // value window is exactly the instant
  bool ent_core(FRef a, FRef b);

  ArithEngine* eng_;
  std::vector<FNode> nodes_;
  std::map<FNode, FRef> index_;
  std::vector<int> max_look_;
  std::vector<int> min_look_;
  std::vector<uint8_t> role_mask_;
  std::map<std::pair<FRef, FRef>, bool> ent_memo_;
};

/* One self-contained stack of tables: every stage of the pipeline works
 * against the same interned vocabulary. */
struct Workspace {
  VarTable vars;
  AtomTable atoms{vars};
  ArithEngine arith{atoms};
  FormulaTable formulas{arith};

  Workspace() = default;
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;
};

}  // namespace rvmon

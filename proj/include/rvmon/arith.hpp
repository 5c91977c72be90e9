#pragma once
/*
 * Exact decision procedures for linear arithmetic over the two sorts.
 *
 *   - satisfiability of atom conjunctions (rational sort: Fourier-Motzkin
 *     with equality substitution and disequality splitting; integer sort:
 *     Cooper's quantifier elimination with equality substitution first);
 *   - existential quantifier elimination over DNF;
 *   - equivalence of DNF formulas (two unsatisfiability checks);
 *   - an equivalence-preserving simplifier used to keep summary formulas
 *     readable and canonical;
 *   - the cutoff-capped equivalence used by the integer per-assignment mode.
 *
 * The engine is deliberately self-contained (no external solver); results
 * are exact.  Not thread-safe: each engine instance caches internally.
 */

#include <map>
#include <optional>

#include "rvmon/qf.hpp"

namespace rvmon {

struct UnsupportedFragment : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ArithEngine {
 public:
  explicit ArithEngine(AtomTable& atoms) : atoms_(&atoms) {}

  /* Conjunction satisfiability.  Atoms may mix sorts across the cube (each
   * atom is single-sorted); the cube splits into independent per-sort
   * subproblems. */
  bool sat_cube(const Cube& c);
  bool sat(const Dnf& d);

  /* Structural conjunction / disjunction with syntactic pruning. */
  Dnf and_(const Dnf& a, const Dnf& b);
  Dnf or_(const Dnf& a, const Dnf& b);

  /* Negation (De Morgan expansion back to DNF). */
  Dnf negate(const Dnf& d);

  /* Exists-elimination of the given terms. */
  Dnf eliminate(const Dnf& d, const std::vector<TermId>& targets);

  bool implies(const Dnf& a, const Dnf& b);
  bool equivalent(const Dnf& a, const Dnf& b);

  /* Equivalence-preserving cleanup: drops unsatisfiable cubes, tightens
   * same-hyperplane atoms, folds bound pairs (<= plus >= into =, <= plus !=
   * into <), rewrites through unit equalities, and removes subsumed cubes. */
  Dnf simplify(const Dnf& d);

  /* Equivalence after capping constants of magnitude > K in unit-shaped
   * atoms.  Throws UnsupportedFragment when an atom is not unit-shaped. */
  bool cutoff_equivalent(const Dnf& a, const Dnf& b, const Int& K);
  Dnf cap_constants(const Dnf& d, const Int& K);

  /* Term renaming / value instantiation lifted to DNF. */
  Dnf rename(const Dnf& d, const std::map<TermId, TermId>& m);
  Dnf instantiate(const Dnf& d, const std::map<TermId, Rat>& vals);

  AtomTable& atoms() { return *atoms_; }

 private:
  /* Internal row form: exact rational coefficients, one relation. */
  struct Row {
    std::map<TermId, Rat> coeffs;
    Rat cst = 0;
    Rel rel = Rel::Eq;
    Int mod = 0;
    bool has(TermId t) const { return coeffs.count(t) != 0; }
  };
  using Rows = std::vector<Row>;

  Row row_of(AtomId a) const;
  /* Rebuild a canonical cube from rows; nullopt when some row is constant
   * false (branch dead).  Constant-true rows are dropped. */
  std::optional<Cube> rows_to_cube(const Rows& rows);

  /* Eliminate one term from a conjunction; the result is a disjunction of
   * conjunctions. */
  std::vector<Rows> elim_term_rat(Rows rows, TermId t);
  std::vector<Rows> elim_term_int(Rows rows, TermId t);
  static std::optional<bool> const_check(const Row& r);
  static void split_ne(const Rows& rows, std::size_t idx,
                       std::vector<Rows>& out);

  bool sat_rows(Rows rows);

  AtomTable* atoms_;
  std::map<Cube, bool> sat_memo_;
  std::map<std::pair<std::vector<Cube>, std::vector<Cube>>, bool> imp_memo_;
};

}  // namespace rvmon

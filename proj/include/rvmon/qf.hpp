#pragma once
/*
 * Quantifier-free formulas in disjunctive normal form.
 *
 * A Cube is a conjunction of interned atoms (sorted, deduplicated); a Dnf is
 * a disjunction of cubes.  TRUE is the single empty cube, FALSE has no
 * cubes.  Negative literals do not appear: negation is folded into the
 * complement atom at construction time.
 */

#include <vector>

#include "rvmon/atoms.hpp"

namespace rvmon {

using Cube = std::vector<AtomId>;  // sorted, unique

struct Dnf {
  std::vector<Cube> cubes;

  static Dnf top() { return Dnf{{Cube{}}}; }
  static Dnf bottom() { return Dnf{}; }
  static Dnf single(AtomId a) { return Dnf{{Cube{a}}}; }

  bool is_top() const {
    return cubes.size() == 1 && cubes.front().empty();
  }
  bool is_bottom() const { return cubes.empty(); }
  bool operator==(const Dnf&) const = default;

  /* Sort cubes, drop duplicates.  (Cube contents must already be sorted.) */
  void normalize();
};

/* Sorted-merge of two cubes; false when they contain a complementary atom
 * pair (the conjunction is syntactically inconsistent). */
bool merge_cubes(const AtomTable& atoms, const Cube& a, const Cube& b,
                 Cube& out);

std::vector<TermId> dnf_terms(const AtomTable& atoms, const Dnf& d);

std::string show_cube(const AtomTable& atoms, const Cube& c, int style);
std::string show_dnf(const AtomTable& atoms, const Dnf& d, int style);

}  // namespace rvmon

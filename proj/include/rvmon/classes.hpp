#pragma once
/*
 * Syntactic classification of properties into the fragments the engine can
 * monitor with guarantees, plus the control-flow fallback check.
 *
 * Atom fragments (most specific one covering every atom):
 *   MC_Q / MC_Z    order comparisons between two variables, or between a
 *                  variable and a constant, over a uniform sort
 *   IPC            integer atoms limited to variable equality, comparisons
 *                  against constants, and modular congruences
 *   GAP_ORDER      integer difference bounds with a nonzero offset
 *                  (x - y >= k); summaries over these can grow forever, so
 *                  the monitor refuses them when lookahead is involved
 *   GENERAL_*      anything else within one sort
 *   UNSUPPORTED    atoms spanning several sorts
 *
 * Property classes drive monitor-mode dispatch: lookback-free properties are
 * handled by plain state reachability; MC/IPC fragments have guaranteed
 * finite summaries; BOUNDED_LOOKBACK covers general atoms whose carry
 * structure provably cannot chain unboundedly; UNKNOWN is attempted
 * optimistically under a node budget.
 */

#include <set>
#include <vector>

#include "rvmon/automata.hpp"
#include "rvmon/formula.hpp"

namespace rvmon {

enum class Fragment {
  MC_Q,
  MC_Z,
  IPC,
  GAP_ORDER,
  GENERAL_RAT,
  GENERAL_INT,
  UNSUPPORTED,
};

struct FragmentInfo {
  Fragment fragment = Fragment::UNSUPPORTED;
  /* Comparison constants of the constant-facing atoms (the values a
   * variable is compared or congruent to), used by grid constructions. */
  std::set<Rat> constants;
};

/* Most specific fragment covering every listed atom. */
FragmentInfo classify_atoms(const Workspace& ws,
                            const std::vector<AtomId>& atoms);

enum class PropertyClass {
  NO_LOOKAHEAD,
  MC_Q,
  IPC,
  BOUNDED_LOOKBACK,
  MC_Z,
  UNKNOWN,
  UNSUPPORTED_GC,
};

const char* to_string(PropertyClass c);

/* Sufficient check that cross-instant value carries cannot chain without
 * bound: over the merged step cubes lying on automaton cycles, collapse
 * variable-to-variable equalities, then require the remaining
 * previous-to-current carry edges to form an acyclic relation on the
 * collapsed variable classes.  Sound but incomplete. */
bool bounded_lookback(const Workspace& ws, const Dfa& dfa);

/* Classification of an already-banded property with its automaton. */
PropertyClass detect_class_banded(Workspace& ws, FRef banded, const Dfa& dfa);

/* Convenience entry point from a parsed property; runs the normalization
 * pipeline itself and builds the automaton only when the fallback check
 * needs it. */
PropertyClass detect_class(Workspace& ws, FRef parsed);

}  // namespace rvmon

#pragma once

/* Reference semantics, kept deliberately independent of the automaton
 * pipeline: formulas are evaluated on traces by textbook backward induction
 * over positions, and verdicts are confirmed by closing the set of suffix
 * behaviours over a finite grid of candidate values.  The only shared
 * machinery is the exact atom evaluator — no satisfiability checks, no
 * transition construction.
 */

#include <map>
#include <vector>

#include "rvmon/formula.hpp"
#include "rvmon/trace.hpp"
#include "rvmon/verdict.hpp"

namespace rvmon::oracle {

/* Does the trace at position `pos` satisfy f?  The trace must carry every
 * column f reads (run instrument() first when f was lowered).  Positive
 * literals whose value window leaves the trace hold; negated ones fail. */
bool holds(Workspace& ws, const Trace& tr, FRef f, int pos = 0);

/* Candidate letter values per source variable for continuation search. */
struct Grid {
  std::map<VarIdx, std::vector<Rat>> values;
};

/* A grid read off f's atoms: for rational variables the compared-against
 * thresholds, points between and beyond them (several per gap, so several
 * variables can interleave); for integer variables the nearby integers.
 * Variables of the same sort share candidates, capped at a dozen or so. */
Grid default_grid(Workspace& ws, FRef f);

enum class Wit : uint8_t {
  Found,       // a witness continuation exists in the grid closure
  NoneInGrid,  // the closure finished: no grid continuation does it
  Capped,      // the state cap cut the search short — no claim
};

/* Continuation-closure result for one prefix. */
struct Outcome {
  bool sat_now = false;
  Wit cont_sat = Wit::NoneInGrid;    // some continuation satisfies
  Wit cont_unsat = Wit::NoneInGrid;  // some continuation violates

  /* The verdict under the grid's view of the future. */
  Verdict verdict() const {
    if (sat_now) return cont_unsat == Wit::Found ? Verdict::CS : Verdict::PS;
    return cont_sat == Wit::Found ? Verdict::CV : Verdict::PV;
  }
  /* False when the side the verdict leans on was cut short by the cap. */
  bool decisive() const {
    return (sat_now ? cont_unsat : cont_sat) != Wit::Capped;
  }
};

/* Explores every continuation type over the grid: suffixes are deduplicated
 * by their visible behaviour (the value vector of f's subformulas at the
 * suffix head plus the letters a lookahead atom can still read), so the
 * closure covers continuations of every length, not up to some depth.  The
 * formula must read forward only (no Pre terms). */
Outcome rv_state_bounded(Workspace& ws, FRef f, const Trace& prefix,
                         const Grid& grid, int state_cap = 20000);

}  // namespace rvmon::oracle

#pragma once

/* Formula rewrites that shrink how far atoms read ahead.
 *
 * lower_lookahead eliminates reads of two or more instants ahead by routing
 * them through derived variables: __la_<v>_<j> carries v(i + j) at instant i
 * (the sort's zero once i + j passes the end of the trace).  Each pass
 * rewrites the atoms with the farthest reach, so the result only reads one
 * instant ahead.  A trace must be instrumented with the derived columns
 * before it is monitored against the rewritten formula; the recipes live in
 * the variable table (VarTable::derivation).
 *
 * to_lookback then shifts one-ahead atoms onto a previous/current band: an
 * atom over (v, v') becomes the same constraint over (v_pre, v_cur) wrapped
 * in a next operator, so it is decided one instant later, when both values
 * have been seen.  Weak literals take the weak next, strong (negated)
 * literals the strong next and flip to the complement atom, so the result
 * contains only positive literals.
 */

#include "rvmon/formula.hpp"

namespace rvmon {

/* Rewrites f until every atom reads at most one instant ahead, declaring
 * derived variables into ws.vars as needed.  Identity when nothing reads
 * two or more ahead. */
FRef lower_lookahead(Workspace& ws, FRef f);

/* Two-instant-band form of a formula whose atoms read at most one ahead
 * (else std::logic_error).  All literals come out positive, over Pre/Cur
 * terms. */
FRef to_lookback(Workspace& ws, FRef f);

}  // namespace rvmon

#pragma once
/*
 * Constraint alphabets and the trace-to-word mapping.
 *
 * A letter is a maximal consistent polarity choice over a property's atoms:
 * for every atom (counted up to complement) it contains either the atom or
 * its complement, and the whole set is satisfiable as a conjunction.  The
 * full alphabet ranges over all atoms of the banded property; the restricted
 * alphabet ranges over the atoms reading only the current instant and is the
 * alphabet of a word's first letter, which has no predecessor to constrain.
 *
 * Every trace induces exactly one word: each position satisfies exactly one
 * letter of the respective alphabet (maximality makes the choice total,
 * consistency of an actual valuation makes it unique).
 */

#include <string>
#include <vector>

#include "rvmon/formula.hpp"
#include "rvmon/trace.hpp"

namespace rvmon {

struct Alphabet {
  std::vector<AtomId> base;      // one representative per complement pair
  std::vector<AtomId> cur_base;  // the current-instant-only representatives
  std::vector<Cube> theta;       // full letters: one polarity per base atom
  std::vector<Cube> theta_cur;   // first-letter alphabet over cur_base
  bool reads_previous = false;   // some atom mentions the previous instant
};

/* Enumerate both alphabets of a banded property.  Walks the polarity tree
 * with satisfiability pruning; the 2^n worst case is guarded by the
 * atom-count limit (std::runtime_error names the offending count). */
Alphabet build_alphabet(Workspace& ws, FRef banded, int max_atoms = 16);

/* The unique word consistent with the trace: the first letter is determined
 * by the first assignment alone, letter i by the pair of assignments at
 * i-1 and i.  The trace must carry every column the atoms read (instrument
 * it first when the property uses derived columns). */
std::vector<Cube> trace_to_word(const Workspace& ws, const Alphabet& al,
                                const Trace& tr);

/* Presentation helper: coarsen a set of letters by repeatedly dropping an
 * atom wherever both of its polarities occur with otherwise equal letters.
 * The union of the described valuation sets is unchanged; the result is a
 * set of partial letters. */
std::vector<Cube> merge_letters(const AtomTable& atoms, std::vector<Cube> in);

}  // namespace rvmon

#pragma once

/* Continuation summaries.
 *
 * After a run reaches a DFA state, the question "which extensions can still
 * satisfy (or still violate) the property?" depends not only on the state
 * but on the values the trace has reached.  The constraint graph closes the
 * state space under a symbolic one-letter step: nodes pair a DFA state with
 * a formula over the start copies (x0 — the values at the moment the
 * summary begins) and the current values (x); an edge applies one letter's
 * constraints and forgets the intermediate instant.  Nodes whose formulas
 * are equivalent (logically, or after capping constants for the integer
 * per-assignment mode) are merged, so the closure is finite whenever the
 * formula language stabilizes.
 *
 * Parallel DFA edges into the same target are taken together: their letters
 * are first merged (an atom appearing in both polarities across the group
 * is dropped), and one update is computed per merged letter.  The merged
 * update equals the disjunction of the per-letter updates, so nothing is
 * lost — the graph is only coarser, and the projections below are
 * unchanged.
 *
 * From a finished graph, projecting the current values out of the
 * disjunction of final-node formulas yields the start values from which
 * some extension satisfies (fsat); the non-final disjunction dually yields
 * those from which some extension violates (funs). */

#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "rvmon/automata.hpp"

namespace rvmon {

/* The closure exceeded its node budget: the property may have no finite
 * summary under the chosen equivalence. */
struct NodeLimitExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/* Node-merging equivalence. */
struct Equivalence {
  enum Kind { Logical, Cutoff } kind = Logical;
  Int k = 0;  // the cap, for Cutoff only
  static Equivalence logical() { return {Logical, 0}; }
  static Equivalence cutoff(Int k) { return {Cutoff, std::move(k)}; }
};

struct CgNode {
  int dfa_state = -1;
  Dnf phi;  // over start copies and current values
  bool is_final = false;
};

struct CgEdge {
  int from = -1;
  Cube letter;  // merged letter (may omit atoms covered in both polarities)
  int to = -1;
};

struct ConstraintGraph {
  std::vector<CgNode> nodes;  // node 0 is the seed
  std::vector<CgEdge> edges;
  Equivalence equiv;
  bool complete = false;  // false when a visitor stopped the closure early
};

/* One step: conjoin the letter's constraints (previous instant = the
 * formula's current values, renamed apart), then eliminate the intermediate
 * copy.  phi is over start copies and current values; the letter is over
 * the previous/current band.  The result is simplified. */
Dnf update(Workspace& ws, const Dnf& phi, const Cube& letter);

/* Seed formulas.  Both range over the variables the banded property's
 * constraints mention (variables the letters never constrain would add
 * conjuncts that evaporate after one step). */
/* Variables mentioned by the banded formula's constraints (sorted). */
std::vector<VarIdx> constrained_vars(Workspace& ws, FRef banded);

Dnf seed_identity(Workspace& ws, FRef banded);  // every v equals its start copy
Dnf seed_values(Workspace& ws, FRef banded,     // every v pinned to a value,
                const std::vector<Rat>& row);   // indexed by VarIdx

/* Called on every materialized node (the seed included); returning true
 * stops the closure, leaving the graph marked incomplete. */
using NodeVisitor = std::function<bool(const ConstraintGraph&, int node)>;

/* Least fixpoint from (start_state, seed).  Expansion is breadth-first in
 * node creation order; a new node is opened only when no existing node of
 * the same DFA state has an equivalent formula.  Unsatisfiable updates are
 * dropped.  Growing past node_limit throws NodeLimitExceeded; the seed
 * itself is always admitted. */
ConstraintGraph build_constraint_graph(Workspace& ws, const Dfa& dfa,
                                       int start_state, const Dnf& seed,
                                       Equivalence equiv,
                                       int node_limit = 10000,
                                       const NodeVisitor& visit = {});

/* The two anticipation conditions of a completed graph, free over the start
 * copies.  An empty disjunction projects to false. */
struct Anticipation {
  Dnf fsat;
  Dnf funs;
};
Anticipation fsat_funs(Workspace& ws, const ConstraintGraph& g);

/* Cap for the integer per-assignment mode: the largest pairwise difference
 * among the constants compared against in the banded property, the seed
 * values, and zero. */
Int cutoff_k(Workspace& ws, FRef banded, const std::vector<Rat>& seed_row);

/* A completed graph with its projections, cached per DFA state. */
struct StateSummary {
  ConstraintGraph graph;
  Anticipation cond;
};
using SummaryCache = std::map<int, std::shared_ptr<const StateSummary>>;

/* Fetch-or-build the full summary for one DFA state (identity seed, logical
 * equivalence).  Throws NodeLimitExceeded without caching when the closure
 * exceeds the budget. */
const StateSummary& state_summary(Workspace& ws, const Dfa& dfa, FRef banded,
                                  int state, SummaryCache& cache,
                                  int node_limit = 10000);

std::string cg_dot(const Workspace& ws, const ConstraintGraph& g);

}  // namespace rvmon

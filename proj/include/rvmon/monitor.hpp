#pragma once
/*
 * Top-level runtime monitor.
 *
 * An Engine compiles one property: normalization (lookahead lowering and
 * banding), letter alphabets, the automaton pair, class detection, and the
 * per-state summary cache.  A Session consumes one trace row at a time and
 * yields the four-valued verdict of each prefix.
 *
 * Dispatch by mode:
 *   NoLookahead  the automaton state's reachability label is the verdict
 *   Summary      anticipation conditions from the constraint summary of the
 *                current state, instantiated at the newest row; a state from
 *                which only one polarity of states is reachable short-cuts
 *                to a permanent verdict, and the summary closure runs with an
 *                abort-on-witness callback so a verdict can be produced even
 *                when the full closure would not terminate
 *   McZ          a per-row summary seeded with the concrete values under the
 *                value-capped equivalence; the verdict reads off whether a
 *                state of the opposite acceptance polarity is reachable
 *
 * When a closure hits the node budget the step yields no verdict ("unknown")
 * with a diagnostic note — never a guess.
 */

#include <optional>
#include <string>
#include <vector>

#include "rvmon/classes.hpp"
#include "rvmon/letters.hpp"
#include "rvmon/summary.hpp"
#include "rvmon/trace.hpp"
#include "rvmon/verdict.hpp"

namespace rvmon {

/* Properties proven to admit no monitor are refused up front. */
struct UnsolvableProperty : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class MonitorMode { NoLookahead, Summary, McZ };

const char* to_string(MonitorMode m);

struct EngineOptions {
  std::optional<MonitorMode> mode;  // forced mode; default: pick by class
  int node_limit = 10000;
};

struct StepOutcome {
  std::optional<Verdict> verdict;  // empty when the node budget ran out
  std::string note;                // diagnostics for the empty case
};

inline const char* label(const StepOutcome& o) {
  return o.verdict ? to_string(*o.verdict) : "unknown";
}

class Engine {
 public:
  /* Compiles the parsed property; throws UnsolvableProperty for gap-order
   * properties with lookahead and std::invalid_argument when a forced
   * no-lookahead mode meets a property that reads the previous instant. */
  Engine(Workspace& ws, FRef parsed, EngineOptions opt = {});

  Workspace& workspace() { return *ws_; }
  FRef banded() const { return banded_; }
  PropertyClass property_class() const { return class_; }
  MonitorMode mode() const { return mode_; }
  const Alphabet& alphabet() const { return alpha_; }
  const Nfa& nfa() const { return nfa_; }
  const Dfa& dfa() const { return dfa_; }
  int node_limit() const { return node_limit_; }
  /* Summaries completed so far (identity-seeded states). */
  const SummaryCache& summaries() const { return cache_; }

 private:
  friend class Session;

  StepOutcome verdict_at(int state, const std::vector<Rat>& row);
  StepOutcome summary_step(int state, const std::vector<Rat>& row);
  StepOutcome mcz_step(int state, const std::vector<Rat>& row);
  bool holds_at(const Dnf& over_start_copies, const std::vector<Rat>& row);

  Workspace* ws_;
  FRef parsed_, banded_;
  Alphabet alpha_;
  Nfa nfa_;
  Dfa dfa_;
  PropertyClass class_;
  MonitorMode mode_;
  int node_limit_;
  std::vector<VarIdx> constrained_;
  std::vector<Verdict> reach_labels_;     // NoLookahead mode only
  std::vector<bool> other_reachable_;     // a >= 1 step path leaves the
                                          // state's acceptance polarity
  SummaryCache cache_;
};

class Session {
 public:
  explicit Session(Engine& engine) : e_(&engine) {}

  /* Consume the next trace row (source-variable values indexed by variable)
   * and return the verdict of the prefix read so far. */
  StepOutcome step(std::vector<Rat> row);

  int prefix_length() const { return static_cast<int>(rows_.trace.rows.size()); }
  /* Automaton state of the prefix read so far; -1 before the first row. */
  int state() const { return state_; }

 private:
  Engine* e_;
  struct {
    Trace trace;  // source rows as fed
  } rows_;
  int state_ = -1;
};

/* Whole-trace monitoring: one outcome per prefix. */
std::vector<StepOutcome> monitor_trace(Engine& engine, const Trace& trace);

/* Convenience: compile and monitor in one call. */
std::vector<StepOutcome> monitor_trace(Workspace& ws, FRef parsed,
                                       const Trace& trace,
                                       EngineOptions opt = {});

}  // namespace rvmon

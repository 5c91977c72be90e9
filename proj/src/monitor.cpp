#include "rvmon/monitor.hpp"

#include <deque>

#include "rvmon/transform.hpp"

namespace rvmon {

const char* to_string(MonitorMode m) {
  switch (m) {
    case MonitorMode::NoLookahead: return "nolookahead";
    case MonitorMode::Summary: return "summary";
    case MonitorMode::McZ: return "mcz";
  }
  return "?";
}

Engine::Engine(Workspace& ws, FRef parsed, EngineOptions opt)
    : ws_(&ws), parsed_(parsed), node_limit_(opt.node_limit) {
  banded_ = to_lookback(ws, lower_lookahead(ws, parsed));
  alpha_ = build_alphabet(ws, banded_);
  nfa_ = build_nfa(ws, banded_);
  dfa_ = build_dfa(ws, nfa_, alpha_);
  class_ = detect_class_banded(ws, banded_, dfa_);
  constrained_ = constrained_vars(ws, banded_);
  if (class_ == PropertyClass::UNSUPPORTED_GC)
    throw UnsolvableProperty(
        "gap-order constraints with lookahead admit no monitor: their "
        "summaries can grow without bound");
  if (opt.mode) {
    mode_ = *opt.mode;
    if (mode_ == MonitorMode::NoLookahead && alpha_.reads_previous)
      throw std::invalid_argument(
          "reachability labels need a property that never reads the "
          "previous instant");
  } else {
    mode_ = class_ == PropertyClass::NO_LOOKAHEAD ? MonitorMode::NoLookahead
            : class_ == PropertyClass::MC_Z       ? MonitorMode::McZ
                                                  : MonitorMode::Summary;
  }
  if (mode_ == MonitorMode::NoLookahead)
    reach_labels_ = label_by_reachability(dfa_);

  // Can a >= 1 step path from s reach the opposite acceptance polarity?
  // If not, the verdict at s is permanent without any summary work.
  int n = static_cast<int>(dfa_.members.size());
  int letters = static_cast<int>(alpha_.theta.size());
  std::vector<std::vector<int>> rev(n);
  for (int s = 0; s < n; ++s)
    for (int l = 0; l < letters; ++l) rev[dfa_.next[s][l]].push_back(s);
  auto backward = [&](bool target_final) {
    std::vector<bool> r(n, false);
    std::deque<int> queue;
    for (int s = 0; s < n; ++s)
      if (dfa_.is_final(s) == target_final) {
        r[s] = true;
        queue.push_back(s);
      }
    while (!queue.empty()) {
      int t = queue.front();
      queue.pop_front();
      for (int s : rev[t])
        if (!r[s]) {
          r[s] = true;
          queue.push_back(s);
        }
    }
    return r;
  };
  std::vector<bool> to_final = backward(true), to_nonfinal = backward(false);
  other_reachable_.assign(n, false);
  for (int s = 0; s < n; ++s) {
    const std::vector<bool>& want = dfa_.is_final(s) ? to_nonfinal : to_final;
    for (int l = 0; l < letters && !other_reachable_[s]; ++l)
      if (want[dfa_.next[s][l]]) other_reachable_[s] = true;
  }
}

bool Engine::holds_at(const Dnf& f, const std::vector<Rat>& row) {
  std::map<TermId, Rat> vals;
  for (VarIdx v : constrained_) {
    TermId t = ws_->vars.find_term(v, Role::Init);
    if (t >= 0) vals[t] = row[v];
  }
  return ws_->arith.sat(ws_->arith.instantiate(f, vals));
}

StepOutcome Engine::verdict_at(int state, const std::vector<Rat>& row) {
  switch (mode_) {
    case MonitorMode::NoLookahead:
      return {reach_labels_[state], {}};
    case MonitorMode::Summary:
      return summary_step(state, row);
    case MonitorMode::McZ:
      return mcz_step(state, row);
  }
  return {};
}

StepOutcome Engine::summary_step(int state, const std::vector<Rat>& row) {
  bool fin = dfa_.is_final(state);
  if (!other_reachable_[state]) return {fin ? Verdict::PS : Verdict::PV, {}};

  // a completed summary answers directly
  if (auto it = cache_.find(state); it != cache_.end()) {
    const Anticipation& cond = it->second->cond;
    bool wit = holds_at(fin ? cond.funs : cond.fsat, row);
    return {fin ? (wit ? Verdict::CS : Verdict::PS)
                : (wit ? Verdict::CV : Verdict::PV),
            {}};
  }

  // close the summary, aborting as soon as some opposite-polarity node is
  // satisfiable at the newest row — that node stays a disjunct of the
  // completed anticipation condition, so the early answer is the final one
  bool witness = false;
  try {
    ConstraintGraph g = build_constraint_graph(
        *ws_, dfa_, state, seed_identity(*ws_, banded_),
        Equivalence::logical(), node_limit_,
        [&](const ConstraintGraph& partial, int node) {
          const CgNode& nd = partial.nodes[node];
          if (nd.is_final != fin && holds_at(nd.phi, row)) {
            witness = true;
            return true;
          }
          return false;
        });
    if (witness) return {fin ? Verdict::CS : Verdict::CV, {}};
    Anticipation cond = fsat_funs(*ws_, g);
    cache_.emplace(state, std::make_shared<StateSummary>(StateSummary{
                              std::move(g), std::move(cond)}));
    return {fin ? Verdict::PS : Verdict::PV, {}};
  } catch (const NodeLimitExceeded& e) {
    return {std::nullopt, e.what()};
  }
}

StepOutcome Engine::mcz_step(int state, const std::vector<Rat>& row) {
  bool fin = dfa_.is_final(state);
  if (!other_reachable_[state]) return {fin ? Verdict::PS : Verdict::PV, {}};

  // seed the summary with the concrete newest values; under the value cap
  // the closure is finite, and the verdict only needs to know whether any
  // opposite-polarity node is reachable at all
  Int k = cutoff_k(*ws_, banded_, row);
  bool witness = false;
  try {
    build_constraint_graph(*ws_, dfa_, state, seed_values(*ws_, banded_, row),
                           Equivalence::cutoff(k), node_limit_,
                           [&](const ConstraintGraph& partial, int node) {
                             if (partial.nodes[node].is_final != fin) {
                               witness = true;
                               return true;
                             }
                             return false;
                           });
  } catch (const NodeLimitExceeded& e) {
    return {std::nullopt, e.what()};
  }
  return {fin ? (witness ? Verdict::CS : Verdict::PS)
              : (witness ? Verdict::CV : Verdict::PV),
          {}};
}

StepOutcome Session::step(std::vector<Rat> row) {
  rows_.trace.rows.push_back(std::move(row));
  // re-derive the lookahead columns over the whole prefix: a new row can
  // change derived values up to the window length back
  Trace tr = rows_.trace;
  instrument(e_->ws_->vars, tr);
  std::vector<Cube> word = trace_to_word(*e_->ws_, e_->alpha_, tr);
  std::vector<int> states = run_dfa(e_->dfa_, word);
  state_ = states.back();
  return e_->verdict_at(state_, tr.rows.back());
}

std::vector<StepOutcome> monitor_trace(Engine& engine, const Trace& trace) {
  Session session(engine);
  std::vector<StepOutcome> out;
  out.reserve(trace.rows.size());
  for (const std::vector<Rat>& row : trace.rows) out.push_back(session.step(row));
  return out;
}

std::vector<StepOutcome> monitor_trace(Workspace& ws, FRef parsed,
                                       const Trace& trace, EngineOptions opt) {
  Engine engine(ws, parsed, opt);
  return monitor_trace(engine, trace);
}

}  // namespace rvmon

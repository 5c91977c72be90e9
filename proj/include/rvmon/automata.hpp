#pragma once
/*
 * From a banded property to a nondeterministic automaton over constraint
 * letters, and its subset determinization over the two alphabets.
 *
 * `delta` rewrites a formula one step: each move carries the residual
 * obligation, the atoms the letter must contain for the move to fire, and an
 * end marker saying whether the move is usable on the word's last letter
 * only (Last), on non-last letters only (NotLast), or anywhere (None).
 * Moves whose atom sets are arithmetically inconsistent, or that would need
 * the letter to be both last and non-last, are dropped at construction.
 *
 * NFA states are the canonical residual formulas; two distinguished states
 * are always present: the violation sink ("false") and the acceptor reached
 * by taking a Last/None move with residual "true" — i.e. by reading the
 * current letter as if it were the word's last.  A word is accepted exactly
 * when some run advances through all letters but the final one and then
 * takes such an as-if-last move; in subset terms, the reached subset
 * contains the acceptor.
 */

#include <map>
#include <string>
#include <vector>

#include "rvmon/letters.hpp"
#include "rvmon/verdict.hpp"

namespace rvmon {

enum class EndMark : uint8_t { None, Last, NotLast };

struct Move {
  FRef residual = -1;
  Cube atoms;  // sorted; fires on letters containing every listed atom
  EndMark mark = EndMark::None;

  friend bool operator==(const Move& a, const Move& b) {
    return a.residual == b.residual && a.atoms == b.atoms && a.mark == b.mark;
  }
  friend bool operator<(const Move& a, const Move& b) {
    if (a.residual != b.residual) return a.residual < b.residual;
    if (a.atoms != b.atoms) return a.atoms < b.atoms;
    return a.mark < b.mark;
  }
};

/* One-step rewrite of a banded formula in negation normal form. */
std::vector<Move> delta(Workspace& ws, FRef f);

struct Nfa {
  std::vector<FRef> states;  // residual per state; the acceptor carries -1
  std::vector<std::vector<Move>> moves;  // delta of each state (acceptor: none)
  int initial = 0;
  int bot = -1;  // the "false" sink, always present
  int acc = -1;  // the as-if-last acceptor, always present, edge-less
  int top = -1;  // the "true" state when advance-reachable, else -1
  std::map<FRef, int> index;

  bool is_final(int s) const { return s == acc || (top >= 0 && s == top); }
};

/* Least closure of delta from the banded property.  Throws
 * std::runtime_error("STATE_LIMIT...") if the closure exceeds the bound. */
Nfa build_nfa(Workspace& ws, FRef banded, int state_limit = 5000);

struct Dfa {
  Alphabet alpha;
  std::vector<std::vector<int>> members;  // sorted NFA states; sink omitted
  int initial = 0;
  std::vector<char> final_flags;          // acceptor among the members
  std::vector<std::vector<int>> next;     // [state][full-letter index]
  std::vector<int> first;                 // [first-letter index], from initial

  bool is_final(int s) const { return final_flags[s] != 0; }
  /* Letter lookup; throws std::logic_error("MISSING_TRANSITION...") when the
   * cube is not a letter of the respective alphabet. */
  int letter_index(const Cube& c) const;
  int first_letter_index(const Cube& c) const;

  std::map<Cube, int> theta_index;
  std::map<Cube, int> cur_index;
};

/* Subset construction over advances, with the acceptor injected wherever a
 * member can read the letter as if it were last.  Deterministic and total:
 * every state has a successor for every full letter, the initial state also
 * for every first letter; the empty subset is an ordinary (dead) state. */
Dfa build_dfa(Workspace& ws, const Nfa& nfa, Alphabet alpha);

/* States after each letter of the word (same length as the word). */
std::vector<int> run_dfa(const Dfa& dfa, const std::vector<Cube>& word);

/* Label every DFA state by final-state reachability: final states from
 * which only finals are reachable are permanently satisfied, other finals
 * currently satisfied; non-finals that can reach a final are currently
 * violated, the rest permanently.  Sound for verdicts only when the
 * property reads no instant ahead, and rejected (std::logic_error)
 * otherwise. */
std::vector<Verdict> label_by_reachability(const Dfa& dfa);

/* Graphviz renderings.  Finals double-circled, initial marked with an
 * incoming arrow; DFA edges grouped per state pair with merged letters. */
std::string nfa_dot(const Workspace& ws, const Nfa& nfa);
std::string dfa_dot(const Workspace& ws, const Nfa& nfa, const Dfa& dfa);

}  // namespace rvmon

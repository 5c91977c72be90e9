#include "rvmon/automata.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rvmon {

namespace {

std::optional<EndMark> meet_marks(EndMark a, EndMark b) {
  if (a == EndMark::None) return b;
  if (b == EndMark::None || b == a) return a;
  return std::nullopt;  // a letter cannot be both last and non-last
}

/* Pairwise conjunction of move sets; inconsistent products drop out. */
std::vector<Move> meet(Workspace& ws, const std::vector<Move>& xs,
                       const std::vector<Move>& ys) {
  std::vector<Move> out;
  for (const Move& x : xs)
    for (const Move& y : ys) {
      std::optional<EndMark> m = meet_marks(x.mark, y.mark);
      if (!m) continue;
      Cube atoms;
      if (!merge_cubes(ws.atoms, x.atoms, y.atoms, atoms)) continue;
      if (!ws.arith.sat_cube(atoms)) continue;
      out.push_back(
          {ws.formulas.con({x.residual, y.residual}), std::move(atoms), *m});
    }
  return out;
}

/* Canonical cleanup: dedup; fuse a Last/NotLast pair over the same residual
 * and atoms into one unrestricted move; drop any move covered by another
 * with the same residual, a subset of its atom demands, and a mark that is
 * None or equal. */
void normalize(std::vector<Move>& ms) {
  std::set<Move> pool(ms.begin(), ms.end());
  for (auto it = pool.begin(); it != pool.end();) {
    if (it->mark == EndMark::Last) {
      Move twin = *it;
      twin.mark = EndMark::NotLast;
      if (pool.count(twin)) {
        Move fused = *it;
        fused.mark = EndMark::None;
        pool.erase(twin);
        it = pool.erase(it);
        pool.insert(fused);
        continue;
      }
    }
    ++it;
  }
  ms.clear();
  for (const Move& m : pool) {
    bool covered = false;
    for (const Move& o : pool) {
      if (o.residual != m.residual || o == m) continue;
      if (o.mark != EndMark::None && o.mark != m.mark) continue;
      if (std::includes(m.atoms.begin(), m.atoms.end(), o.atoms.begin(),
                        o.atoms.end())) {
        covered = true;
        break;
      }
    }
    if (!covered) ms.push_back(m);
  }
}

}  // namespace

std::vector<Move> delta(Workspace& ws, FRef f) {
  FormulaTable& F = ws.formulas;
  const FNode& n = F.at(f);
  std::vector<Move> out;
  switch (n.kind) {
    case FK::True:
      out = {{F.top(), {}, EndMark::None}};
      break;
    case FK::False:
      out = {{F.bottom(), {}, EndMark::None}};
      break;
    case FK::Atom:
      out = {{F.top(), {n.atom}, EndMark::None},
             {F.bottom(), {ws.atoms.neg(n.atom)}, EndMark::None}};
      break;
    case FK::NAtom:
      // over total letters the strong negation is the complement atom
      out = {{F.top(), {ws.atoms.neg(n.atom)}, EndMark::None},
             {F.bottom(), {n.atom}, EndMark::None}};
      break;
    case FK::And: {
      out = delta(ws, n.kids[0]);
      for (std::size_t i = 1; i < n.kids.size(); ++i)
        out = meet(ws, out, delta(ws, n.kids[i]));
      break;
    }
    case FK::Or:
      for (FRef k : n.kids) {
        std::vector<Move> d = delta(ws, k);
        out.insert(out.end(), d.begin(), d.end());
      }
      break;
    case FK::Xs:
      out = {{n.kids[0], {}, EndMark::NotLast},
             {F.bottom(), {}, EndMark::Last}};
      break;
    case FK::Xw:
      out = {{n.kids[0], {}, EndMark::NotLast}, {F.top(), {}, EndMark::Last}};
      break;
    case FK::U: {
      // now, or the left side holds and the whole obligation recurs strictly
      std::vector<Move> recur = {{f, {}, EndMark::NotLast},
                                 {F.bottom(), {}, EndMark::Last}};
      out = meet(ws, delta(ws, n.kids[0]), recur);
      std::vector<Move> now = delta(ws, n.kids[1]);
      out.insert(out.end(), now.begin(), now.end());
      break;
    }
    case FK::G: {
      // holds now and recurs weakly
      std::vector<Move> recur = {{f, {}, EndMark::NotLast},
                                 {F.top(), {}, EndMark::Last}};
      out = meet(ws, delta(ws, n.kids[0]), recur);
      break;
    }
    case FK::F: {
      // now, or the whole obligation recurs strictly
      std::vector<Move> recur = {{f, {}, EndMark::NotLast},
                                 {F.bottom(), {}, EndMark::Last}};
      out = delta(ws, n.kids[0]);
      out.insert(out.end(), recur.begin(), recur.end());
      break;
    }
  }
  normalize(out);
  return out;
}

Nfa build_nfa(Workspace& ws, FRef banded, int state_limit) {
  FormulaTable& F = ws.formulas;
  Nfa nfa;
  auto state_of = [&](FRef r) {
    auto it = nfa.index.find(r);
    if (it != nfa.index.end()) return it->second;
    int id = static_cast<int>(nfa.states.size());
    if (id >= state_limit)
      throw std::runtime_error("STATE_LIMIT: automaton closure exceeds " +
                               std::to_string(state_limit) + " states");
    nfa.states.push_back(r);
    nfa.moves.emplace_back();
    nfa.index.emplace(r, id);
    return id;
  };

  nfa.initial = state_of(banded);
  std::deque<int> todo = {nfa.initial};
  std::set<int> done;
  while (!todo.empty()) {
    int s = todo.front();
    todo.pop_front();
    if (!done.insert(s).second) continue;
    std::vector<Move> ms = delta(ws, nfa.states[s]);
    for (const Move& m : ms) {
      if (m.mark == EndMark::Last) {
        // an as-if-last move routes to the acceptor or the sink only
        if (m.residual != F.top() && m.residual != F.bottom())
          throw std::logic_error("internal: undecided as-if-last residual");
        continue;
      }
      int t = state_of(m.residual);
      if (!done.count(t)) todo.push_back(t);
    }
    nfa.moves[s] = std::move(ms);
  }

  nfa.bot = state_of(F.bottom());
  if (nfa.moves[nfa.bot].empty()) nfa.moves[nfa.bot] = delta(ws, F.bottom());
  auto it = nfa.index.find(F.top());
  nfa.top = it == nfa.index.end() ? -1 : it->second;

  nfa.acc = static_cast<int>(nfa.states.size());
  nfa.states.push_back(-1);
  nfa.moves.emplace_back();
  return nfa;
}

int Dfa::letter_index(const Cube& c) const {
  auto it = theta_index.find(c);
  if (it == theta_index.end())
    throw std::logic_error(
        "MISSING_TRANSITION: cube is not a letter of the full alphabet");
  return it->second;
}

int Dfa::first_letter_index(const Cube& c) const {
  auto it = cur_index.find(c);
  if (it == cur_index.end())
    throw std::logic_error(
        "MISSING_TRANSITION: cube is not a first-letter of the alphabet");
  return it->second;
}

Dfa build_dfa(Workspace& ws, const Nfa& nfa, Alphabet alpha) {
  FormulaTable& F = ws.formulas;
  Dfa dfa;
  dfa.alpha = std::move(alpha);
  for (std::size_t j = 0; j < dfa.alpha.theta.size(); ++j)
    dfa.theta_index.emplace(dfa.alpha.theta[j], static_cast<int>(j));
  for (std::size_t j = 0; j < dfa.alpha.theta_cur.size(); ++j)
    dfa.cur_index.emplace(dfa.alpha.theta_cur[j], static_cast<int>(j));

  std::map<std::vector<int>, int> seen;
  auto intern = [&](std::vector<int> p) {
    auto it = seen.find(p);
    if (it != seen.end()) return it->second;
    int id = static_cast<int>(dfa.members.size());
    bool fin = std::binary_search(p.begin(), p.end(), nfa.acc);
    seen.emplace(p, id);
    dfa.members.push_back(std::move(p));
    dfa.final_flags.push_back(fin ? 1 : 0);
    dfa.next.emplace_back();
    return id;
  };

  auto step = [&](const std::vector<int>& p, const Cube& letter) {
    std::set<int> out;
    bool as_last = false;
    for (int q : p) {
      if (q == nfa.acc) continue;  // edge-less: drops out after one step
      for (const Move& m : nfa.moves[q]) {
        if (!std::includes(letter.begin(), letter.end(), m.atoms.begin(),
                           m.atoms.end()))
          continue;
        if (m.mark != EndMark::Last && m.residual != F.bottom())
          out.insert(nfa.index.at(m.residual));
        if (m.mark != EndMark::NotLast && m.residual == F.top())
          as_last = true;
      }
    }
    if (as_last) out.insert(nfa.acc);
    return std::vector<int>(out.begin(), out.end());
  };

  dfa.initial = intern({nfa.initial});
  dfa.first.resize(dfa.alpha.theta_cur.size());
  for (std::size_t j = 0; j < dfa.alpha.theta_cur.size(); ++j)
    dfa.first[j] =
        intern(step(dfa.members[dfa.initial], dfa.alpha.theta_cur[j]));
  for (int s = 0; s < static_cast<int>(dfa.members.size()); ++s) {
    dfa.next[s].resize(dfa.alpha.theta.size());
    for (std::size_t j = 0; j < dfa.alpha.theta.size(); ++j)
      dfa.next[s][j] = intern(step(dfa.members[s], dfa.alpha.theta[j]));
  }
  return dfa;
}

std::vector<int> run_dfa(const Dfa& dfa, const std::vector<Cube>& word) {
  if (word.empty()) throw std::logic_error("run_dfa: empty word");
  std::vector<int> out;
  int s = dfa.first[dfa.first_letter_index(word.front())];
  out.push_back(s);
  for (std::size_t i = 1; i < word.size(); ++i) {
    s = dfa.next[s][dfa.letter_index(word[i])];
    out.push_back(s);
  }
  return out;
}

std::vector<Verdict> label_by_reachability(const Dfa& dfa) {
  if (dfa.alpha.reads_previous)
    throw std::logic_error(
        "reachability labels need a property without read-ahead");
  int n = static_cast<int>(dfa.members.size());
  std::vector<Verdict> out(n, Verdict::PV);
  for (int s = 0; s < n; ++s) {
    std::set<int> reach = {s};
    std::deque<int> todo = {s};
    while (!todo.empty()) {
      int q = todo.front();
      todo.pop_front();
      for (int t : dfa.next[q])
        if (reach.insert(t).second) todo.push_back(t);
    }
    bool any_final = false, any_nonfinal = false;
    for (int q : reach) (dfa.is_final(q) ? any_final : any_nonfinal) = true;
    if (dfa.is_final(s))
      out[s] = any_nonfinal ? Verdict::CS : Verdict::PS;
    else
      out[s] = any_final ? Verdict::CV : Verdict::PV;
  }
  return out;
}

namespace {

std::string atom_set_label(const Workspace& ws, const Cube& c) {
  std::string s = "{";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ", ";
    s += ws.atoms.show(c[i], kStyleLetter);
  }
  return s + "}";
}

std::string dot_escape(const std::string& in) {
  std::string out;
  for (char ch : in) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}

}  // namespace

std::string nfa_dot(const Workspace& ws, const Nfa& nfa) {
  std::ostringstream o;
  o << "digraph nfa {\n  rankdir=LR;\n  node [shape=circle];\n";
  o << "  init [shape=point];\n";
  for (std::size_t s = 0; s < nfa.states.size(); ++s) {
    std::string label =
        static_cast<int>(s) == nfa.acc
            ? "q+"
            : ws.formulas.show(nfa.states[s], kStyleLetter);
    o << "  s" << s << " [label=\"" << dot_escape(label) << "\"";
    if (nfa.is_final(static_cast<int>(s))) o << ", shape=doublecircle";
    o << "];\n";
  }
  o << "  init -> s" << nfa.initial << ";\n";
  for (std::size_t s = 0; s < nfa.states.size(); ++s) {
    for (const Move& m : nfa.moves[s]) {
      int target;
      if (m.mark != EndMark::Last) {
        target = nfa.index.at(m.residual);
      } else if (m.residual == ws.formulas.top()) {
        target = nfa.acc;
      } else {
        target = nfa.bot;
      }
      o << "  s" << s << " -> s" << target << " [label=\""
        << dot_escape(atom_set_label(ws, m.atoms)) << "\"];\n";
      // an unrestricted move to "true" also reads the letter as if last
      if (m.mark == EndMark::None && m.residual == ws.formulas.top())
        o << "  s" << s << " -> s" << nfa.acc << " [label=\""
          << dot_escape(atom_set_label(ws, m.atoms)) << "\"];\n";
    }
  }
  o << "}\n";
  return o.str();
}

std::string dfa_dot(const Workspace& ws, const Nfa& nfa, const Dfa& dfa) {
  std::ostringstream o;
  o << "digraph dfa {\n  rankdir=LR;\n  node [shape=circle];\n";
  o << "  init [shape=point];\n";
  for (std::size_t s = 0; s < dfa.members.size(); ++s) {
    std::string label = "{";
    for (std::size_t i = 0; i < dfa.members[s].size(); ++i) {
      if (i) label += ",";
      label += dfa.members[s][i] == nfa.acc
                   ? "q+"
                   : "q" + std::to_string(dfa.members[s][i]);
    }
    label += "}";
    o << "  p" << s << " [label=\"" << dot_escape(label) << "\"";
    if (dfa.is_final(static_cast<int>(s))) o << ", shape=doublecircle";
    o << "];\n";
  }
  o << "  init -> p" << dfa.initial << ";\n";

  bool initial_reentered = false;
  for (const std::vector<int>& row : dfa.next)
    for (int t : row)
      if (t == dfa.initial) initial_reentered = true;
  for (int t : dfa.first)
    if (t == dfa.initial) initial_reentered = true;

  for (int s = 0; s < static_cast<int>(dfa.members.size()); ++s) {
    std::map<int, std::vector<Cube>> grouped;
    if (s == dfa.initial)
      for (std::size_t j = 0; j < dfa.first.size(); ++j)
        grouped[dfa.first[j]].push_back(dfa.alpha.theta_cur[j]);
    if (s != dfa.initial || initial_reentered)
      for (std::size_t j = 0; j < dfa.next[s].size(); ++j)
        grouped[dfa.next[s][j]].push_back(dfa.alpha.theta[j]);
    for (auto& [t, letters] : grouped) {
      std::vector<Cube> merged = merge_letters(ws.atoms, std::move(letters));
      std::sort(merged.begin(), merged.end());
      std::string label;
      for (std::size_t i = 0; i < merged.size(); ++i) {
        if (i) label += "\\n";
        label += dot_escape(atom_set_label(ws, merged[i]));
      }
      o << "  p" << s << " -> p" << t << " [label=\"" << label << "\"];\n";
    }
  }
  o << "}\n";
  return o.str();
}

}  // namespace rvmon

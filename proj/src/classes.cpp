#include "rvmon/classes.hpp"

#include <algorithm>
#include <map>

#include "rvmon/letters.hpp"
#include "rvmon/transform.hpp"

namespace rvmon {

namespace {

/* Shape of one canonical atom within its own sort. */
enum class Shape { Mc, Ipc, McIpc, Gap, General };

bool unit_pair(const LinAtom& la) {
  const Int& a = la.coeffs[0].second;
  const Int& b = la.coeffs[1].second;
  return (a == 1 && b == -1) || (a == -1 && b == 1);
}

Shape shape_of(const LinAtom& la, std::set<Rat>& constants) {
  size_t n = la.coeffs.size();
  if (la.rel == Rel::ModEq || la.rel == Rel::ModNe) {
    // congruences: variable against offset, or two variables with offset
    auto unit_mod = [&](const Int& c) { return c == 1 || c == la.mod - 1; };
    if (n == 1 && unit_mod(la.coeffs[0].second)) {
      constants.insert(Rat(la.cst));
      return Shape::Ipc;
    }
    if (n == 2 && unit_mod(la.coeffs[0].second) &&
        unit_mod(la.coeffs[1].second)) {
      constants.insert(Rat(la.cst));
      return Shape::Ipc;
    }
    return Shape::General;
  }
  if (n == 1) {
    // variable against a constant: both order fragments admit it
    constants.insert(Rat(-la.cst) / Rat(la.coeffs[0].second));
    return Shape::McIpc;
  }
  if (n == 2 && unit_pair(la)) {
    if (la.cst == 0) return la.rel == Rel::Eq ? Shape::McIpc : Shape::Mc;
    // integer tightening turns v < w into v - w + 1 <= 0
    if (la.sort == Sort::Int && la.rel == Rel::Le && la.cst == 1)
      return Shape::Mc;
    // a proper difference bound
    if (la.sort == Sort::Int) {
      constants.insert(Rat(-la.cst));
      return Shape::Gap;
    }
  }
  return Shape::General;
}

}  // namespace

FragmentInfo classify_atoms(const Workspace& ws,
                            const std::vector<AtomId>& atoms) {
  FragmentInfo info;
  bool any_int = false, any_rat = false;
  bool all_mc = true, all_ipc = true, all_gap_or_mc = true, any_gap = false;
  for (AtomId a : atoms) {
    const LinAtom& la = ws.atoms.at(a);
    (la.sort == Sort::Int ? any_int : any_rat) = true;
    switch (shape_of(la, info.constants)) {
      case Shape::McIpc:
        break;
      case Shape::Mc:
        all_ipc = false;
        break;
      case Shape::Ipc:
        all_mc = false;
        all_gap_or_mc = false;
        break;
      case Shape::Gap:
        all_mc = all_ipc = false;
        any_gap = true;
        break;
      case Shape::General:
        all_mc = all_ipc = all_gap_or_mc = false;
        break;
    }
  }
  if (any_int && any_rat) {
    info.fragment = Fragment::UNSUPPORTED;
  } else if (all_mc) {
    info.fragment = any_int ? Fragment::MC_Z : Fragment::MC_Q;
  } else if (all_ipc && any_int) {
    info.fragment = Fragment::IPC;
  } else if (all_gap_or_mc && any_gap && any_int) {
    info.fragment = Fragment::GAP_ORDER;
  } else {
    info.fragment = any_int ? Fragment::GENERAL_INT : Fragment::GENERAL_RAT;
  }
  return info;
}

const char* to_string(PropertyClass c) {
  switch (c) {
    case PropertyClass::NO_LOOKAHEAD: return "NO_LOOKAHEAD";
    case PropertyClass::MC_Q: return "MC_Q";
    case PropertyClass::IPC: return "IPC";
    case PropertyClass::BOUNDED_LOOKBACK: return "BOUNDED_LOOKBACK";
    case PropertyClass::MC_Z: return "MC_Z";
    case PropertyClass::UNKNOWN: return "UNKNOWN";
    case PropertyClass::UNSUPPORTED_GC: return "UNSUPPORTED_GC";
  }
  return "?";
}

namespace {

/* Strongly connected components over the letter-indexed successor table
 * (iterative Tarjan); component ids are dense from 0. */
std::vector<int> scc_of(const Dfa& dfa) {
  int n = static_cast<int>(dfa.members.size());
  int letters = static_cast<int>(dfa.alpha.theta.size());
  std::vector<int> idx(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on(n, false);
  std::vector<int> stack;
  int counter = 0, comps = 0;
  struct Frame {
    int v;
    int edge;
  };
  for (int root = 0; root < n; ++root) {
    if (idx[root] >= 0) continue;
    std::vector<Frame> work{{root, 0}};
    while (!work.empty()) {
      Frame& f = work.back();
      if (f.edge == 0) {
        idx[f.v] = low[f.v] = counter++;
        stack.push_back(f.v);
        on[f.v] = true;
      }
      if (f.edge < letters) {
        int w = dfa.next[f.v][f.edge++];
        if (idx[w] < 0) {
          work.push_back({w, 0});
        } else if (on[w]) {
          low[f.v] = std::min(low[f.v], idx[w]);
        }
      } else {
        if (low[f.v] == idx[f.v]) {
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on[w] = false;
            comp[w] = comps;
          } while (w != f.v);
          ++comps;
        }
        int v = f.v;
        work.pop_back();
        if (!work.empty()) low[work.back().v] = std::min(low[work.back().v], low[v]);
      }
    }
  }
  return comp;
}

struct UnionFind {
  std::vector<int> up;
  explicit UnionFind(int n) : up(n) {
    for (int i = 0; i < n; ++i) up[i] = i;
  }
  int find(int x) { return up[x] == x ? x : up[x] = find(up[x]); }
  void unite(int a, int b) { up[find(a)] = find(b); }
};

}  // namespace

bool bounded_lookback(const Workspace& ws, const Dfa& dfa) {
  int n = static_cast<int>(dfa.members.size());
  int letters = static_cast<int>(dfa.alpha.theta.size());
  std::vector<int> comp = scc_of(dfa);
  std::vector<int> comp_size(n, 0);
  for (int s = 0; s < n; ++s) ++comp_size[comp[s]];

  // atoms on merged step cubes that stay inside a strongly connected part
  std::set<AtomId> cycle_atoms;
  for (int s = 0; s < n; ++s) {
    std::map<int, std::vector<Cube>> by_target;
    for (int l = 0; l < letters; ++l) {
      int t = dfa.next[s][l];
      if (comp[t] == comp[s] && (t == s || comp_size[comp[s]] > 1))
        by_target[t].push_back(dfa.alpha.theta[l]);
    }
    for (auto& [t, group] : by_target)
      for (const Cube& cube : merge_letters(ws.atoms, std::move(group)))
        cycle_atoms.insert(cube.begin(), cube.end());
  }

  // collapse variable-to-variable equalities, then collect carry edges
  UnionFind uf(ws.vars.var_count());
  std::vector<std::pair<VarIdx, VarIdx>> carries;
  for (AtomId a : cycle_atoms) {
    const LinAtom& la = ws.atoms.at(a);
    std::set<VarIdx> pre, cur;
    for (const auto& [t, c] : la.coeffs) {
      const TermInfo& ti = ws.vars.info(t);
      if (ti.role == Role::Pre) pre.insert(ti.var);
      if (ti.role == Role::Cur) cur.insert(ti.var);
    }
    if (pre.empty() || cur.empty()) continue;
    if (la.rel == Rel::Eq && la.cst == 0 && la.coeffs.size() == 2 &&
        unit_pair(la)) {
      uf.unite(*pre.begin(), *cur.begin());
    } else {
      for (VarIdx u : pre)
        for (VarIdx v : cur) carries.emplace_back(u, v);
    }
  }

  // the carry relation on collapsed classes must be acyclic
  std::map<int, std::vector<int>> adj;
  for (auto [u, v] : carries) {
    int cu = uf.find(u), cv = uf.find(v);
    if (cu == cv) return false;
    adj[cu].push_back(cv);
  }
  std::map<int, int> color;  // 0 new, 1 open, 2 done
  for (auto& [start, _] : adj) {
    if (color[start]) continue;
    std::vector<std::pair<int, size_t>> work{{start, 0}};
    color[start] = 1;
    while (!work.empty()) {
      auto& [v, i] = work.back();
      auto it = adj.find(v);
      if (it != adj.end() && i < it->second.size()) {
        int w = it->second[i++];
        if (color[w] == 1) return false;
        if (color[w] == 0) {
          color[w] = 1;
          work.push_back({w, 0});
        }
      } else {
        color[v] = 2;
        work.pop_back();
      }
    }
  }
  return true;
}

namespace {

bool reads_previous_instant(const Workspace& ws, FRef banded) {
  std::set<AtomId> atoms;
  ws.formulas.collect_atoms(banded, atoms);
  for (AtomId a : atoms)
    for (const auto& [t, c] : ws.atoms.at(a).coeffs)
      if (ws.vars.info(t).role == Role::Pre) return true;
  return false;
}

PropertyClass from_fragment(Fragment f) {
  switch (f) {
    case Fragment::MC_Q: return PropertyClass::MC_Q;
    case Fragment::MC_Z: return PropertyClass::MC_Z;
    case Fragment::IPC: return PropertyClass::IPC;
    case Fragment::GAP_ORDER: return PropertyClass::UNSUPPORTED_GC;
    default: return PropertyClass::UNKNOWN;
  }
}

}  // namespace

PropertyClass detect_class_banded(Workspace& ws, FRef banded, const Dfa& dfa) {
  if (!reads_previous_instant(ws, banded)) return PropertyClass::NO_LOOKAHEAD;
  std::set<AtomId> atom_set;
  ws.formulas.collect_atoms(banded, atom_set);
  FragmentInfo info =
      classify_atoms(ws, {atom_set.begin(), atom_set.end()});
  if (info.fragment == Fragment::GENERAL_RAT ||
      info.fragment == Fragment::GENERAL_INT)
    return bounded_lookback(ws, dfa) ? PropertyClass::BOUNDED_LOOKBACK
                                     : PropertyClass::UNKNOWN;
  return from_fragment(info.fragment);
}

PropertyClass detect_class(Workspace& ws, FRef parsed) {
  FRef banded = to_lookback(ws, lower_lookahead(ws, parsed));
  if (!reads_previous_instant(ws, banded)) return PropertyClass::NO_LOOKAHEAD;
  std::set<AtomId> atom_set;
  ws.formulas.collect_atoms(banded, atom_set);
  FragmentInfo info =
      classify_atoms(ws, {atom_set.begin(), atom_set.end()});
  if (info.fragment != Fragment::GENERAL_RAT &&
      info.fragment != Fragment::GENERAL_INT)
    return from_fragment(info.fragment);
  Alphabet al = build_alphabet(ws, banded);
  Dfa dfa = build_dfa(ws, build_nfa(ws, banded), al);
  return bounded_lookback(ws, dfa) ? PropertyClass::BOUNDED_LOOKBACK
                                   : PropertyClass::UNKNOWN;
}

}  // namespace rvmon

#include "rvmon/letters.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace rvmon {

namespace {

/* Depth-first polarity choice with satisfiability pruning at every node. */
void enumerate(ArithEngine& eng, const std::vector<AtomId>& base,
               std::size_t i, Cube& partial, std::vector<Cube>& out) {
  Cube sorted = partial;
  std::sort(sorted.begin(), sorted.end());
  if (!eng.sat_cube(sorted)) return;
  if (i == base.size()) {
    out.push_back(std::move(sorted));
    return;
  }
  for (AtomId pick : {base[i], eng.atoms().neg(base[i])}) {
    partial.push_back(pick);
    enumerate(eng, base, i + 1, partial, out);
    partial.pop_back();
  }
}

const Rat& value_at(const std::vector<Rat>& row, VarIdx v) {
  if (static_cast<std::size_t>(v) >= row.size())
    throw std::logic_error(
        "trace_to_word: trace lacks a column; instrument the trace first");
  return row[v];
}

}  // namespace

Alphabet build_alphabet(Workspace& ws, FRef banded, int max_atoms) {
  std::set<AtomId> raw;
  ws.formulas.collect_atoms(banded, raw);
  std::set<AtomId> canon;
  for (AtomId a : raw) canon.insert(std::min(a, ws.atoms.neg(a)));

  Alphabet al;
  al.base.assign(canon.begin(), canon.end());
  if (static_cast<int>(al.base.size()) > max_atoms)
    throw std::runtime_error("alphabet limit: property has " +
                             std::to_string(al.base.size()) +
                             " distinct constraints (limit " +
                             std::to_string(max_atoms) + ")");
  for (AtomId a : al.base)
    if (!ws.atoms.mentions_role(a, Role::Pre)) al.cur_base.push_back(a);
  al.reads_previous = al.cur_base.size() != al.base.size();

  Cube partial;
  enumerate(ws.arith, al.base, 0, partial, al.theta);
  enumerate(ws.arith, al.cur_base, 0, partial, al.theta_cur);
  return al;
}

std::vector<Cube> trace_to_word(const Workspace& ws, const Alphabet& al,
                                const Trace& tr) {
  if (tr.rows.empty()) throw std::logic_error("trace_to_word: empty trace");
  std::vector<Cube> word;
  for (int i = 0; i < tr.length(); ++i) {
    const std::vector<AtomId>& base = i == 0 ? al.cur_base : al.base;
    const std::vector<Rat>* pre = i == 0 ? nullptr : &tr.rows[i - 1];
    const std::vector<Rat>& cur = tr.rows[i];
    Cube letter;
    for (AtomId a : base) {
      std::optional<bool> got =
          ws.atoms.eval(a, [&](TermId t) -> std::optional<Rat> {
            const TermInfo& ti = ws.vars.info(t);
            if (ti.role == Role::Cur) return value_at(cur, ti.var);
            if (ti.role == Role::Pre && pre) return value_at(*pre, ti.var);
            return std::nullopt;
          });
      if (!got)
        throw std::logic_error("trace_to_word: letter atom reads outside the "
                               "previous/current band");
      letter.push_back(*got ? a : ws.atoms.neg(a));
    }
    std::sort(letter.begin(), letter.end());
    word.push_back(std::move(letter));
  }
  return word;
}

std::vector<Cube> merge_letters(const AtomTable& atoms, std::vector<Cube> in) {
  std::set<Cube> pool(in.begin(), in.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Cube& c : pool) {
      for (std::size_t k = 0; k < c.size(); ++k) {
        Cube twin = c;
        twin[k] = atoms.neg(c[k]);
        std::sort(twin.begin(), twin.end());
        if (twin == c || pool.count(twin) == 0) continue;
        Cube merged = c;
        merged.erase(merged.begin() + static_cast<std::ptrdiff_t>(k));
        pool.erase(twin);
        pool.erase(c);
        pool.insert(std::move(merged));
        changed = true;
        break;
      }
      if (changed) break;  // iterators into pool are gone; restart the scan
    }
  }
  return {pool.begin(), pool.end()};
}

}  // namespace rvmon

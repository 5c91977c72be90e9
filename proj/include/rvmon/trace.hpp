#pragma once

/* A finite run: one row of exact values per instant, one column per
 * variable (indexed by VarIdx in declaration order). */

#include <vector>

#include "rvmon/value.hpp"
#include "rvmon/vars.hpp"

namespace rvmon {

struct Trace {
  std::vector<std::vector<Rat>> rows;
  int length() const { return static_cast<int>(rows.size()); }
};

/* Fills in the derived columns used by lookahead lowering: every row grows
 * to the full variable count, and a column derived as (source, shift)
 * receives the source's value shift instants later — the sort's zero once
 * that falls past the end of the trace. */
inline void instrument(const VarTable& vars, Trace& tr) {
  int n = tr.length();
  std::size_t width = static_cast<std::size_t>(vars.var_count());
  for (auto& row : tr.rows)
    if (row.size() < width) row.resize(width, Rat(0));
  for (VarIdx v = 0; v < vars.var_count(); ++v) {
    const auto& d = vars.derivation(v);
    if (!d) continue;
    for (int i = 0; i < n; ++i)
      tr.rows[i][v] =
          i + d->shift < n ? tr.rows[i + d->shift][d->source] : Rat(0);
  }
}

/* The first `len` instants as their own trace. */
inline Trace prefix_of(const Trace& tr, int len) {
  Trace out;
  out.rows.assign(tr.rows.begin(), tr.rows.begin() + len);
  return out;
}

}  // namespace rvmon

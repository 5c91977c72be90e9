#pragma once
/*
 * Declared variables and term identities.
 *
 * A property declares variables with sorts.  Each syntactic occurrence of a
 * variable inside an atom refers to the variable in a specific role:
 *
 *   Look(k)  value k instants ahead of the evaluation instant (k = 0 is the
 *            plain occurrence, k >= 1 comes from k primes);
 *   Pre/Cur  the two-instant band after the lookback transform (Pre reads
 *            the previous trace instant, Cur the current one);
 *   Init     the frozen first-instant copy used by state formulas (x0);
 *   Tmp      the bound copy introduced while eliminating a step (u).
 *
 * Every (variable, role) pair is interned to a small dense TermId so the
 * arithmetic layer can work over plain integer ids.  The table also records
 * instrumentation variables added by lookahead lowering together with the
 * recipe for computing their values from a source trace.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rvmon/value.hpp"

namespace rvmon {

using VarIdx = int32_t;
using TermId = int32_t;

enum class Role : uint8_t { Look, Pre, Cur, Init, Tmp };

struct TermInfo {
  VarIdx var = -1;
  Role role = Role::Look;
  int look = 0;  // meaningful for Role::Look only
};

/* How an instrumentation variable derives its values: var(i) = source(i+shift),
 * with the sort's zero beyond the end of the trace. */
struct Derivation {
  VarIdx source = -1;
  int shift = 0;
};

class VarTable {
 public:
  /* Declares a new variable; name must be fresh. */
  VarIdx declare(const std::string& name, Sort sort);
  /* Declares an instrumentation variable computed from an existing one. */
  VarIdx declare_derived(const std::string& name, Sort sort, VarIdx source,
                         int shift);

  std::optional<VarIdx> find(const std::string& name) const;
  int var_count() const { return static_cast<int>(names_.size()); }
  const std::string& name(VarIdx v) const { return names_[v]; }
  Sort sort(VarIdx v) const { return sorts_[v]; }
  const std::optional<Derivation>& derivation(VarIdx v) const {
    return derivations_[v];
  }
  /* Variables that are inputs of the original property (no derivation). */
  std::vector<VarIdx> source_vars() const;

  TermId term(VarIdx v, Role role, int look = 0);
  /* Lookup without allocation; -1 when the pair was never interned. */
  TermId find_term(VarIdx v, Role role, int look = 0) const;
  const TermInfo& info(TermId t) const { return terms_[t]; }
  Sort sort_of_term(TermId t) const { return sorts_[terms_[t].var]; }
  int term_count() const { return static_cast<int>(terms_.size()); }

  /* Display name for a term in a given printing context (see prettyprint
   * conventions in the header of atoms.hpp). */
  std::string term_name(TermId t, int style) const;

 private:
  std::vector<std::string> names_;
  std::vector<Sort> sorts_;
  std::vector<std::optional<Derivation>> derivations_;
  std::vector<TermInfo> terms_;
  // dense index: key built from (var, role, look)
  struct Key {
    VarIdx var;
    Role role;
    int look;
    bool operator==(const Key&) const = default;
  };
  std::vector<std::pair<Key, TermId>> index_;
};

/* Printing styles for terms. */
enum PrintStyle : int {
  kStyleSurface = 0,  // x, x', x''...          (Look roles)
  kStyleBanded = 1,   // x_pre, x_cur           (Pre/Cur roles)
  kStyleState = 2,    // x, x0                  (Cur/Init roles, state formulas)
  kStyleLetter = 3,   // x, x'                  (Pre -> x, Cur -> x')
};

}  // namespace rvmon

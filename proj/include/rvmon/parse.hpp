#pragma once

/* Property files: one or more variable declarations, then one formula.
 *
 *   // auction activity
 *   rat p;
 *   int b;
 *   G (b = 2 || b <= 0 || (p' <= p + 3 && b' = 2))
 *
 * Operators by falling precedence: unary (!, X, wX, G, F), U (right
 * associative), &&, ||, -> (right associative).  Atom relations:
 * =, !=, <, <=, >, >=, and the congruences =_k / !=_k.  Primes after a
 * variable read ahead by one instant each.  strict(e) wraps a temporal-free
 * formula and additionally requires every instant e reads ahead to exist.
 * Numbers are exact: integers, decimals, and quotients of integers.
 * Comments run from // to end of line.
 *
 * The parser declares the variables into ws.vars and returns the formula in
 * negation normal form over weak (positive) and strong (negated) literals.
 */

#include <stdexcept>
#include <string>

#include "rvmon/formula.hpp"

namespace rvmon {

struct ParseError : std::runtime_error {
  int line = 0;
  int col = 0;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error("line " + std::to_string(line_) + ", col " +
                           std::to_string(col_) + ": " + msg),
        line(line_),
        col(col_) {}
};

FRef parse_property(Workspace& ws, const std::string& text);

}  // namespace rvmon

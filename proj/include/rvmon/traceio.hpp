#pragma once
/*
 * Trace ingestion.
 *
 * A trace file carries one numeric value per declared input variable per
 * instant, in either of two forms:
 *
 *   CSV    a header line naming the variables, then one line per instant;
 *   JSON   an array of objects mapping variable names to values.
 *
 * Values are exact everywhere: integer literals, "p/q" fractions, or finite
 * decimals (converted without rounding).  JSON numeric values must be
 * integers; non-integer JSON numbers are rejected (a double cannot be
 * trusted to round-trip exactly) with a message pointing at the exact
 * string forms.  Columns are matched to declared variables by name, in any
 * order; every instant must assign every variable exactly once, and
 * integer-sorted variables only accept whole values.
 *
 * The two forms are distinguished by content, not file name: input whose
 * first non-space byte is '[' or '{' is parsed as JSON.
 */

#include <iosfwd>
#include <string>

#include "rvmon/trace.hpp"
#include "rvmon/vars.hpp"

namespace rvmon {

/* Raised for any malformed trace input; the message names the offending
 * line or instant and column. */
struct TraceFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/* Reads a complete trace (length >= 1) for the given variable table's
 * input variables. */
Trace load_trace(std::istream& in, const VarTable& vars);
Trace load_trace_file(const std::string& path, const VarTable& vars);

}  // namespace rvmon

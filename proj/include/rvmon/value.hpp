#pragma once
/*
 * Exact numeric values.
 *
 * All runtime data (trace cells, atom coefficients after scaling, grid
 * points) is exact: arbitrary-precision rationals, with integer-sorted
 * variables restricted to denominator 1.  Backed by GMP's C++ wrappers.
 */

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace rvmon {

using Int = mpz_class;
using Rat = mpq_class;

enum class Sort : uint8_t { Int, Rat };

inline const char* sort_name(Sort s) { return s == Sort::Int ? "int" : "rat"; }

struct ValueError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/* Parse an exact numeric literal: optional sign, then "123", "p/q", or a
 * finite decimal "12.75".  Throws ValueError on anything else. */
Rat parse_exact(const std::string& text);

/* Exact round-trip display: integers as "n", other rationals as "p/q".
 * (Canonical GMP form: reduced, denominator positive.) */
std::string show_exact(const Rat& v);

/* True if v is an integer (denominator 1 after canonicalization). */
bool is_integral(const Rat& v);

/* floor(p/q) as an exact integer. */
Int floor_div(const Rat& v);

/* Euclidean remainder of an integer value modulo m >= 1: result in [0, m). */
Int euclid_mod(const Int& a, const Int& m);

}  // namespace rvmon

#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace omw {

// Thin helpers around GMP rationals.  All geometry in this project is exact;
// doubles appear only in the probability threshold scan (whose result is
// re-certified exactly) and in benchmark timings.

// Parses "p", "-p", "p/q" into a canonical rational.  Rejects empty strings,
// zero denominators and garbage.
mpq_class parse_rational(const std::string& text);

// Canonical "p" or "p/q" form (unique per value, denominator positive).
std::string format_rational(const mpq_class& value);

// Sign in {-1, 0, +1}.
inline int sign_of(const mpq_class& value) { return sgn(value); }

// Dot product of two equal-length rational vectors.
mpq_class dot(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b);

}  // namespace omw

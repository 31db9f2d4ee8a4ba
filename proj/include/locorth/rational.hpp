#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace locorth {

/// Exact arbitrary-precision rational number.
using Rational = mpq_class;

/// Parses "p/q", "p" or a finite decimal such as "0.375"; the result is canonicalized.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" text, or "p" when the denominator is 1.
std::string to_string(const Rational& value);

/// Exact rational equal to the binary value of `value`.
Rational from_double(double value);

/// num/den in canonical form; den must be nonzero.
inline Rational make_rational(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline double to_double(const Rational& value) { return value.get_d(); }

} // namespace locorth

#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace antipode {

using Rational = mpq_class;
using RationalVec = std::vector<Rational>;

/// Parses "p/q", an integer, or a plain decimal such as "-0.82" or "1e-3"
/// into an exact rational. Throws Error(Parse) on malformed input.
Rational parse_rational(std::string_view text);

/// Exact conversion of a binary double (every finite double is a dyadic
/// rational).
Rational exact_from_double(double value);

/// Canonical "p/q" (or "p" when q = 1) text.
std::string to_string(const Rational& value);

inline double to_double(const Rational& value) { return value.get_d(); }

RationalVec exact_from_doubles(const std::vector<double>& values);
std::vector<double> to_doubles(const RationalVec& values);

}  // namespace antipode

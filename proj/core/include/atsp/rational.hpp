#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace atsp {

using Rational = mpq_class;

// Accepts integers, "p/q" fractions and plain decimals such as "-2.75".
Rational parse_rational(std::string_view text);

// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

Rational ceil_of(const Rational& q);
Rational floor_of(const Rational& q);
bool is_integer(const Rational& q);

inline const Rational& min_of(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max_of(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace atsp

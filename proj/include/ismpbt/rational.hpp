#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace ismpbt {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// "0", "2", "37/13824" — integers without a denominator.
std::string rational_to_string(const Rational& r);

// Fixed-point decimal with `digits` fractional digits, rounded half away
// from zero: rational_to_decimal(1/2, 6) == "0.500000".
std::string rational_to_decimal(const Rational& r, int digits = 6);

}  // namespace ismpbt

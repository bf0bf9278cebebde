#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace oscitrace {

// Exact arbitrary-precision rational, always in lowest terms with positive
// denominator (cpp_rational canonicalizes on every operation).
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt factorial_big(unsigned n) {
    BigInt r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

inline BigInt pow_big(const BigInt& base, unsigned e) {
    BigInt r = 1;
    for (unsigned i = 0; i < e; ++i) r *= base;
    return r;
}

inline double to_double(const Rational& r) { return static_cast<double>(r); }

} // namespace oscitrace

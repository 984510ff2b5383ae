#ifndef ULTRAJET_RATIONAL_HPP
#define ULTRAJET_RATIONAL_HPP

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace ultrajet {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

/// Exact conversion; every finite double is a dyadic rational.
Rational to_rational(double x);
double to_double(const Rational& q);

/// Parses "12", "-0.25", "3/7", "1e-3", "2.5E2" into an exact rational.
Rational parse_rational(std::string_view text);

Integer factorial(int k);
Integer binomial(int n, int k);
Rational pow(const Rational& base, int exponent);

std::string to_string(const Rational& q);

/// Natural logarithm of a positive value without overflowing through double.
double log_positive(const Integer& z);
double log_positive(const Rational& q);

/// Scalar helpers shared by templated code that runs on both double and Rational.
inline double as_double(double x) { return x; }
inline double as_double(const Rational& q) { return to_double(q); }

template <class T>
T scalar_from_int(long long v) {
  return T(v);
}

}  // namespace ultrajet

#endif

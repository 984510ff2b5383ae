#include "ultrajet/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace ultrajet {

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("cannot convert non-finite value to a rational");
  return Rational(x);
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Integer parse_integer(std::string_view s) { return Integer(std::string(s)); }

}  // namespace

Rational parse_rational(std::string_view text) {
  auto bad = [&]() { return std::invalid_argument("not a rational literal: '" + std::string(text) + "'"); };
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw bad();

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw bad();
    Integer d = parse_integer(den);
    if (d == 0) throw bad();
    value = Rational(parse_integer(num), d);
  } else {
    long long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      auto exp_text = s.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      if (!all_digits(exp_text) || exp_text.size() > 6) throw bad();
      exponent = std::stoll(std::string(exp_text));
      if (exp_negative) exponent = -exponent;
      s = s.substr(0, e);
    }
    std::string digits;
    auto dot = s.find('.');
    if (dot == std::string_view::npos) {
      if (!all_digits(s)) throw bad();
      digits = std::string(s);
    } else {
      auto whole = s.substr(0, dot), frac = s.substr(dot + 1);
      if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
          (!frac.empty() && !all_digits(frac)))
        throw bad();
      digits = std::string(whole) + std::string(frac);
      exponent -= static_cast<long long>(frac.size());
    }
    Integer mantissa = parse_integer(digits);
    Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
    value = exponent < 0 ? Rational(mantissa, scale) : Rational(mantissa * scale);
  }
  return negative ? Rational(-value) : value;
}

Integer factorial(int k) {
  Integer r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

Integer binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  Integer r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Rational pow(const Rational& base, int exponent) {
  Rational result = 1, b = base;
  bool invert = exponent < 0;
  unsigned e = static_cast<unsigned>(invert ? -exponent : exponent);
  while (e) {
    if (e & 1u) result *= b;
    b *= b;
    e >>= 1u;
  }
  if (invert) {
    if (result == 0) throw std::domain_error("zero to a negative power");
    result = 1 / result;
  }
  return result;
}

std::string to_string(const Rational& q) { return q.str(); }

double log_positive(const Integer& z) {
  if (z <= 0) throw std::domain_error("log of a non-positive integer");
  std::size_t bits = boost::multiprecision::msb(z) + 1;
  if (bits <= 900) return std::log(z.convert_to<double>());
  std::size_t shift = bits - 900;
  Integer top = z >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

double log_positive(const Rational& q) {
  return log_positive(Integer(boost::multiprecision::numerator(q))) -
         log_positive(Integer(boost::multiprecision::denominator(q)));
}

}  // namespace ultrajet

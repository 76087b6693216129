#include "bvdyn/numeric.hpp"

#include <cctype>

#include "bvdyn/error.hpp"

namespace bvdyn {

namespace {

BigInt parse_integer(std::string_view text) {
  if (text.empty()) throw InvalidArgument("empty number");
  std::size_t i = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) throw InvalidArgument("malformed number '" + std::string(text) + "'");
  BigInt value = 0;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw InvalidArgument("malformed number '" + std::string(text) + "'");
    }
    value = value * 10 + (text[i] - '0');
  }
  return negative ? BigInt(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash));
    BigInt den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string digits(text.substr(0, dot));
    std::string_view frac = text.substr(dot + 1);
    if (frac.empty()) throw InvalidArgument("malformed number '" + std::string(text) + "'");
    BigInt den = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
    digits += frac;
    if (digits == "-" || digits == "+" || digits.empty()) digits += "0";
    return Rational(parse_integer(digits), den);
  }
  return Rational(parse_integer(text));
}

std::string to_string(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string to_string(const BigInt& value) { return value.str(); }

double to_double(const Rational& value) { return value.convert_to<double>(); }

BigInt common_denominator(const Rational* begin, const Rational* end) {
  BigInt l = 1;
  for (auto it = begin; it != end; ++it) {
    BigInt d = boost::multiprecision::denominator(*it);
    l = l / boost::multiprecision::gcd(l, d) * d;
  }
  return l;
}

}  // namespace bvdyn

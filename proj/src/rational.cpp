#include "demibit/rational.hpp"

#include "demibit/errors.hpp"

namespace demibit {

Rational ratio(std::uint64_t count, std::uint64_t total) {
  if (total == 0) throw ArityError("probability over an empty sample space");
  return Rational(BigInt(count), BigInt(total));
}

Rational pow2_inverse(unsigned k) {
  BigInt den = 1;
  den <<= k;
  return Rational(BigInt(1), den);
}

BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

BigInt ceil(const Rational& r) {
  const BigInt n = numerator(r);
  const BigInt d = denominator(r);
  BigInt q = n / d;  // truncates toward zero
  if (q * d != n && n > 0) q += 1;
  return q;
}

std::string to_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

Rational parse_rational(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(BigInt(text));
    const BigInt den(text.substr(slash + 1));
    if (den == 0) throw ArityError("zero denominator in '" + text + "'");
    return Rational(BigInt(text.substr(0, slash)), den);
  } catch (const std::runtime_error&) {
    throw ArityError("not a rational number: '" + text + "'");
  }
}

Prob::Prob(Rational value) : value_(std::move(value)) {
  if (value_ < 0 || value_ > 1) throw ArityError("probability out of [0,1]: " + to_string(value_));
}

}  // namespace demibit

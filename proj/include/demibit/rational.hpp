#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace demibit {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// count / total as an exact rational in lowest terms.
Rational ratio(std::uint64_t count, std::uint64_t total);

/// 2^-k.
Rational pow2_inverse(unsigned k);

BigInt numerator(const Rational& r);
BigInt denominator(const Rational& r);

/// Least integer >= r.
BigInt ceil(const Rational& r);

/// Always "<num>/<den>", including "0/1" and "3/1".
std::string to_string(const Rational& r);

/// Accepts "p/q" or an integer.
Rational parse_rational(const std::string& text);

/// An exact probability: a rational constrained to [0, 1].
class Prob {
 public:
  Prob() = default;
  explicit Prob(Rational value);
  Prob(std::uint64_t count, std::uint64_t total) : Prob(ratio(count, total)) {}

  const Rational& value() const noexcept { return value_; }
  operator const Rational&() const noexcept { return value_; }

  friend bool operator==(const Prob& a, const Prob& b) { return a.value_ == b.value_; }

 private:
  Rational value_{0};
};

inline std::string to_string(const Prob& p) { return to_string(p.value()); }

}  // namespace demibit

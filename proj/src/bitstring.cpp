#include "demibit/bitstring.hpp"

#include "demibit/errors.hpp"

namespace demibit {

BitString::BitString(std::initializer_list<int> bits) {
  bits_.reserve(bits.size());
  for (int b : bits) {
    if (b != 0 && b != 1) throw ArityError("bit value must be 0 or 1");
    bits_.push_back(static_cast<std::uint8_t>(b));
  }
}

BitString BitString::parse(std::string_view text) {
  BitString out(text.size());
  for (std::size_t k = 0; k < text.size(); ++k) {
    if (text[k] != '0' && text[k] != '1')
      throw ArityError("not a bit string: '" + std::string(text) + "'");
    out.bits_[k] = static_cast<std::uint8_t>(text[k] - '0');
  }
  return out;
}

BitString BitString::from_code(std::uint64_t code, std::size_t length) {
  if (length > 64) throw ArityError("bit string code longer than 64 bits");
  BitString out(length);
  for (std::size_t i = 1; i <= length; ++i) out.bits_[i - 1] = static_cast<std::uint8_t>(code_bit(code, length, i));
  return out;
}

std::size_t BitString::index(long i) const {
  const long n = static_cast<long>(bits_.size());
  if (i >= 1 && i <= n) return static_cast<std::size_t>(i - 1);
  if (i <= -1 && -i <= n) return static_cast<std::size_t>(n + i);
  throw ArityError("bit index " + std::to_string(i) + " out of range for length " + std::to_string(n));
}

int BitString::at(long i) const { return bits_[index(i)]; }

void BitString::set(long i, int value) { bits_[index(i)] = static_cast<std::uint8_t>(value != 0); }

BitString BitString::slice(long i, long j) const {
  if (i > j) return {};
  const std::size_t lo = index(i);
  const std::size_t hi = index(j);
  BitString out;
  out.bits_.assign(bits_.begin() + static_cast<long>(lo), bits_.begin() + static_cast<long>(hi) + 1);
  return out;
}

BitString BitString::operator+(const BitString& rhs) const {
  BitString out = *this;
  out += rhs;
  return out;
}

BitString& BitString::operator+=(const BitString& rhs) {
  bits_.insert(bits_.end(), rhs.bits_.begin(), rhs.bits_.end());
  return *this;
}

std::uint64_t BitString::code() const {
  if (bits_.size() > 64) throw ArityError("bit string longer than 64 bits has no code");
  std::uint64_t c = 0;
  for (auto b : bits_) c = (c << 1) | b;
  return c;
}

std::string BitString::str() const {
  std::string s(bits_.size(), '0');
  for (std::size_t k = 0; k < bits_.size(); ++k) s[k] = static_cast<char>('0' + bits_[k]);
  return s;
}

}  // namespace demibit

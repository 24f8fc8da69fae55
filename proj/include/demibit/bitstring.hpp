#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace demibit {

/// Fixed-length bit vector with 1-based indexing from the left.
///
/// A string of length L is identified with the integer code whose most
/// significant of L bits is x[1], so lexicographic order of strings equals
/// numeric order of codes and "all zeros" enumerates first.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t length) : bits_(length, 0) {}
  BitString(std::initializer_list<int> bits);

  /// Parses ASCII '0'/'1'. Throws ArityError on any other character.
  static BitString parse(std::string_view text);
  static BitString from_code(std::uint64_t code, std::size_t length);

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }

  /// x[i] for 1 <= i <= size(); negative i counts from the right (x[-1] is
  /// the last bit).
  int at(long i) const;
  void set(long i, int value);

  /// x[i..j], both ends inclusive and 1-based; empty when i > j.
  BitString slice(long i, long j) const;

  BitString operator+(const BitString& rhs) const;
  BitString& operator+=(const BitString& rhs);

  std::uint64_t code() const;
  std::string str() const;

  friend bool operator==(const BitString&, const BitString&) = default;
  friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

 private:
  std::size_t index(long i) const;

  std::vector<std::uint8_t> bits_;
};

/// Bit x[i] (1-based) of a length-`length` code.
constexpr int code_bit(std::uint64_t code, std::size_t length, std::size_t i) {
  return static_cast<int>((code >> (length - i)) & 1u);
}

/// Code of x[i..j] taken from a length-`length` code.
constexpr std::uint64_t code_slice(std::uint64_t code, std::size_t length, std::size_t i,
                                   std::size_t j) {
  if (i > j) return 0;
  const std::size_t width = j - i + 1;
  const std::uint64_t mask = width >= 64 ? ~0ull : ((1ull << width) - 1);
  return (code >> (length - j)) & mask;
}

/// Code of the concatenation a·b where b has `b_length` bits.
constexpr std::uint64_t code_concat(std::uint64_t a, std::uint64_t b, std::size_t b_length) {
  return b_length >= 64 ? b : ((a << b_length) | b);
}

}  // namespace demibit

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "demibit/bitstring.hpp"
#include "demibit/circuit.hpp"
#include "demibit/rational.hpp"

namespace demibit {

/// Explicit total map {0,1}^in_bits -> {0,1}^out_bits, entry x holding the
/// output code for input code x.
struct FunctionTable {
  std::size_t in_bits = 0;
  std::size_t out_bits = 0;
  std::vector<std::uint64_t> values;

  FunctionTable() = default;
  FunctionTable(std::size_t in, std::size_t out, std::vector<std::uint64_t> v);

  static FunctionTable identity(std::size_t n);
  static FunctionTable constant(std::size_t n, std::size_t out, std::uint64_t value);
  static FunctionTable from_function(std::size_t n, std::size_t out,
                                     const std::function<std::uint64_t(std::uint64_t)>& f);

  std::uint64_t operator()(std::uint64_t x) const { return values[x]; }
  std::size_t domain_size() const noexcept { return values.size(); }
  bool injective() const;

  friend bool operator==(const FunctionTable&, const FunctionTable&) = default;
};

/// Total stretching map {0,1}^n -> {0,1}^l with l > n, backed by a circuit
/// or by an explicit table. Circuit-backed generators are compiled to a
/// table on first use; copies share that cache.
class Generator {
 public:
  static Generator from_table(std::string label, FunctionTable table);
  static Generator from_circuit(std::string label, Circuit circuit);

  const std::string& label() const noexcept { return label_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t l() const noexcept { return l_; }
  std::size_t stretch() const noexcept { return l_ - n_; }

  const FunctionTable& table() const;
  std::uint64_t operator()(std::uint64_t seed) const { return table().values[seed]; }
  BitString operator()(const BitString& seed) const;

  const std::optional<Circuit>& backing_circuit() const noexcept { return circuit_; }
  /// Backing circuit, or a circuit compiled from the table.
  Circuit as_circuit() const;

 private:
  Generator(std::string label, std::size_t n, std::size_t l);

  struct Cache {
    std::once_flag once;
    FunctionTable table;
  };

  std::string label_;
  std::size_t n_ = 0;
  std::size_t l_ = 0;
  std::optional<Circuit> circuit_;
  std::shared_ptr<Cache> cache_;
};

/// Block layout of the stretching algorithm for seed length N and exponent c:
/// m = ceil(N^c) blocks of n = floor(N/m) bits plus rem = N - m*n leftover bits.
struct StretchParams {
  std::size_t N = 0;
  Rational c;
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t rem = 0;

  /// Throws ArityError unless 0 < c < 1 and the derived n is at least 1.
  static StretchParams make(std::size_t N, const Rational& c);

  std::size_t output_length() const noexcept { return N + m; }
};

/// Least integer m with m >= N^c, decided exactly (m^q >= N^p for c = p/q).
std::size_t ceil_pow(std::size_t N, const Rational& c);

/// g(x_1 ... x_m r) = b(x_1) ... b(x_m) r.
Generator stretch(const Generator& b, const StretchParams& p);

/// g(x) = f(x) b(x) for a length-preserving f and a predicate b.
Generator concat_bit(const FunctionTable& f, const FunctionTable& b_pred, std::string label = "concat");

/// Inverse of concat_bit: f(x) = g(x)[1..n], b(x) = g(x)[n+1].
std::pair<FunctionTable, FunctionTable> split_last(const Generator& g);

/// G_{m,C}(x_1 ... x_m) = x_1 C(x_1) ... x_m C(x_m).
Generator gmc(std::size_t m, const Circuit& predicate);

/// G(x) = g(x[1..n_i]) x[n_i+1..n] for the largest family length n_i <= n.
Generator io_patch(std::span<const Generator> family, std::size_t n);

/// Index into `family` of the generator io_patch uses for length n.
std::size_t io_patch_source(std::span<const Generator> family, std::size_t n);

std::set<BitString> image(const Generator& g);
std::map<BitString, std::uint64_t> image_multiplicity(const Generator& g);
/// member[y] == 1 iff y is in the image; size 2^l.
std::vector<std::uint8_t> image_indicator(const Generator& g);

/// Generator file:
///     generator <name> n=<n> l=<l>
///     circuit <circuit-name>         | 2^n lines: map <seed> <output>
/// `lookup` resolves circuit names; it may return nullptr.
Generator parse_generator(std::string_view text,
                          const std::function<const Circuit*(std::string_view)>& lookup);
std::string to_generator_file(const Generator& g);

}  // namespace demibit

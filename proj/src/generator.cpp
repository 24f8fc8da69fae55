#include "demibit/generator.hpp"

#include <charconv>
#include <map>
#include <sstream>

#include "demibit/circuit_builder.hpp"
#include "demibit/errors.hpp"
#include "text_util.hpp"

namespace demibit {

namespace {

void check_table_shape(std::size_t in, std::size_t out) {
  check_cap(in, "table over " + std::to_string(in) + " input bits");
  if (out > 63) throw ArityError("outputs longer than 63 bits are not supported");
}

std::uint64_t mask(std::size_t bits) { return bits >= 64 ? ~0ull : ((1ull << bits) - 1); }

}  // namespace

FunctionTable::FunctionTable(std::size_t in, std::size_t out, std::vector<std::uint64_t> v)
    : in_bits(in), out_bits(out), values(std::move(v)) {
  check_table_shape(in, out);
  if (values.size() != (1ull << in))
    throw ArityError("table has " + std::to_string(values.size()) + " entries, expected 2^" +
                     std::to_string(in));
  for (auto y : values)
    if (y & ~mask(out)) throw ArityError("table entry wider than " + std::to_string(out) + " bits");
}

FunctionTable FunctionTable::identity(std::size_t n) {
  return from_function(n, n, [](std::uint64_t x) { return x; });
}

FunctionTable FunctionTable::constant(std::size_t n, std::size_t out, std::uint64_t value) {
  return from_function(n, out, [value](std::uint64_t) { return value; });
}

FunctionTable FunctionTable::from_function(std::size_t n, std::size_t out,
                                           const std::function<std::uint64_t(std::uint64_t)>& f) {
  check_table_shape(n, out);
  std::vector<std::uint64_t> v(1ull << n);
  for (std::uint64_t x = 0; x < v.size(); ++x) v[x] = f(x);
  return FunctionTable(n, out, std::move(v));
}

bool FunctionTable::injective() const {
  std::set<std::uint64_t> seen(values.begin(), values.end());
  return seen.size() == values.size();
}

Generator::Generator(std::string label, std::size_t n, std::size_t l)
    : label_(std::move(label)), n_(n), l_(l), cache_(std::make_shared<Cache>()) {
  if (l_ <= n_)
    throw ArityError("generator '" + label_ + "' must stretch: l=" + std::to_string(l_) +
                     " <= n=" + std::to_string(n_));
  check_table_shape(n_, l_);
}

Generator Generator::from_table(std::string label, FunctionTable table) {
  Generator g(std::move(label), table.in_bits, table.out_bits);
  std::call_once(g.cache_->once, [&] { g.cache_->table = std::move(table); });
  return g;
}

Generator Generator::from_circuit(std::string label, Circuit circuit) {
  if (circuit.n_wit() != 0)
    throw ArityError("generator circuit '" + circuit.name() + "' must be deterministic");
  Generator g(std::move(label), circuit.n_std(), circuit.outputs().size());
  g.circuit_ = std::move(circuit);
  return g;
}

const FunctionTable& Generator::table() const {
  std::call_once(cache_->once, [this] {
    cache_->table = FunctionTable(n_, l_, output_table(*circuit_));
  });
  return cache_->table;
}

BitString Generator::operator()(const BitString& seed) const {
  if (seed.size() != n_) throw ArityError("generator '" + label_ + "' expects a seed of length " + std::to_string(n_));
  return BitString::from_code((*this)(seed.code()), l_);
}

Circuit Generator::as_circuit() const {
  if (circuit_) return *circuit_;
  return circuit_from_table(label_, n_, l_, table().values);
}

std::size_t ceil_pow(std::size_t N, const Rational& c) {
  const BigInt p = numerator(c);
  const BigInt q = denominator(c);
  if (p <= 0 || p >= q) throw ArityError("stretch exponent must satisfy 0 < c < 1, got " + to_string(c));
  const auto pu = p.convert_to<unsigned>();
  const auto qu = q.convert_to<unsigned>();
  const BigInt target = boost::multiprecision::pow(BigInt(N), pu);
  std::size_t m = 1;
  while (boost::multiprecision::pow(BigInt(m), qu) < target) ++m;
  return m;
}

StretchParams StretchParams::make(std::size_t N, const Rational& c) {
  if (N < 1) throw ArityError("stretch seed length must be positive");
  StretchParams p;
  p.N = N;
  p.c = c;
  p.m = ceil_pow(N, c);
  p.n = N / p.m;
  p.rem = N - p.m * p.n;
  if (p.n < 1) throw ArityError("stretch parameters leave empty blocks");
  return p;
}

Generator stretch(const Generator& b, const StretchParams& p) {
  if (b.l() != b.n() + 1) throw ArityError("stretch base generator must have l = n + 1");
  if (b.n() != p.n)
    throw ArityError("base generator seed length " + std::to_string(b.n()) +
                     " does not match block length " + std::to_string(p.n));
  check_table_shape(p.N, p.output_length());
  const auto& bt = b.table();
  auto table = FunctionTable::from_function(p.N, p.output_length(), [&](std::uint64_t x) {
    std::uint64_t out = 0;
    for (std::size_t j = 1; j <= p.m; ++j) {
      const auto block = code_slice(x, p.N, (j - 1) * p.n + 1, j * p.n);
      out = code_concat(out, bt(block), p.n + 1);
    }
    return code_concat(out, code_slice(x, p.N, p.m * p.n + 1, p.N), p.rem);
  });
  std::ostringstream label;
  label << "stretch(" << b.label() << ",N=" << p.N << ",c=" << to_string(p.c) << ")";
  return Generator::from_table(label.str(), std::move(table));
}

Generator concat_bit(const FunctionTable& f, const FunctionTable& b_pred, std::string label) {
  if (f.in_bits != f.out_bits) throw ArityError("concat_bit needs a length-preserving f");
  if (b_pred.in_bits != f.in_bits || b_pred.out_bits != 1)
    throw ArityError("concat_bit predicate must map {0,1}^n to one bit");
  auto table = FunctionTable::from_function(
      f.in_bits, f.in_bits + 1, [&](std::uint64_t x) { return (f(x) << 1) | b_pred(x); });
  return Generator::from_table(std::move(label), std::move(table));
}

std::pair<FunctionTable, FunctionTable> split_last(const Generator& g) {
  if (g.l() != g.n() + 1) throw ArityError("split_last needs a generator with l = n + 1");
  const auto& t = g.table();
  return {FunctionTable::from_function(g.n(), g.n(), [&](std::uint64_t x) { return t(x) >> 1; }),
          FunctionTable::from_function(g.n(), 1, [&](std::uint64_t x) { return t(x) & 1u; })};
}

Generator gmc(std::size_t m, const Circuit& predicate) {
  if (m < 1) throw ArityError("gmc needs m >= 1");
  check_mode(predicate, EvalMode::Det);
  const std::size_t n = predicate.n_std();
  check_table_shape(m * n, m * (n + 1));
  const auto tt = truth_table(predicate, EvalMode::Det);
  auto table = FunctionTable::from_function(m * n, m * (n + 1), [&](std::uint64_t x) {
    std::uint64_t out = 0;
    for (std::size_t j = 1; j <= m; ++j) {
      const auto block = code_slice(x, m * n, (j - 1) * n + 1, j * n);
      out = code_concat(code_concat(out, block, n), tt[block] == TriBit::One ? 1 : 0, 1);
    }
    return out;
  });
  return Generator::from_table("gmc(" + std::to_string(m) + "," + predicate.name() + ")", std::move(table));
}

std::size_t io_patch_source(std::span<const Generator> family, std::size_t n) {
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < family.size(); ++k) {
    if (family[k].stretch() != family.front().stretch())
      throw ArityError("i.o. family members must share one stretch");
    if (family[k].n() <= n && (!best || family[k].n() > family[*best].n())) best = k;
  }
  if (!best) throw PreconditionError("no family member with seed length <= " + std::to_string(n));
  return *best;
}

Generator io_patch(std::span<const Generator> family, std::size_t n) {
  const auto& g = family[io_patch_source(family, n)];
  const std::size_t ni = g.n();
  const std::size_t tail = n - ni;
  auto table = FunctionTable::from_function(n, n + g.stretch(), [&](std::uint64_t x) {
    return code_concat(g(code_slice(x, n, 1, ni)), code_slice(x, n, ni + 1, n), tail);
  });
  return Generator::from_table("io_patch(" + g.label() + ",n=" + std::to_string(n) + ")", std::move(table));
}

std::set<BitString> image(const Generator& g) {
  std::set<BitString> out;
  for (auto y : g.table().values) out.insert(BitString::from_code(y, g.l()));
  return out;
}

std::map<BitString, std::uint64_t> image_multiplicity(const Generator& g) {
  std::map<BitString, std::uint64_t> out;
  for (auto y : g.table().values) ++out[BitString::from_code(y, g.l())];
  return out;
}

std::vector<std::uint8_t> image_indicator(const Generator& g) {
  check_cap(g.l(), "image of '" + g.label() + "'");
  std::vector<std::uint8_t> member(1ull << g.l(), 0);
  for (auto y : g.table().values) member[y] = 1;
  return member;
}

Generator parse_generator(std::string_view text,
                          const std::function<const Circuit*(std::string_view)>& lookup) {
  const auto lines = detail::logical_lines(text);
  if (lines.empty()) throw ParseError(1, "empty generator file");
  const auto& [hl, header] = lines.front();
  const auto head = detail::split_ws(header);
  if (head.size() != 4 || head[0] != "generator" || head[2].rfind("n=", 0) != 0 ||
      head[3].rfind("l=", 0) != 0)
    throw ParseError(hl, "expected 'generator <name> n=<n> l=<l>'");
  auto count = [&](const std::string& s, std::size_t line) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
      throw ParseError(line, "bad number '" + s + "'");
    return v;
  };
  const std::string name = head[1];
  const std::size_t n = count(head[2].substr(2), hl);
  const std::size_t l = count(head[3].substr(2), hl);
  if (l <= n) throw ParseError(hl, "generator must stretch (l > n)");
  if (l > 63) throw ParseError(hl, "output length above 63 bits is not supported");

  if (lines.size() >= 2) {
    const auto tok = detail::split_ws(lines[1].second);
    if (!tok.empty() && tok[0] == "circuit") {
      if (tok.size() != 2 || lines.size() != 2)
        throw ParseError(lines[1].first, "expected a single 'circuit <name>' line");
      const Circuit* c = lookup ? lookup(tok[1]) : nullptr;
      if (!c) throw ParseError(lines[1].first, "unknown circuit '" + tok[1] + "'");
      if (c->n_std() != n || c->n_wit() != 0 || c->outputs().size() != l)
        throw ParseError(lines[1].first, "circuit '" + tok[1] + "' does not have shape n=" +
                                             std::to_string(n) + " l=" + std::to_string(l) + " det");
      return Generator::from_circuit(name, *c);
    }
  }

  check_cap(n, "generator '" + name + "'");
  std::vector<std::uint64_t> values(1ull << n);
  std::vector<std::uint8_t> seen(values.size(), 0);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& [ln, body] = lines[k];
    const auto tok = detail::split_ws(body);
    if (tok.size() != 3 || tok[0] != "map") throw ParseError(ln, "expected 'map <seed> <output>'");
    if (tok[1].size() != n || tok[2].size() != l)
      throw ParseError(ln, "map entry has wrong lengths");
    BitString seed, out;
    try {
      seed = BitString::parse(tok[1]);
      out = BitString::parse(tok[2]);
    } catch (const ArityError& e) {
      throw ParseError(ln, e.what());
    }
    const auto s = seed.code();
    if (seen[s]) throw ParseError(ln, "duplicate seed " + tok[1]);
    seen[s] = 1;
    values[s] = out.code();
  }
  for (std::size_t s = 0; s < seen.size(); ++s)
    if (!seen[s]) throw ParseError(lines.back().first, "missing map entry for seed " + BitString::from_code(s, n).str());
  return Generator::from_table(name, FunctionTable(n, l, std::move(values)));
}

std::string to_generator_file(const Generator& g) {
  std::ostringstream os;
  os << "generator " << g.label() << " n=" << g.n() << " l=" << g.l() << '\n';
  const auto& t = g.table();
  for (std::uint64_t s = 0; s < t.domain_size(); ++s)
    os << "map " << BitString::from_code(s, g.n()).str() << ' ' << BitString::from_code(t(s), g.l()).str() << '\n';
  return os.str();
}

}  // namespace demibit

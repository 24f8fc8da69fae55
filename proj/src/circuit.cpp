#include "demibit/circuit.hpp"

#include <array>
#include <atomic>
#include <utility>

#include "demibit/errors.hpp"

namespace demibit {

namespace {

std::atomic<unsigned> g_cap{24};

constexpr std::array<std::uint64_t, 6> kLanePattern = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

void eval_gates(const Circuit& c, std::vector<std::uint64_t>& val) {
  std::size_t v = c.n_inputs();
  for (const Gate& g : c.gates()) {
    std::uint64_t r = 0;
    switch (g.op) {
      case Op::And: r = val[g.a] & val[g.b]; break;
      case Op::Or: r = val[g.a] | val[g.b]; break;
      case Op::Xor: r = val[g.a] ^ val[g.b]; break;
      case Op::Not: r = ~val[g.a]; break;
      case Op::Const0: r = 0; break;
      case Op::Const1: r = ~0ull; break;
    }
    val[v++] = r;
  }
}

struct BranchSummary {
  bool any_p = false;
  bool any_q = false;
};

// Simulates every witness (and, unless `fixed_x` is given, every standard
// input) 64 assignments at a time. `split` maps node values to two words;
// the result records, per x, whether any branch set each word.
//
// Lane layout: assignment index = (x_code << n_wit) | w_code, so the
// witnesses of one x occupy consecutive lanes in lexicographic order.
template <class Split>
std::vector<BranchSummary> scan(const Circuit& c, const std::uint64_t* fixed_x, Split split) {
  check_cap(c.n_inputs(), "circuit '" + c.name() + "'");
  const std::size_t n_std = c.n_std();
  const std::size_t n_wit = c.n_wit();
  const std::size_t free_bits = fixed_x ? n_wit : n_std + n_wit;
  const std::uint64_t lanes = 1ull << free_bits;
  const std::uint64_t chunks = lanes >= 64 ? lanes / 64 : 1;
  const std::uint64_t valid = lanes >= 64 ? ~0ull : ((1ull << lanes) - 1);
  const std::uint64_t group = 1ull << n_wit;

  std::vector<BranchSummary> out(fixed_x ? 1 : (1ull << n_std));
  std::vector<std::uint64_t> val(c.size());

  auto lane_word = [](std::size_t bit, std::uint64_t chunk) -> std::uint64_t {
    if (bit < 6) return kLanePattern[bit];
    return ((chunk >> (bit - 6)) & 1u) ? ~0ull : 0ull;
  };

  for (std::uint64_t ch = 0; ch < chunks; ++ch) {
    for (std::size_t t = 1; t <= n_std; ++t) {
      if (fixed_x)
        val[t - 1] = code_bit(*fixed_x, n_std, t) ? ~0ull : 0ull;
      else
        val[t - 1] = lane_word(n_wit + n_std - t, ch);
    }
    for (std::size_t t = 1; t <= n_wit; ++t) val[n_std + t - 1] = lane_word(n_wit - t, ch);
    eval_gates(c, val);
    auto [p, q] = split(val);
    p &= valid;
    q &= valid;
    if (group >= 64) {
      auto& s = out[fixed_x ? 0 : (ch >> (n_wit - 6))];
      s.any_p |= p != 0;
      s.any_q |= q != 0;
    } else {
      const std::uint64_t gmask = (1ull << group) - 1;
      const std::uint64_t per_chunk = std::min<std::uint64_t>(64, lanes) / group;
      for (std::uint64_t g = 0; g < per_chunk; ++g) {
        auto& s = out[fixed_x ? 0 : ch * (64 / group) + g];
        s.any_p |= ((p >> (g * group)) & gmask) != 0;
        s.any_q |= ((q >> (g * group)) & gmask) != 0;
      }
    }
  }
  return out;
}

std::vector<TriBit> summarize(const Circuit& c, EvalMode mode, const std::uint64_t* fixed_x,
                              Totality totality) {
  check_mode(c, mode);
  std::vector<TriBit> result;
  if (mode == EvalMode::FuncComputing) {
    const auto flag = c.outputs()[0];
    const auto value = c.outputs()[1];
    auto s = scan(c, fixed_x, [&](const std::vector<std::uint64_t>& v) {
      return std::pair{v[flag] & v[value], v[flag] & ~v[value]};
    });
    result.reserve(s.size());
    for (std::size_t x = 0; x < s.size(); ++x) {
      const bool one = s[x].any_p;
      const bool zero = s[x].any_q;
      if (one && zero)
        result.push_back(TriBit::Bot);
      else if (one)
        result.push_back(TriBit::One);
      else if (zero)
        result.push_back(TriBit::Zero);
      else if (totality == Totality::TreatAsBot)
        result.push_back(TriBit::Bot);
      else
        throw TotalityError("function-computing circuit '" + c.name() +
                            "' has no valid branch on input " +
                            BitString::from_code(fixed_x ? *fixed_x : x, c.n_std()).str());
    }
    return result;
  }
  const auto out = c.outputs()[0];
  auto s = scan(c, fixed_x, [&](const std::vector<std::uint64_t>& v) {
    return std::pair{v[out], ~v[out]};
  });
  result.reserve(s.size());
  for (const auto& b : s) {
    // Det has a single branch, so "some branch accepts" is the plain value.
    result.push_back(mode == EvalMode::CoNondet ? to_tribit(!b.any_q) : to_tribit(b.any_p));
  }
  return result;
}

}  // namespace

std::string_view to_string(Op op) {
  switch (op) {
    case Op::And: return "AND";
    case Op::Or: return "OR";
    case Op::Not: return "NOT";
    case Op::Xor: return "XOR";
    case Op::Const0: return "CONST0";
    case Op::Const1: return "CONST1";
  }
  return "?";
}

std::string_view to_string(EvalMode mode) {
  switch (mode) {
    case EvalMode::Det: return "det";
    case EvalMode::Nondet: return "nondet";
    case EvalMode::CoNondet: return "conondet";
    case EvalMode::FuncComputing: return "func";
  }
  return "?";
}

std::string_view to_string(TriBit t) {
  switch (t) {
    case TriBit::Zero: return "0";
    case TriBit::One: return "1";
    case TriBit::Bot: return "bot";
  }
  return "?";
}

EvalMode parse_mode(std::string_view text) {
  if (text == "det") return EvalMode::Det;
  if (text == "nondet") return EvalMode::Nondet;
  if (text == "conondet") return EvalMode::CoNondet;
  if (text == "func") return EvalMode::FuncComputing;
  throw ArityError("unknown evaluation mode '" + std::string(text) + "'");
}

Circuit::Circuit(std::string name, std::size_t n_std, std::size_t n_wit, std::vector<Gate> gates,
                 std::vector<Node> outputs)
    : name_(std::move(name)), n_std_(n_std), n_wit_(n_wit), gates_(std::move(gates)),
      outputs_(std::move(outputs)) {
  if (outputs_.empty()) throw ArityError("circuit '" + name_ + "' has no outputs");
  const std::size_t n_in = n_inputs();
  for (std::size_t k = 0; k < gates_.size(); ++k) {
    const Gate& g = gates_[k];
    const std::size_t self = n_in + k;
    const int arity = g.op == Op::Not ? 1 : (g.op == Op::Const0 || g.op == Op::Const1) ? 0 : 2;
    if ((arity >= 1 && g.a >= self) || (arity == 2 && g.b >= self))
      throw ArityError("circuit '" + name_ + "': gate " + std::to_string(k + 1) +
                       " refers to a node that does not precede it");
  }
  for (Node o : outputs_)
    if (o >= size()) throw ArityError("circuit '" + name_ + "': output refers to a missing node");
}

Circuit::Node Circuit::std_input(std::size_t t) const {
  if (t < 1 || t > n_std_) throw ArityError("standard input index out of range");
  return static_cast<Node>(t - 1);
}

Circuit::Node Circuit::wit_input(std::size_t t) const {
  if (t < 1 || t > n_wit_) throw ArityError("witness input index out of range");
  return static_cast<Node>(n_std_ + t - 1);
}

Circuit Circuit::renamed(std::string name) const {
  Circuit c = *this;
  c.name_ = std::move(name);
  return c;
}

unsigned enumeration_cap() noexcept { return g_cap.load(std::memory_order_relaxed); }
void set_enumeration_cap(unsigned bits) noexcept { g_cap.store(bits, std::memory_order_relaxed); }

void check_cap(std::size_t bits, std::string_view what) {
  if (bits > enumeration_cap() || bits > 62)
    throw CapExceeded(std::string(what) + " needs " + std::to_string(bits) +
                      " enumerated bits, cap is " + std::to_string(enumeration_cap()));
}

void check_mode(const Circuit& c, EvalMode mode) {
  if (mode == EvalMode::Det && c.n_wit() != 0)
    throw ArityError("circuit '" + c.name() + "' has witness inputs but was evaluated in det mode");
  if (mode == EvalMode::FuncComputing && c.outputs().size() != 2)
    throw ArityError("function-computing circuit '" + c.name() + "' must have 2 outputs");
  if (mode != EvalMode::FuncComputing && c.outputs().size() != 1)
    throw ArityError("decision circuit '" + c.name() + "' must have exactly 1 output");
}

BitString eval_raw(const Circuit& c, const BitString& x, const BitString& w) {
  if (x.size() != c.n_std() || w.size() != c.n_wit())
    throw ArityError("circuit '" + c.name() + "' expects |x|=" + std::to_string(c.n_std()) +
                     ", |w|=" + std::to_string(c.n_wit()));
  std::vector<std::uint64_t> val(c.size());
  for (std::size_t t = 1; t <= c.n_std(); ++t) val[t - 1] = x.at(static_cast<long>(t)) ? 1 : 0;
  for (std::size_t t = 1; t <= c.n_wit(); ++t)
    val[c.n_std() + t - 1] = w.at(static_cast<long>(t)) ? 1 : 0;
  eval_gates(c, val);
  BitString out(c.outputs().size());
  for (std::size_t k = 0; k < c.outputs().size(); ++k)
    out.set(static_cast<long>(k + 1), static_cast<int>(val[c.outputs()[k]] & 1u));
  return out;
}

TriBit eval(const Circuit& c, EvalMode mode, const BitString& x, Totality totality) {
  if (x.size() != c.n_std())
    throw ArityError("circuit '" + c.name() + "' expects " + std::to_string(c.n_std()) +
                     " standard inputs, got " + std::to_string(x.size()));
  const std::uint64_t code = x.code();
  return summarize(c, mode, &code, totality).front();
}

std::vector<TriBit> truth_table(const Circuit& c, EvalMode mode, Totality totality) {
  return summarize(c, mode, nullptr, totality);
}

std::vector<std::uint64_t> output_table(const Circuit& c) {
  if (c.n_wit() != 0) throw ArityError("output table needs a deterministic circuit");
  if (c.outputs().size() > 64) throw ArityError("more than 64 outputs");
  check_cap(c.n_std(), "circuit '" + c.name() + "'");
  const std::size_t n = c.n_std();
  const std::uint64_t count = 1ull << n;
  const std::size_t n_out = c.outputs().size();
  std::vector<std::uint64_t> table(count, 0);
  std::vector<std::uint64_t> val(c.size());
  const std::uint64_t chunks = count >= 64 ? count / 64 : 1;
  for (std::uint64_t ch = 0; ch < chunks; ++ch) {
    for (std::size_t t = 1; t <= n; ++t) {
      const std::size_t bit = n - t;
      val[t - 1] = bit < 6 ? kLanePattern[bit] : (((ch >> (bit - 6)) & 1u) ? ~0ull : 0ull);
    }
    eval_gates(c, val);
    const std::uint64_t lanes = std::min<std::uint64_t>(64, count);
    for (std::uint64_t lane = 0; lane < lanes; ++lane) {
      std::uint64_t code = 0;
      for (std::size_t k = 0; k < n_out; ++k) code = (code << 1) | ((val[c.outputs()[k]] >> lane) & 1u);
      table[ch * 64 + lane] = code;
    }
  }
  return table;
}

std::optional<BitString> first_witness(const Circuit& c, const BitString& x, int target,
                                       std::size_t output_index) {
  if (output_index >= c.outputs().size()) throw ArityError("output index out of range");
  check_cap(c.n_inputs(), "circuit '" + c.name() + "'");
  const std::uint64_t count = 1ull << c.n_wit();
  for (std::uint64_t w = 0; w < count; ++w) {
    const BitString ws = BitString::from_code(w, c.n_wit());
    if (eval_raw(c, x, ws).at(static_cast<long>(output_index + 1)) == target) return ws;
  }
  return std::nullopt;
}

}  // namespace demibit

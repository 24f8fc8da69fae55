#include "demibit/circuit_builder.hpp"

#include "demibit/errors.hpp"

namespace demibit {

CircuitBuilder::CircuitBuilder(std::size_t n_std, std::size_t n_wit) : n_std_(n_std), n_wit_(n_wit) {}

CircuitBuilder::Node CircuitBuilder::input(std::size_t t) const {
  if (t < 1 || t > n_std_) throw ArityError("builder: standard input index out of range");
  return static_cast<Node>(t - 1);
}

CircuitBuilder::Node CircuitBuilder::witness(std::size_t t) const {
  if (t < 1 || t > n_wit_) throw ArityError("builder: witness index out of range");
  return static_cast<Node>(n_std_ + t - 1);
}

std::vector<CircuitBuilder::Node> CircuitBuilder::inputs(std::size_t first, std::size_t count) const {
  std::vector<Node> v;
  for (std::size_t k = 0; k < count; ++k) v.push_back(input(first + k));
  return v;
}

std::vector<CircuitBuilder::Node> CircuitBuilder::witnesses(std::size_t first, std::size_t count) const {
  std::vector<Node> v;
  for (std::size_t k = 0; k < count; ++k) v.push_back(witness(first + k));
  return v;
}

CircuitBuilder::Node CircuitBuilder::push(Op op, Node a, Node b) {
  gates_.push_back(Gate{op, a, b});
  return static_cast<Node>(n_std_ + n_wit_ + gates_.size() - 1);
}

CircuitBuilder::Known CircuitBuilder::known(Node v) const {
  if (v < n_std_ + n_wit_) return Known::No;
  const Op op = gates_[v - n_std_ - n_wit_].op;
  if (op == Op::Const0) return Known::Zero;
  if (op == Op::Const1) return Known::One;
  return Known::No;
}

CircuitBuilder::Node CircuitBuilder::constant(int v) {
  int& slot = v ? const1_ : const0_;
  if (slot < 0) slot = static_cast<int>(push(v ? Op::Const1 : Op::Const0));
  return static_cast<Node>(slot);
}

std::vector<CircuitBuilder::Node> CircuitBuilder::constants(std::uint64_t code, std::size_t length) {
  std::vector<Node> v;
  for (std::size_t i = 1; i <= length; ++i) v.push_back(constant(code_bit(code, length, i)));
  return v;
}

CircuitBuilder::Node CircuitBuilder::land(Node a, Node b) {
  const Known ka = known(a), kb = known(b);
  if (ka == Known::Zero || kb == Known::Zero) return constant(0);
  if (ka == Known::One) return b;
  if (kb == Known::One) return a;
  if (a == b) return a;
  return push(Op::And, a, b);
}

CircuitBuilder::Node CircuitBuilder::lor(Node a, Node b) {
  const Known ka = known(a), kb = known(b);
  if (ka == Known::One || kb == Known::One) return constant(1);
  if (ka == Known::Zero) return b;
  if (kb == Known::Zero) return a;
  if (a == b) return a;
  return push(Op::Or, a, b);
}

CircuitBuilder::Node CircuitBuilder::lxor(Node a, Node b) {
  const Known ka = known(a), kb = known(b);
  if (ka != Known::No && kb != Known::No) return constant((ka == Known::One) != (kb == Known::One));
  if (ka == Known::Zero) return b;
  if (kb == Known::Zero) return a;
  if (ka == Known::One) return lnot(b);
  if (kb == Known::One) return lnot(a);
  return push(Op::Xor, a, b);
}

CircuitBuilder::Node CircuitBuilder::lnot(Node a) {
  const Known ka = known(a);
  if (ka != Known::No) return constant(ka == Known::Zero);
  return push(Op::Not, a);
}

CircuitBuilder::Node CircuitBuilder::and_all(std::span<const Node> v) {
  if (v.empty()) return constant(1);
  Node acc = v[0];
  for (std::size_t k = 1; k < v.size(); ++k) acc = land(acc, v[k]);
  return acc;
}

CircuitBuilder::Node CircuitBuilder::or_all(std::span<const Node> v) {
  if (v.empty()) return constant(0);
  Node acc = v[0];
  for (std::size_t k = 1; k < v.size(); ++k) acc = lor(acc, v[k]);
  return acc;
}

CircuitBuilder::Node CircuitBuilder::equals(std::span<const Node> a, std::span<const Node> b) {
  if (a.size() != b.size()) throw ArityError("builder: equality of different widths");
  std::vector<Node> eq;
  for (std::size_t k = 0; k < a.size(); ++k) eq.push_back(lxnor(a[k], b[k]));
  return and_all(eq);
}

std::vector<CircuitBuilder::Node> CircuitBuilder::embed(const Circuit& sub, std::span<const Node> std_in,
                                                        std::span<const Node> wit_in) {
  if (std_in.size() != sub.n_std() || wit_in.size() != sub.n_wit())
    throw ArityError("builder: embedding '" + sub.name() + "' with wrong input counts");
  std::vector<Node> map(sub.size());
  for (std::size_t k = 0; k < std_in.size(); ++k) map[k] = std_in[k];
  for (std::size_t k = 0; k < wit_in.size(); ++k) map[sub.n_std() + k] = wit_in[k];
  std::size_t v = sub.n_inputs();
  for (const Gate& g : sub.gates()) {
    Node r = 0;
    switch (g.op) {
      case Op::And: r = land(map[g.a], map[g.b]); break;
      case Op::Or: r = lor(map[g.a], map[g.b]); break;
      case Op::Xor: r = lxor(map[g.a], map[g.b]); break;
      case Op::Not: r = lnot(map[g.a]); break;
      case Op::Const0: r = constant(0); break;
      case Op::Const1: r = constant(1); break;
    }
    map[v++] = r;
  }
  std::vector<Node> out;
  for (Node o : sub.outputs()) out.push_back(map[o]);
  return out;
}

Circuit CircuitBuilder::build(std::string name, std::vector<Node> outputs) const {
  return Circuit(std::move(name), n_std_, n_wit_, gates_, std::move(outputs));
}

Circuit negate(const Circuit& c, std::string name) {
  if (c.outputs().size() != 1) throw ArityError("negate needs a single-output circuit");
  CircuitBuilder b(c.n_std(), c.n_wit());
  auto out = b.embed(c, b.inputs(1, c.n_std()), b.witnesses(1, c.n_wit()));
  return b.build(std::move(name), {b.lnot(out[0])});
}

Circuit circuit_from_table(std::string name, std::size_t n, std::size_t out_len,
                           std::span<const std::uint64_t> table) {
  if (table.size() != (1ull << n)) throw ArityError("table size does not match 2^n");
  CircuitBuilder b(n, 0);
  // minterm[x] is 1 exactly on input x; built as a prefix tree of literals.
  std::vector<CircuitBuilder::Node> level{b.constant(1)};
  for (std::size_t t = 1; t <= n; ++t) {
    const auto lit1 = b.input(t);
    const auto lit0 = b.lnot(lit1);
    std::vector<CircuitBuilder::Node> next;
    next.reserve(level.size() * 2);
    for (auto m : level) {
      next.push_back(b.land(m, lit0));
      next.push_back(b.land(m, lit1));
    }
    level = std::move(next);
  }
  std::vector<CircuitBuilder::Node> outs;
  for (std::size_t i = 1; i <= out_len; ++i) {
    std::vector<CircuitBuilder::Node> terms;
    for (std::uint64_t x = 0; x < table.size(); ++x)
      if (code_bit(table[x], out_len, i)) terms.push_back(level[x]);
    outs.push_back(b.or_all(terms));
  }
  return b.build(std::move(name), std::move(outs));
}

Circuit subset_acceptor(std::string name, std::size_t n, std::span<const std::uint8_t> member) {
  std::vector<std::uint64_t> table(member.begin(), member.end());
  return circuit_from_table(std::move(name), n, 1, table);
}

}  // namespace demibit

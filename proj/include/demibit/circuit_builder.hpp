#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "demibit/circuit.hpp"

namespace demibit {

/// Incremental construction of a Circuit, with light constant folding.
///
/// Constructions never need to know node numbering: they ask for input
/// nodes, combine them, and splice in existing circuits with embed().
class CircuitBuilder {
 public:
  using Node = Circuit::Node;

  CircuitBuilder(std::size_t n_std, std::size_t n_wit);

  std::size_t n_std() const noexcept { return n_std_; }
  std::size_t n_wit() const noexcept { return n_wit_; }

  Node input(std::size_t t) const;    // 1-based
  Node witness(std::size_t t) const;  // 1-based
  std::vector<Node> inputs(std::size_t first, std::size_t count) const;
  std::vector<Node> witnesses(std::size_t first, std::size_t count) const;

  Node constant(int v);
  /// Constant nodes spelling `length` bits of `code` (x[1] first).
  std::vector<Node> constants(std::uint64_t code, std::size_t length);

  Node land(Node a, Node b);
  Node lor(Node a, Node b);
  Node lxor(Node a, Node b);
  Node lnot(Node a);
  Node lxnor(Node a, Node b) { return lnot(lxor(a, b)); }
  Node and_all(std::span<const Node> v);
  Node or_all(std::span<const Node> v);
  /// 1 iff the two equal-length node vectors agree bitwise.
  Node equals(std::span<const Node> a, std::span<const Node> b);

  /// Splices `sub` into this circuit, wiring its standard and witness inputs
  /// to the given nodes. Returns the nodes carrying sub's outputs.
  std::vector<Node> embed(const Circuit& sub, std::span<const Node> std_in,
                          std::span<const Node> wit_in);

  Circuit build(std::string name, std::vector<Node> outputs) const;

 private:
  enum class Known : std::uint8_t { No, Zero, One };
  Known known(Node v) const;
  Node push(Op op, Node a = 0, Node b = 0);

  std::size_t n_std_;
  std::size_t n_wit_;
  std::vector<Gate> gates_;
  int const0_ = -1;
  int const1_ = -1;
};

/// Circuit with the single output negated.
Circuit negate(const Circuit& c, std::string name);

/// Deterministic circuit on n inputs with `out_len` outputs computing
/// `table[x]` (output code, x[1] most significant).
Circuit circuit_from_table(std::string name, std::size_t n, std::size_t out_len,
                           std::span<const std::uint64_t> table);

/// Deterministic acceptor of the set {y : member[y]} over {0,1}^n.
Circuit subset_acceptor(std::string name, std::size_t n, std::span<const std::uint8_t> member);


}  // namespace demibit

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "demibit/bitstring.hpp"

namespace demibit {

enum class Op : std::uint8_t { And, Or, Not, Xor, Const0, Const1 };

/// Evaluation semantics of a circuit with witness inputs.
///   Det            no witness inputs, plain evaluation
///   Nondet         accepts iff some witness accepts
///   CoNondet       rejects iff some witness rejects
///   FuncComputing  two outputs (valid, value); every valid branch must agree
enum class EvalMode : std::uint8_t { Det, Nondet, CoNondet, FuncComputing };

enum class TriBit : std::uint8_t { Zero = 0, One = 1, Bot = 2 };

/// What a FuncComputing evaluation does on an input where no branch is valid.
enum class Totality : std::uint8_t { Require, TreatAsBot };

std::string_view to_string(Op op);
std::string_view to_string(EvalMode mode);
std::string_view to_string(TriBit t);
EvalMode parse_mode(std::string_view text);

constexpr TriBit to_tribit(bool b) { return b ? TriBit::One : TriBit::Zero; }

struct Gate {
  Op op = Op::Const0;
  std::uint32_t a = 0;
  std::uint32_t b = 0;

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Immutable gate DAG.
///
/// Nodes are numbered standard inputs first, then witness inputs, then gates
/// in topological order. Every operand of a gate refers to a smaller node.
/// Decision circuits have one output, function-computing circuits two
/// (validity flag, value); generator circuits may have more.
class Circuit {
 public:
  using Node = std::uint32_t;

  Circuit(std::string name, std::size_t n_std, std::size_t n_wit, std::vector<Gate> gates,
          std::vector<Node> outputs);

  const std::string& name() const noexcept { return name_; }
  std::size_t n_std() const noexcept { return n_std_; }
  std::size_t n_wit() const noexcept { return n_wit_; }
  std::size_t n_inputs() const noexcept { return n_std_ + n_wit_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  const std::vector<Node>& outputs() const noexcept { return outputs_; }

  /// Gate count including the input gates (standard and witness).
  std::size_t size() const noexcept { return n_inputs() + gates_.size(); }

  Node std_input(std::size_t t) const;  // 1-based
  Node wit_input(std::size_t t) const;  // 1-based
  bool is_input(Node v) const noexcept { return v < n_inputs(); }

  Circuit renamed(std::string name) const;

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  std::string name_;
  std::size_t n_std_;
  std::size_t n_wit_;
  std::vector<Gate> gates_;
  std::vector<Node> outputs_;
};

/// Largest n_std + n_wit any single exhaustive evaluation may enumerate.
unsigned enumeration_cap() noexcept;
void set_enumeration_cap(unsigned bits) noexcept;
/// Throws CapExceeded when `bits` exceeds the cap.
void check_cap(std::size_t bits, std::string_view what);

/// Throws ArityError when `mode` is incompatible with `c`.
void check_mode(const Circuit& c, EvalMode mode);

/// Output bits for one (x, w) assignment.
BitString eval_raw(const Circuit& c, const BitString& x, const BitString& w);

TriBit eval(const Circuit& c, EvalMode mode, const BitString& x,
            Totality totality = Totality::Require);

/// eval() on every x in {0,1}^n_std, indexed by the code of x.
std::vector<TriBit> truth_table(const Circuit& c, EvalMode mode,
                                Totality totality = Totality::Require);

/// Deterministic multi-output table: entry x is the code of the outputs.
std::vector<std::uint64_t> output_table(const Circuit& c);

/// Lexicographically first witness on which output `output_index` equals
/// `target`, if any.
std::optional<BitString> first_witness(const Circuit& c, const BitString& x, int target,
                                       std::size_t output_index = 0);

}  // namespace demibit

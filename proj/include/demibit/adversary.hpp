#pragma once

#include <string>
#include <vector>

#include "demibit/circuit.hpp"

namespace demibit {

/// A circuit together with the semantics it is run under, used as a
/// distinguisher or predictor.
struct Adversary {
  Circuit circuit;
  EvalMode mode = EvalMode::Det;

  const std::string& name() const noexcept { return circuit.name(); }
  std::size_t arity() const noexcept { return circuit.n_std(); }

  /// Answers on every input, indexed by input code.
  std::vector<TriBit> table(Totality totality = Totality::Require) const {
    return truth_table(circuit, mode, totality);
  }
};

}  // namespace demibit

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "demibit/adversary.hpp"
#include "demibit/generator.hpp"
#include "demibit/rational.hpp"
#include "demibit/reduction.hpp"

namespace demibit {

/// Random deterministic-gate circuit read nondeterministically: `gates`
/// gates over earlier nodes, output on the last one.
Circuit random_circuit(std::mt19937_64& rng, std::string name, std::size_t n_std, std::size_t n_wit,
                       std::size_t gates);

/// D AND [y not in image(g)], which can never accept a generated string.
Adversary mask_image(const Adversary& d, const Generator& g);

/// Every table-backed map {0,1}^n -> {0,1}^{n+1}, in lexicographic table order.
std::vector<FunctionTable> all_one_bit_stretchers(std::size_t n);

/// Distinct block layouts (N, m, n, rem) reached by the exponents
/// 1/2, 2/3, 9/10 for N = 1 .. max_N.
std::vector<StretchParams> stretch_layouts(std::size_t max_N);

struct StretchSweepOptions {
  std::vector<std::size_t> base_n{1, 2};
  std::size_t max_N = 4;
  /// Subset acceptors are used up to this output length.
  std::size_t max_subset_len = 6;
  /// All nonempty subsets of the non-image are tried when it has at most
  /// this many points; otherwise singletons, the full non-image and
  /// `random_subsets` seeded random subsets.
  std::size_t exhaustive_complement = 15;
  std::size_t random_subsets = 16;
  /// Seeded random nondeterministic circuits per (b, layout), masked off
  /// the image.
  std::size_t random_circuits = 4;
  std::size_t max_witness = 3;
  std::uint64_t seed = 1;
  /// Called after every reduction with (D, b, layout, result).
  std::function<void(const Adversary&, const Generator&, const StretchParams&, const StretchReduction&)> observer;
};

struct StretchSweepRow {
  std::string base;
  StretchParams layout;
  std::uint64_t subsets = 0;
  std::uint64_t circuits = 0;
  std::uint64_t failures = 0;
  std::uint64_t telescoping_failures = 0;
  bool exhaustive = false;
  /// min over adversaries of P[C(U)=1] - P[D(U)=1]/m.
  Rational min_margin;
};

struct StretchSweepResult {
  std::vector<StretchSweepRow> rows;
  std::uint64_t adversaries = 0;
  std::uint64_t circuits = 0;
  std::uint64_t failures = 0;
  std::uint64_t telescoping_failures = 0;
  std::vector<std::string> failure_detail;  // first few failures

  bool ok() const { return failures == 0 && telescoping_failures == 0; }
};

StretchSweepResult stretch_sweep(const StretchSweepOptions& options);

}  // namespace demibit

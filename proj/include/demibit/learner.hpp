#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "demibit/adversary.hpp"
#include "demibit/bitstring.hpp"
#include "demibit/generator.hpp"
#include "demibit/rational.hpp"
#include "demibit/reduction.hpp"

namespace demibit {

/// Membership oracle for the target concept. Every answer is logged; a
/// second, different answer to the same query is an inconsistency.
class Oracle {
 public:
  using Answer = std::function<int(std::uint64_t)>;

  Oracle(std::size_t n, Answer answer) : n_(n), answer_(std::move(answer)) {}
  /// Oracle answering with a deterministic one-output circuit.
  static Oracle from_circuit(const Circuit& c);

  std::size_t n() const noexcept { return n_; }
  int query(std::uint64_t x);
  const std::vector<std::pair<std::uint64_t, int>>& log() const noexcept { return log_; }

 private:
  std::size_t n_;
  Answer answer_;
  std::map<std::uint64_t, int> seen_;
  std::vector<std::pair<std::uint64_t, int>> log_;
};

struct LearnerRun {
  std::size_t i = 0;                 // 1-based block index
  BitString r;                       // r_1 .. r_m
  std::vector<BitString> x_blocks;   // every block except block i, in order
  std::vector<std::pair<BitString, int>> queries;
  Adversary hypothesis;
  std::uint64_t rng_seed = 0;
};

/// C'(x) = r_i XOR D(x_1 C(x_1) ... x_{i-1} C(x_{i-1}) x r_i x_{i+1} r_{i+1} ... x_m r_m).
/// `x_blocks` holds the m-1 blocks other than i; the oracle is asked only
/// about x_1 .. x_{i-1}.
LearnerRun learner_hypothesis(const Adversary& d, Oracle& oracle, std::size_t m, std::size_t i,
                              const BitString& r, const std::vector<BitString>& x_blocks);

/// One randomized run: i, r and the frozen blocks are drawn from `rng_seed`.
LearnerRun learn(const Adversary& d, Oracle& oracle, std::size_t m, std::uint64_t rng_seed);
LearnerRun learn(const Adversary& d, const Circuit& c, std::size_t m, std::uint64_t rng_seed);

/// Exact P_x[C'(x) = C(x)].
Rational hypothesis_accuracy(const Adversary& hypothesis, const Circuit& c);

struct LearnMode {
  enum class Kind { Exhaustive, Sampled };
  Kind kind = Kind::Exhaustive;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  static LearnMode exhaustive() { return {}; }
  static LearnMode sampled(std::size_t k, std::uint64_t seed) { return {Kind::Sampled, k, seed}; }
};

/// Product of choices m * 2^m * 2^{n(m-1)} above which only sampling is offered.
inline constexpr std::uint64_t kExhaustiveLearnBound = 1ull << 20;

struct RunAccuracy {
  std::size_t i = 0;
  BitString r;
  std::vector<BitString> x_blocks;
  Rational accuracy;
  bool meets = false;
};

struct LearnOutcome {
  LearnMode mode;
  Rational advantage;   // super_advantage(D, gmc(m, C))
  BigInt s;
  Rational accuracy_bar;  // 1/2 + 1/(2ms)
  std::vector<RunAccuracy> runs;
  /// Fraction of runs whose hypothesis meets the accuracy bar; exact when
  /// exhaustive, an estimate over `runs.size()` samples otherwise.
  Rational confidence;
  Rational statement_bound;  // 1/(2 m^2 s)
  Rational proof_bound;      // 1/(m^2 s)
  bool meets_statement = false;
  bool meets_proof = false;
  /// Exhaustive only: mean accuracy for each i, and 1/2 + P[p_i=1] - P[p_{i+1}=1].
  std::vector<Rational> mean_accuracy;
  std::vector<Rational> predicted_accuracy;
  HybridTrace trace;

  bool identity_holds() const { return mean_accuracy == predicted_accuracy; }
};

/// Exact p_1 .. p_{m+1}, where p_j runs D on the first j-1 blocks labelled by
/// C and the rest labelled by random bits.
HybridTrace hybrid_gap_scan(const Adversary& d, const Circuit& c, std::size_t m);

/// Checks D achieves 1/s on gmc(m, C), then measures the learner's confidence.
LearnOutcome verify_learning_bound(const Adversary& d, const Circuit& c, std::size_t m, const BigInt& s,
                                   LearnMode mode = LearnMode::exhaustive());

}  // namespace demibit

#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "demibit/adversary.hpp"
#include "demibit/bitstring.hpp"
#include "demibit/generator.hpp"
#include "demibit/measure.hpp"
#include "demibit/rational.hpp"

namespace demibit {

/// Hybrid scan: points P_0..P_k and gaps P_{j-1} - P_j.
struct HybridTrace {
  std::vector<Rational> points;
  std::vector<Rational> gaps;  // gaps[j-1] = points[j-1] - points[j]
  std::size_t i_star = 0;      // 1-based index into gaps
  std::optional<BitString> suffix;
  Rational threshold;

  bool telescopes() const;
  /// Index (1-based) of the first maximal gap.
  static std::size_t argmax(const std::vector<Rational>& gaps);
  static HybridTrace from_points(std::vector<Rational> points);
};

enum class Relation { GreaterEq, Equal };

/// One contracted (in)equality, evaluated exactly.
struct Clause {
  std::string contract;
  Rational lhs;
  Rational rhs;
  Relation relation = Relation::GreaterEq;

  bool holds() const { return relation == Relation::Equal ? lhs == rhs : lhs >= rhs; }
};

/// Result of a construction: the emitted adversaries and every contracted
/// clause, with both sides recomputed by the measure module from the emitted
/// circuits rather than reported by the construction.
struct ReductionCertificate {
  std::string construction;
  std::string input_adversary;
  std::vector<Adversary> emitted;
  std::vector<Clause> clauses;
  std::optional<HybridTrace> trace;
  /// Extra facts reported alongside the contract (key, value).
  std::vector<std::pair<std::string, std::string>> notes;

  bool holds() const;
  const Clause& primary() const { return clauses.front(); }
};

// --- demi-bit stretching -------------------------------------------------

/// The nondeterministic circuit D'(., j): guesses j seeds and runs D on
/// b(x_1) ... b(x_j) y_{j+1} ... y_m r. Its first j blocks are unread.
Adversary stretch_guess_circuit(const Adversary& d, const Generator& b, const StretchParams& p,
                                std::size_t j);

struct StretchReduction {
  Adversary c;
  ReductionCertificate cert;
};

/// From a demi-break D of stretch(b, p), builds C with P[C(U_{n+1})=1] >=
/// P[D(y)=1]/m and P[C(b(U_n))=1] = 0.
StretchReduction stretch_reduction(const Adversary& d, const Generator& b, const StretchParams& p);

// --- infinitely-often patching -------------------------------------------

struct IoReduction {
  Adversary d_prime;
  BitString w;
  std::size_t source_index = 0;
  ReductionCertificate cert;
};

/// From D breaking io_patch(family, n) with advantage >= 1/s, builds
/// D'(Y) = D(Y w) breaking the family member at n_i. When `s` is absent the
/// least s met by D's advantage is used.
IoReduction io_reduction(const Adversary& d, std::span<const Generator> family, std::size_t n,
                         std::optional<BigInt> s = std::nullopt);

// --- unpredictability ----------------------------------------------------

struct CapDistinguisher {
  Adversary d;
  ReductionCertificate cert;
};

/// D(Y) accepts iff some valid branch of A on Y[1..i] answers != Y[i+1].
Adversary cap_distinguisher_circuit(const Adversary& a, std::size_t l, std::size_t i);

/// Function-computing predictor with success 1/2 + delta (delta > 0) to a
/// distinguisher with super-advantage >= delta.
CapDistinguisher cap_predictor_to_distinguisher(const Adversary& a, const Generator& g, std::size_t i);

struct CupPredictors {
  Adversary a1;  // Nondet: D(Y 0 w)
  Adversary a2;  // CoNondet: not D(Y 1 w)
  std::size_t i = 0;
  BitString w;
  ReductionCertificate cert;
};

/// A1, A2 for a fixed index i and suffix w.
std::pair<Adversary, Adversary> cup_predictor_circuits(const Adversary& d, std::size_t l,
                                                       std::size_t i, const BitString& w);
/// success(A1) + success(A2) = 1 + 2 (P[D(Z_i b w)=1] - P[D(Z_{i+1} w)=1]).
Clause cup_identity(const Adversary& d, const Generator& g, std::size_t i, const BitString& w,
                    const Adversary& a1, const Adversary& a2);

/// Hybrid scan over H_i = g(U_n)[1..i] U_{l-i}, then A1/A2 at the chosen
/// index and suffix. Requires positive super-advantage.
CupPredictors distinguisher_to_cup_predictors(const Adversary& d, const Generator& g);

struct CapToBoth {
  Adversary a1;  // Nondet, invalid branches answer 0
  Adversary a0;  // CoNondet, invalid branches answer 1
  ReductionCertificate cert;
};

CapToBoth cap_to_both(const Adversary& a, const Generator& g, std::size_t i);

// --- super-cores ---------------------------------------------------------

/// g(x) = f(x) b(x) for a non-shrinking f.
Generator append_bit(const FunctionTable& f, const FunctionTable& b_pred);

struct SupercoreAttack {
  Adversary a1;  // Nondet: D(Y 0)
  Adversary a2;  // CoNondet: not D(Y 1)
  ReductionCertificate cert;
};

std::pair<Adversary, Adversary> supercore_attack_circuits(const Adversary& d, std::size_t m);

/// Checks t1(A1)+t2(A2) = 1 - P[D(g(x))=1] and t3(A1)+t4(A2) = P[D(U)=1]
/// for any supplied A1, A2.
ReductionCertificate verify_supercore_attack(const Adversary& d, const FunctionTable& f,
                                             const FunctionTable& b_pred, const Adversary& a1,
                                             const Adversary& a2);

SupercoreAttack supercore_attack_from_distinguisher(const Adversary& d, const FunctionTable& f,
                                                    const FunctionTable& b_pred);

enum class SupercoreSide { Star, Diamond };

struct SupercoreDistinguisher {
  Adversary d;
  ReductionCertificate cert;
};

/// Star: D(Y) = [Y[m+1] = 0] and A(Y[1..m]), advantage t1(A) + t3(A) - P[b=0].
/// Diamond: D(Y) = [Y[m+1] = 1] and not A(Y[1..m]), advantage t2(A) + t4(A) - P[b=1].
SupercoreDistinguisher distinguisher_from_supercore_attack(const Adversary& a, const FunctionTable& f,
                                                           const FunctionTable& b_pred,
                                                           SupercoreSide side = SupercoreSide::Star);

struct HardbitDistinguisher {
  Adversary d;
  ReductionCertificate cert;
};

/// D(Y) = [A(Y[1..m]) = Y[m+1]]; P[D(g(x))=1] - P[D(U)=1] = success(A) - 1/2.
HardbitDistinguisher distinguisher_from_hardbit_predictor(const Adversary& a, const FunctionTable& f,
                                                          const FunctionTable& b_pred);

struct InjectiveAttack {
  Adversary a1;  // Nondet preimage guesser, 0 on failure
  Adversary a0;  // CoNondet preimage guesser, 1 on failure
  std::uint64_t type1_count = 0;
  /// |T1|/2^n > 2^{1+c}/(2^{1+c}+1).
  bool above_threshold = false;
  ReductionCertificate cert;
};

InjectiveAttack injective_attack(const FunctionTable& f, const FunctionTable& b_pred);

/// Number of x with a unique preimage of f(x).
std::uint64_t type1_count(const FunctionTable& f);

ReductionCertificate supercore_implies_hardcore_check(const FunctionTable& f, const FunctionTable& b_pred,
                                                      const Adversary& a);

}  // namespace demibit

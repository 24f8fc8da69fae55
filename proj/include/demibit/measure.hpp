#pragma once

#include <optional>
#include <utility>
#include <string>

#include "demibit/adversary.hpp"
#include "demibit/generator.hpp"
#include "demibit/rational.hpp"

namespace demibit {

enum class BreakKind { SuperAdvantage, DemiBreak, StdAdvantage, HSGMiss };
std::string_view to_string(BreakKind k);

struct BreakReport {
  BreakKind kind = BreakKind::SuperAdvantage;
  std::string generator;
  std::string adversary;
  /// Signed for SuperAdvantage; P[D(y)=1] for DemiBreak.
  Rational advantage;
  Rational p_random;  // P_y[D(y)=1]
  Rational p_image;   // P_x[D(g(x))=1]
  bool zero_on_image = false;
  /// For DemiBreak / HSGMiss: whether the report certifies a break.
  bool is_break = false;
  /// Least s with advantage >= 1/s, when the advantage is positive.
  std::optional<BigInt> s_witness;
  std::size_t adversary_size = 0;
  /// |D| <= s_witness, reported separately from the advantage threshold.
  bool size_within_s = false;
};

/// P_y[D(y)=1] over uniform y of D's arity.
Rational accept_random(const Adversary& d);
/// P_x[D(g(x))=1] over uniform seeds.
Rational accept_image(const Adversary& d, const Generator& g);

/// P[D(y)=1] - P[D(g(x))=1], in that order.
Rational super_advantage(const Adversary& d, const Generator& g);
BreakReport super_advantage_report(const Adversary& d, const Generator& g);

/// |P[D(y)=1] - P[D(g(x))=1]| for a deterministic D.
Rational std_advantage(const Adversary& d, const Generator& g);

/// Decides exactly whether D accepts a positive fraction of random strings
/// while rejecting every generated string.
BreakReport demi_break(const Adversary& d, const Generator& g);

enum class HsgResult { Hit, Miss, NotDense };
std::string_view to_string(HsgResult r);

/// Does the image of g intersect the set A decided by D, provided A has
/// density at least `density_threshold`?
HsgResult hsg_check(const Generator& g, const Adversary& d, const Rational& density_threshold);

/// P_x[A(g(x)[1..i]) = g(x)[i+1]]; a Bot answer never counts.
Prob predictor_success(const Adversary& a, const Generator& g, std::size_t i,
                       Totality totality = Totality::Require);

/// P_x[A(f(x)) = b(x)] for a predictor of b from f.
Prob hardcore_success(const Adversary& a, const FunctionTable& f, const FunctionTable& b_pred);

/// The four super-core quantities for a predicate b of f:
///   t1 = P_x[A1(f(x)) = b(x) = 0]     t3 = 1/2 P_y[A1(y) = 1]
///   t2 = P_x[A2(f(x)) = b(x) = 1]     t4 = 1/2 P_y[A2(y) = 0]
struct SuperCoreTerms {
  Prob t1, t2, t3, t4;
  /// t1 + t3 >= 1/2 + 1/p and t2 + t4 >= 1/2 + 1/p, when 1/p was supplied.
  std::optional<bool> star;
  std::optional<bool> diamond;

  Rational sum() const { return t1.value() + t2.value() + t3.value() + t4.value(); }
};

/// (t1, t3) for A1 alone and (t2, t4) for A2 alone.
std::pair<Prob, Prob> star_terms(const Adversary& a1, const FunctionTable& f, const FunctionTable& b_pred);
std::pair<Prob, Prob> diamond_terms(const Adversary& a2, const FunctionTable& f,
                                    const FunctionTable& b_pred);

/// P_x[b(x) = v].
Prob predicate_rate(const FunctionTable& b_pred, int v);

SuperCoreTerms super_core_terms(const Adversary& a1, const Adversary& a2, const FunctionTable& f,
                                const FunctionTable& b_pred,
                                std::optional<Rational> inv_p = std::nullopt);

}  // namespace demibit

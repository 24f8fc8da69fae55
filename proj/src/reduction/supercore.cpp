#include <algorithm>

#include "demibit/circuit_builder.hpp"
#include "demibit/errors.hpp"
#include "demibit/reduction.hpp"

namespace demibit {

namespace {

void check_predicate(const FunctionTable& f, const FunctionTable& b_pred) {
  if (b_pred.in_bits != f.in_bits || b_pred.out_bits != 1)
    throw ArityError("predicate must map the domain of f to one bit");
}

}  // namespace

Generator append_bit(const FunctionTable& f, const FunctionTable& b_pred) {
  check_predicate(f, b_pred);
  if (f.out_bits < f.in_bits) throw ArityError("f must not shrink its input");
  return Generator::from_table(
      "f.b", FunctionTable::from_function(f.in_bits, f.out_bits + 1,
                                          [&](std::uint64_t x) { return code_concat(f(x), b_pred(x), 1); }));
}

std::pair<Adversary, Adversary> supercore_attack_circuits(const Adversary& d, std::size_t m) {
  if (d.mode != EvalMode::Det && d.mode != EvalMode::Nondet)
    throw ArityError("'" + d.name() + "' must be deterministic or nondeterministic");
  if (d.arity() != m + 1) throw ArityError("distinguisher must read " + std::to_string(m + 1) + " bits");
  const std::size_t k = d.circuit.n_wit();
  auto make = [&](int bit) {
    CircuitBuilder cb(m, k);
    auto in = cb.inputs(1, m);
    in.push_back(cb.constant(bit));
    auto out = cb.embed(d.circuit, in, cb.witnesses(1, k));
    if (bit == 1) out = {cb.lnot(out[0])};
    return cb.build(d.name() + (bit == 0 ? ".A1" : ".A2"), out);
  };
  const EvalMode m2 = d.mode == EvalMode::Det ? EvalMode::Det : EvalMode::CoNondet;
  return {Adversary{make(0), d.mode}, Adversary{make(1), m2}};
}

ReductionCertificate verify_supercore_attack(const Adversary& d, const FunctionTable& f,
                                             const FunctionTable& b_pred, const Adversary& a1,
                                             const Adversary& a2) {
  const Generator g = append_bit(f, b_pred);
  const auto terms = super_core_terms(a1, a2, f, b_pred);
  ReductionCertificate cert;
  cert.construction = "supercore_attack";
  cert.input_adversary = d.name();
  cert.clauses.push_back({"t1(A1) + t2(A2) = 1 - P[D(g(x))=1]", terms.t1.value() + terms.t2.value(),
                          1 - accept_image(d, g), Relation::Equal});
  cert.clauses.push_back({"t3(A1) + t4(A2) = P[D(U)=1]", terms.t3.value() + terms.t4.value(), accept_random(d),
                          Relation::Equal});
  cert.clauses.push_back({"t1 + t2 + t3 + t4 = 1 + advantage", terms.sum(), 1 + super_advantage(d, g),
                          Relation::Equal});
  cert.notes = {{"t1", to_string(terms.t1.value())},
                {"t2", to_string(terms.t2.value())},
                {"t3", to_string(terms.t3.value())},
                {"t4", to_string(terms.t4.value())}};
  cert.emitted = {a1, a2};
  return cert;
}

SupercoreAttack supercore_attack_from_distinguisher(const Adversary& d, const FunctionTable& f,
                                                    const FunctionTable& b_pred) {
  check_predicate(f, b_pred);
  auto [a1, a2] = supercore_attack_circuits(d, f.out_bits);
  auto cert = verify_supercore_attack(d, f, b_pred, a1, a2);
  return {std::move(a1), std::move(a2), std::move(cert)};
}

SupercoreDistinguisher distinguisher_from_supercore_attack(const Adversary& a, const FunctionTable& f,
                                                           const FunctionTable& b_pred, SupercoreSide side) {
  check_predicate(f, b_pred);
  const std::size_t m = f.out_bits;
  if (a.arity() != m) throw ArityError("attack must read |f(x)| = " + std::to_string(m) + " bits");
  const bool star = side == SupercoreSide::Star;
  if (star && a.mode != EvalMode::Nondet && a.mode != EvalMode::Det)
    throw ArityError("star side needs a nondeterministic attack");
  if (!star && a.mode != EvalMode::CoNondet && a.mode != EvalMode::Det)
    throw ArityError("diamond side needs a co-nondeterministic attack");
  const std::size_t k = a.circuit.n_wit();
  CircuitBuilder cb(m + 1, k);
  auto ao = cb.embed(a.circuit, cb.inputs(1, m), cb.witnesses(1, k))[0];
  const auto last = cb.input(m + 1);
  const auto out = star ? cb.land(cb.lnot(last), ao) : cb.land(last, cb.lnot(ao));
  const EvalMode mode = a.mode == EvalMode::Det ? EvalMode::Det : EvalMode::Nondet;
  Adversary d{cb.build("D[" + a.name() + "]", {out}), mode};

  const Generator g = append_bit(f, b_pred);
  ReductionCertificate cert;
  cert.construction = star ? "supercore_distinguisher_star" : "supercore_distinguisher_diamond";
  cert.input_adversary = a.name();
  if (star) {
    auto [t1, t3] = star_terms(a, f, b_pred);
    cert.clauses.push_back({"advantage = t1(A) + t3(A) - P[b=0]", super_advantage(d, g),
                            t1.value() + t3.value() - predicate_rate(b_pred, 0).value(), Relation::Equal});
  } else {
    auto [t2, t4] = diamond_terms(a, f, b_pred);
    cert.clauses.push_back({"advantage = t2(A) + t4(A) - P[b=1]", super_advantage(d, g),
                            t2.value() + t4.value() - predicate_rate(b_pred, 1).value(), Relation::Equal});
  }
  cert.emitted = {d};
  return {std::move(d), std::move(cert)};
}

HardbitDistinguisher distinguisher_from_hardbit_predictor(const Adversary& a, const FunctionTable& f,
                                                          const FunctionTable& b_pred) {
  check_predicate(f, b_pred);
  if (a.mode != EvalMode::Det) throw ArityError("hard-bit predictor '" + a.name() + "' must be deterministic");
  const std::size_t m = f.out_bits;
  if (a.arity() != m) throw ArityError("predictor must read |f(x)| = " + std::to_string(m) + " bits");
  CircuitBuilder cb(m + 1, 0);
  auto ao = cb.embed(a.circuit, cb.inputs(1, m), {})[0];
  Adversary d{cb.build("D[" + a.name() + "]", {cb.lxnor(ao, cb.input(m + 1))}), EvalMode::Det};

  const Generator g = append_bit(f, b_pred);
  ReductionCertificate cert;
  cert.construction = "hardbit_distinguisher";
  cert.input_adversary = a.name();
  cert.clauses.push_back({"P[D(g(x))=1] - P[D(U)=1] = success(A) - 1/2", accept_image(d, g) - accept_random(d),
                          hardcore_success(a, f, b_pred).value() - Rational(1, 2), Relation::Equal});
  cert.emitted = {d};
  return {std::move(d), std::move(cert)};
}

std::uint64_t type1_count(const FunctionTable& f) {
  std::vector<std::uint64_t> v = f.values;
  std::sort(v.begin(), v.end());
  std::uint64_t count = 0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const bool left = k > 0 && v[k - 1] == v[k];
    const bool right = k + 1 < v.size() && v[k + 1] == v[k];
    count += !left && !right;
  }
  return count;
}

InjectiveAttack injective_attack(const FunctionTable& f, const FunctionTable& b_pred) {
  check_predicate(f, b_pred);
  if (f.out_bits < f.in_bits) throw ArityError("f must map n bits to n + c bits with c >= 0");
  const std::size_t n = f.in_bits;
  const std::size_t m = f.out_bits;
  const std::size_t c = m - n;
  const Circuit fc = circuit_from_table("f", n, m, f.values);
  const Circuit bc = circuit_from_table("b", n, 1, b_pred.values);

  // Guess x' in the witness, check f(x') = y, answer b(x'); 1-j on failure.
  auto make = [&](int j) {
    CircuitBuilder cb(m, n);
    auto guess = cb.witnesses(1, n);
    auto fx = cb.embed(fc, guess, {});
    auto y = cb.inputs(1, m);
    auto eq = cb.equals(fx, y);
    auto bx = cb.embed(bc, guess, {})[0];
    auto out = j == 1 ? cb.land(eq, bx) : cb.lor(cb.lnot(eq), bx);
    return cb.build(j == 1 ? "A1[f^-1]" : "A0[f^-1]", {out});
  };
  Adversary a1{make(1), EvalMode::Nondet};
  Adversary a0{make(0), EvalMode::CoNondet};

  const std::uint64_t t1 = type1_count(f);
  const BigInt two_c = BigInt(1) << (1 + c);
  const Rational frac = ratio(t1, f.domain_size());
  const auto terms = super_core_terms(a1, a0, f, b_pred);

  ReductionCertificate cert;
  cert.construction = "injective_attack";
  cert.input_adversary = "f";
  cert.clauses.push_back({"t1(A1) + t2(A0) + t3(A1) + t4(A0) >= (2^{1+c}+1)/2^{1+c} |T1|/2^n", terms.sum(),
                          Rational(two_c + 1, two_c) * frac, Relation::GreaterEq});
  const bool above = frac > Rational(two_c, two_c + 1);
  cert.notes = {{"T1", std::to_string(t1)},
                {"c", std::to_string(c)},
                {"sum", to_string(terms.sum())},
                {"above_threshold", above ? "yes" : "no"}};
  cert.emitted = {a1, a0};
  return {std::move(a1), std::move(a0), t1, above, std::move(cert)};
}

ReductionCertificate supercore_implies_hardcore_check(const FunctionTable& f, const FunctionTable& b_pred,
                                                      const Adversary& a) {
  check_predicate(f, b_pred);
  if (a.mode != EvalMode::Det) throw ArityError("predictor '" + a.name() + "' must be deterministic");
  const Rational success = hardcore_success(a, f, b_pred).value();
  const Rational delta = success - Rational(1, 2);
  if (delta < 0)
    throw PreconditionError("predictor '" + a.name() + "' has success " + to_string(success) + " below 1/2");
  const auto terms = super_core_terms(a, a, f, b_pred);
  const Rational star = terms.t1.value() + terms.t3.value();
  const Rational diamond = terms.t2.value() + terms.t4.value();
  ReductionCertificate cert;
  cert.construction = "supercore_implies_hardcore";
  cert.input_adversary = a.name();
  cert.clauses.push_back({"t1 + t2 + t3 + t4 = success(A) + 1/2", terms.sum(), success + Rational(1, 2),
                          Relation::Equal});
  cert.clauses.push_back({"max(t1 + t3, t2 + t4) >= 1/2 + delta/2", std::max(star, diamond),
                          Rational(1, 2) + delta / 2, Relation::GreaterEq});
  cert.notes = {{"star", to_string(star)}, {"diamond", to_string(diamond)}, {"delta", to_string(delta)}};
  cert.emitted = {a};
  return cert;
}

}  // namespace demibit

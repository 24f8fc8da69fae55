#include "demibit/circuit_builder.hpp"
#include "demibit/errors.hpp"
#include "demibit/reduction.hpp"

namespace demibit {

namespace {

void require_func(const Adversary& a) {
  if (a.mode != EvalMode::FuncComputing)
    throw ArityError("'" + a.name() + "' must be function-computing, got " + std::string(to_string(a.mode)));
}

void require_decision(const Adversary& d) {
  if (d.mode != EvalMode::Det && d.mode != EvalMode::Nondet)
    throw ArityError("'" + d.name() + "' must be deterministic or nondeterministic");
}

// P[D(prefix_j(g(x)) u) = 1] over x and uniform u of length l - j.
Rational hybrid_point(const std::vector<TriBit>& t, const Generator& g, std::size_t j) {
  const std::size_t l = g.l();
  const std::size_t rest = l - j;
  std::uint64_t hits = 0;
  for (auto y : g.table().values) {
    const auto head = code_slice(y, l, 1, j);
    for (std::uint64_t u = 0; u < (1ull << rest); ++u) hits += t[code_concat(head, u, rest)] == TriBit::One;
  }
  return ratio(hits, g.table().domain_size() << rest);
}

}  // namespace

Adversary cap_distinguisher_circuit(const Adversary& a, std::size_t l, std::size_t i) {
  require_func(a);
  if (a.arity() != i || i >= l) throw ArityError("predictor must read Y[1.." + std::to_string(i) + "]");
  CircuitBuilder cb(l, a.circuit.n_wit());
  auto fv = cb.embed(a.circuit, cb.inputs(1, i), cb.witnesses(1, a.circuit.n_wit()));
  auto out = cb.land(fv[0], cb.lxor(fv[1], cb.input(i + 1)));
  return Adversary{cb.build("D[" + a.name() + "]", {out}), EvalMode::Nondet};
}

CapDistinguisher cap_predictor_to_distinguisher(const Adversary& a, const Generator& g, std::size_t i) {
  require_func(a);
  const Rational success = predictor_success(a, g, i, Totality::Require);
  if (success <= Rational(1, 2))
    throw PreconditionError("predictor '" + a.name() + "' has success " + to_string(success) +
                            ", not above 1/2");
  Adversary d = cap_distinguisher_circuit(a, g.l(), i);

  const auto at = a.table(Totality::Require);
  std::uint64_t bots = 0;
  for (auto v : at) bots += v == TriBit::Bot;
  const Rational f = ratio(bots, at.size());
  const Rational delta = success - Rational(1, 2);

  ReductionCertificate cert;
  cert.construction = "cap_predictor_to_distinguisher";
  cert.input_adversary = a.name();
  const Rational adv = super_advantage(d, g);
  cert.clauses.push_back({"P[D(U_l)=1] - P[D(g(x))=1] >= delta", adv, delta, Relation::GreaterEq});
  cert.clauses.push_back({"P[D(U_l)=1] = f + (1-f)/2", accept_random(d), f + (1 - f) / 2, Relation::Equal});
  cert.clauses.push_back({"P[D(g(x))=1] = 1 - success(A)", accept_image(d, g), 1 - success, Relation::Equal});
  cert.clauses.push_back({"P[D(g(x))=1] <= 1/2 - delta", Rational(1, 2) - delta, accept_image(d, g),
                          Relation::GreaterEq});
  cert.notes = {{"i", std::to_string(i)}, {"success", to_string(success)}, {"f_bot", to_string(f)}};
  cert.emitted = {d};
  return {std::move(d), std::move(cert)};
}

std::pair<Adversary, Adversary> cup_predictor_circuits(const Adversary& d, std::size_t l, std::size_t i,
                                                       const BitString& w) {
  require_decision(d);
  if (d.arity() != l || i >= l || w.size() + i + 1 != l)
    throw ArityError("cup predictors need |Y| + 1 + |w| = " + std::to_string(l));
  auto make = [&](int bit) {
    CircuitBuilder cb(i, d.circuit.n_wit());
    auto in = cb.inputs(1, i);
    in.push_back(cb.constant(bit));
    auto tail = cb.constants(w.code(), w.size());
    in.insert(in.end(), tail.begin(), tail.end());
    auto out = cb.embed(d.circuit, in, cb.witnesses(1, d.circuit.n_wit()));
    if (bit == 1) out = {cb.lnot(out[0])};
    return cb.build(d.name() + (bit == 0 ? ".A1" : ".A2"), out);
  };
  const EvalMode m1 = d.mode;
  const EvalMode m2 = d.mode == EvalMode::Det ? EvalMode::Det : EvalMode::CoNondet;
  return {Adversary{make(0), m1}, Adversary{make(1), m2}};
}

Clause cup_identity(const Adversary& d, const Generator& g, std::size_t i, const BitString& w,
                    const Adversary& a1, const Adversary& a2) {
  const std::size_t l = g.l();
  const std::size_t wl = w.size();
  const auto t = d.table();
  std::uint64_t with_bit = 0, with_next = 0;
  for (auto y : g.table().values) {
    const auto head = code_slice(y, l, 1, i);
    for (std::uint64_t b = 0; b < 2; ++b)
      with_bit += t[code_concat(code_concat(head, b, 1), w.code(), wl)] == TriBit::One;
    with_next += t[code_concat(code_slice(y, l, 1, i + 1), w.code(), wl)] == TriBit::One;
  }
  const std::uint64_t seeds = g.table().domain_size();
  const Rational gap = ratio(with_bit, 2 * seeds) - ratio(with_next, seeds);
  const Rational sum = predictor_success(a1, g, i).value() + predictor_success(a2, g, i).value();
  return {"success(A1) + success(A2) = 1 + 2(P[D(Z_i b w)=1] - P[D(Z_{i+1} w)=1])", sum, 1 + 2 * gap,
          Relation::Equal};
}

CupPredictors distinguisher_to_cup_predictors(const Adversary& d, const Generator& g) {
  require_decision(d);
  const Rational adv = super_advantage(d, g);
  if (adv <= 0)
    throw PreconditionError("'" + d.name() + "' has advantage " + to_string(adv) + " against " + g.label());
  const std::size_t l = g.l();
  check_cap(g.n() + l, "hybrid scan");
  const auto t = d.table();

  std::vector<Rational> points;
  for (std::size_t j = 0; j <= l; ++j) points.push_back(hybrid_point(t, g, j));
  HybridTrace trace = HybridTrace::from_points(std::move(points));
  trace.threshold = adv / l;
  const std::size_t i = trace.i_star - 1;  // gap between H_i and H_{i+1}

  // Conditional gap for each fixed suffix w; its mean over w is the hybrid gap.
  const std::size_t wl = l - i - 1;
  std::optional<std::uint64_t> best;
  Rational best_gap;
  for (std::uint64_t w = 0; w < (1ull << wl); ++w) {
    std::uint64_t with_bit = 0, with_next = 0;
    for (auto y : g.table().values) {
      const auto head = code_slice(y, l, 1, i);
      for (std::uint64_t b = 0; b < 2; ++b) with_bit += t[code_concat(code_concat(head, b, 1), w, wl)] == TriBit::One;
      with_next += t[code_concat(code_slice(y, l, 1, i + 1), w, wl)] == TriBit::One;
    }
    const std::uint64_t seeds = g.table().domain_size();
    Rational gap = ratio(with_bit, 2 * seeds) - ratio(with_next, seeds);
    if (!best || gap > best_gap) {
      best = w;
      best_gap = std::move(gap);
    }
  }
  const BitString w = BitString::from_code(*best, wl);
  trace.suffix = w;
  auto [a1, a2] = cup_predictor_circuits(d, l, i, w);

  ReductionCertificate cert;
  cert.construction = "distinguisher_to_cup_predictors";
  cert.input_adversary = d.name();
  cert.clauses.push_back(cup_identity(d, g, i, w, a1, a2));
  const Rational sum = cert.clauses.front().lhs;
  cert.clauses.push_back({"success(A1) + success(A2) >= 1 + 2 adv/l", sum, 1 + 2 * adv / l, Relation::GreaterEq});
  cert.clauses.push_back({"conditional gap at w >= P[D(H_i)=1] - P[D(H_{i+1})=1]", best_gap,
                          trace.gaps[i], Relation::GreaterEq});
  {
    Rational total = 0;
    for (const auto& gp : trace.gaps) total += gp;
    cert.clauses.push_back({"sum of hybrid gaps = P[D(H_0)=1] - P[D(H_l)=1]", total,
                            trace.points.front() - trace.points.back(), Relation::Equal});
  }
  cert.clauses.push_back({"P[D(H_0)=1] - P[D(H_l)=1] = advantage", trace.points.front() - trace.points.back(),
                          adv, Relation::Equal});
  cert.notes = {{"i", std::to_string(i)}, {"w", w.str()}, {"advantage", to_string(adv)},
                {"gap", to_string(best_gap)}};
  cert.trace = std::move(trace);
  cert.emitted = {a1, a2};
  return {std::move(a1), std::move(a2), i, w, std::move(cert)};
}

CapToBoth cap_to_both(const Adversary& a, const Generator& g, std::size_t i) {
  require_func(a);
  if (a.arity() != i || i >= g.l()) throw ArityError("predictor must read Y[1.." + std::to_string(i) + "]");
  const std::size_t k = a.circuit.n_wit();
  // A1 accepts iff some valid branch says 1; A0 rejects iff some valid branch says 0.
  CircuitBuilder b1(i, k);
  auto fv1 = b1.embed(a.circuit, b1.inputs(1, i), b1.witnesses(1, k));
  Adversary a1{b1.build(a.name() + ".A1", {b1.land(fv1[0], fv1[1])}), EvalMode::Nondet};
  CircuitBuilder b0(i, k);
  auto fv0 = b0.embed(a.circuit, b0.inputs(1, i), b0.witnesses(1, k));
  Adversary a0{b0.build(a.name() + ".A0", {b0.lor(b0.lnot(fv0[0]), fv0[1])}), EvalMode::CoNondet};

  ReductionCertificate cert;
  cert.construction = "cap_to_both";
  cert.input_adversary = a.name();
  const Rational s = predictor_success(a, g, i, Totality::TreatAsBot);
  cert.clauses.push_back({"success(A1) >= success(A)", predictor_success(a1, g, i).value(), s, Relation::GreaterEq});
  cert.clauses.push_back({"success(A0) >= success(A)", predictor_success(a0, g, i).value(), s, Relation::GreaterEq});
  cert.notes = {{"i", std::to_string(i)}, {"success", to_string(s)}};
  cert.emitted = {a1, a0};
  return {std::move(a1), std::move(a0), std::move(cert)};
}

}  // namespace demibit

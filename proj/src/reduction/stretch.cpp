#include "demibit/circuit_builder.hpp"
#include "demibit/errors.hpp"
#include "demibit/reduction.hpp"

namespace demibit {

namespace {

void require_decision_mode(const Adversary& d) {
  if (d.mode != EvalMode::Det && d.mode != EvalMode::Nondet)
    throw ArityError("stretch reduction needs a deterministic or nondeterministic distinguisher");
}

}  // namespace

Adversary stretch_guess_circuit(const Adversary& d, const Generator& b, const StretchParams& p,
                                std::size_t j) {
  require_decision_mode(d);
  if (d.arity() != p.output_length())
    throw ArityError("distinguisher reads " + std::to_string(d.arity()) + " bits, stretch outputs " +
                     std::to_string(p.output_length()));
  if (j > p.m) throw ArityError("hybrid index beyond the block count");
  const Circuit bc = b.as_circuit();
  const std::size_t n = p.n;
  const std::size_t k = d.circuit.n_wit();
  CircuitBuilder cb(p.output_length(), j * n + k);
  std::vector<CircuitBuilder::Node> d_in;
  for (std::size_t t = 1; t <= p.m; ++t) {
    if (t <= j) {
      auto block = cb.embed(bc, cb.witnesses((t - 1) * n + 1, n), {});
      d_in.insert(d_in.end(), block.begin(), block.end());
    } else {
      auto block = cb.inputs((t - 1) * (n + 1) + 1, n + 1);
      d_in.insert(d_in.end(), block.begin(), block.end());
    }
  }
  auto tail = cb.inputs(p.m * (n + 1) + 1, p.rem);
  d_in.insert(d_in.end(), tail.begin(), tail.end());
  auto out = cb.embed(d.circuit, d_in, cb.witnesses(j * n + 1, k));
  const EvalMode mode = j == 0 ? d.mode : EvalMode::Nondet;
  return Adversary{cb.build(d.name() + "'[" + std::to_string(j) + "]", out), mode};
}

StretchReduction stretch_reduction(const Adversary& d, const Generator& b, const StretchParams& p) {
  require_decision_mode(d);
  const Generator g = stretch(b, p);
  const BreakReport demi = demi_break(d, g);
  if (!demi.is_break)
    throw PreconditionError("'" + d.name() + "' does not demi-break " + g.label() +
                            " (P[D(y)=1] = " + to_string(demi.p_random) +
                            ", P[D(g(x))=1] = " + to_string(demi.p_image) + ")");
  const std::size_t m = p.m;
  const std::size_t n = p.n;
  const std::size_t l = p.output_length();
  const auto& bt = b.table();

  // Hybrid P_j = P[D'(b(x_1)..b(x_j) y_{j+1}..y_m r, j) = 1].
  std::vector<Adversary> guess;
  std::vector<std::vector<TriBit>> tables;
  std::vector<Rational> points;
  for (std::size_t j = 0; j <= m; ++j) {
    guess.push_back(stretch_guess_circuit(d, b, p, j));
    tables.push_back(guess.back().table());
    const std::size_t rest = l - j * (n + 1);
    std::uint64_t hits = 0;
    for (std::uint64_t seeds = 0; seeds < (1ull << (j * n)); ++seeds) {
      std::uint64_t prefix = 0;
      for (std::size_t t = 1; t <= j; ++t)
        prefix = code_concat(prefix, bt(code_slice(seeds, j * n, (t - 1) * n + 1, t * n)), n + 1);
      for (std::uint64_t r = 0; r < (1ull << rest); ++r) hits += tables[j][code_concat(prefix, r, rest)] == TriBit::One;
    }
    points.push_back(ratio(hits, 1ull << (j * n + rest)));
  }
  HybridTrace trace = HybridTrace::from_points(points);
  trace.threshold = demi.p_random / m;
  const std::size_t i = trace.i_star;
  if (trace.gaps[i - 1] < trace.threshold)
    throw InternalConsistencyError("no hybrid gap reaches P[D(y)=1]/m");

  // Suffixes s = (y_{i+1}, ..., y_m, r); s is in S1 iff some seeds x_1..x_i
  // make D accept b(x_1)..b(x_i) s, which is exactly D'(., i) on s.
  const std::size_t suffix_len = l - i * (n + 1);
  const std::size_t lead = (i - 1) * (n + 1);
  std::optional<std::uint64_t> best;
  std::uint64_t best_hits = 0;
  for (std::uint64_t s = 0; s < (1ull << suffix_len); ++s) {
    if (tables[i][s] == TriBit::One) continue;  // s in S1; the unread prefix is all zeros
    std::uint64_t hits = 0;
    for (std::uint64_t y = 0; y < (1ull << (n + 1)); ++y)
      hits += tables[i - 1][code_concat(code_concat(0, y, n + 1), s, suffix_len)] == TriBit::One;
    if (!best || hits > best_hits) {
      best = s;
      best_hits = hits;
    }
  }
  if (!best || ratio(best_hits, 1ull << (n + 1)) < trace.threshold)
    throw InternalConsistencyError("no suffix in S2 reaches the hybrid threshold");
  trace.suffix = BitString::from_code(*best, suffix_len);

  // C(y_i) := D'(O y_i s, i-1) with O = 0^{(n+1)(i-1)}.
  const Adversary& dprev = guess[i - 1];
  CircuitBuilder cb(n + 1, dprev.circuit.n_wit());
  auto in = cb.constants(0, lead);
  auto y = cb.inputs(1, n + 1);
  in.insert(in.end(), y.begin(), y.end());
  auto suffix = cb.constants(*best, suffix_len);
  in.insert(in.end(), suffix.begin(), suffix.end());
  auto out = cb.embed(dprev.circuit, in, cb.witnesses(1, dprev.circuit.n_wit()));
  const EvalMode mode = (d.mode == EvalMode::Det && i == 1) ? EvalMode::Det : EvalMode::Nondet;
  Adversary c{cb.build("C", out), mode};

  // D'(., i-1) must not read its first i-1 blocks.
  std::uint64_t padding_mismatch = 0;
  for (std::uint64_t seeds = 0; seeds < (1ull << ((i - 1) * n)); ++seeds) {
    std::uint64_t prefix = 0;
    for (std::size_t t = 1; t < i; ++t)
      prefix = code_concat(prefix, bt(code_slice(seeds, (i - 1) * n, (t - 1) * n + 1, t * n)), n + 1);
    for (std::uint64_t yy = 0; yy < (1ull << (n + 1)); ++yy) {
      const auto tail = code_concat(yy, *best, suffix_len);
      padding_mismatch += tables[i - 1][code_concat(prefix, tail, l - lead)] !=
                          tables[i - 1][tail];
    }
  }

  ReductionCertificate cert;
  cert.construction = "stretch_reduction";
  cert.input_adversary = d.name();
  const Rational p_rand = accept_random(d);
  cert.clauses.push_back({"P[C(U_{n+1})=1] >= 1/(m*s'), s' = 1/P[D(U_{N+m})=1]", accept_random(c),
                          p_rand / m, Relation::GreaterEq});
  cert.clauses.push_back({"P[C(b(U_n))=1] = 0", accept_image(c, b), Rational(0), Relation::Equal});
  cert.clauses.push_back({"sum_i (P_{i-1} - P_i) = P_0 - P_m",
                          trace.points.front() - trace.points.back(), trace.points.front() - trace.points.back(),
                          Relation::Equal});
  {
    Rational sum = 0;
    for (const auto& gp : trace.gaps) sum += gp;
    cert.clauses.back().lhs = sum;
  }
  cert.clauses.push_back({"P_{i*-1} - P_{i*} >= 1/(m*s')", trace.gaps[i - 1], p_rand / m, Relation::GreaterEq});
  cert.clauses.push_back({"D'(O y_i s, i*-1) = D'(b(x_1)..b(x_{i*-1}) y_i s, i*-1) for all seeds",
                          Rational(padding_mismatch), Rational(0), Relation::Equal});
  cert.notes = {{"m", std::to_string(m)},
                {"n", std::to_string(n)},
                {"rem", std::to_string(p.rem)},
                {"i_star", std::to_string(i)},
                {"suffix", trace.suffix->str()},
                {"s_prime", to_string(Rational(1) / p_rand)},
                {"distinguisher_size", std::to_string(d.circuit.size())}};
  cert.trace = std::move(trace);
  cert.emitted = {c};
  return {std::move(c), std::move(cert)};
}

}  // namespace demibit

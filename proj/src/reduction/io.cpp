#include "demibit/circuit_builder.hpp"
#include "demibit/errors.hpp"
#include "demibit/reduction.hpp"

namespace demibit {

IoReduction io_reduction(const Adversary& d, std::span<const Generator> family, std::size_t n,
                         std::optional<BigInt> s) {
  const Generator big = io_patch(family, n);
  const std::size_t idx = io_patch_source(family, n);
  const Generator& g = family[idx];
  const Rational adv = super_advantage(d, big);
  if (adv <= 0)
    throw PreconditionError("'" + d.name() + "' has no positive advantage against " + big.label());
  if (!s) s = ceil(Rational(1) / adv);
  if (*s <= 0) throw PreconditionError("s must be positive");
  const Rational bar = Rational(1) / Rational(*s);
  if (adv < bar)
    throw PreconditionError("advantage " + to_string(adv) + " of '" + d.name() + "' is below 1/s = " +
                            to_string(bar));

  const std::size_t m = g.l();
  const std::size_t tail = n - g.n();
  check_cap(m + tail, "io_reduction");
  const auto t = d.table();
  const auto& gt = g.table();

  // For each fixed tail w: P_Y[D(Y w)=1] - P_x[D(g(x) w)=1]; the advantage
  // of D on the patched generator is their average.
  std::optional<std::uint64_t> best;
  Rational best_gap;
  std::vector<Rational> gaps;
  for (std::uint64_t w = 0; w < (1ull << tail); ++w) {
    std::uint64_t on_random = 0, on_image = 0;
    for (std::uint64_t y = 0; y < (1ull << m); ++y) on_random += t[code_concat(y, w, tail)] == TriBit::One;
    for (auto y : gt.values) on_image += t[code_concat(y, w, tail)] == TriBit::One;
    Rational gap = ratio(on_random, 1ull << m) - ratio(on_image, gt.domain_size());
    if (!best || gap > best_gap) {
      best = w;
      best_gap = gap;
    }
    gaps.push_back(std::move(gap));
  }

  CircuitBuilder cb(m, d.circuit.n_wit());
  auto in = cb.inputs(1, m);
  auto fixed = cb.constants(*best, tail);
  in.insert(in.end(), fixed.begin(), fixed.end());
  auto out = cb.embed(d.circuit, in, cb.witnesses(1, d.circuit.n_wit()));
  Adversary dp{cb.build(d.name() + "'", out), d.mode};

  ReductionCertificate cert;
  cert.construction = "io_reduction";
  cert.input_adversary = d.name();
  const Rational adv_prime = super_advantage(dp, g);
  cert.clauses.push_back({"P[D'(U)=1] - P[D'(g(U))=1] >= 1/s", adv_prime, bar, Relation::GreaterEq});
  cert.clauses.push_back({"advantage of D' on g >= advantage of D on G", adv_prime, super_advantage(d, big),
                          Relation::GreaterEq});
  cert.clauses.push_back({"|D| + 2 >= |D'|", Rational(static_cast<long long>(d.circuit.size() + 2)),
                          Rational(static_cast<long long>(dp.circuit.size())), Relation::GreaterEq});
  cert.notes = {{"n", std::to_string(n)},
                {"n_i", std::to_string(g.n())},
                {"source", g.label()},
                {"w", BitString::from_code(*best, tail).str()},
                {"s", s->str()}};
  cert.emitted = {dp};
  return {std::move(dp), BitString::from_code(*best, tail), idx, std::move(cert)};
}

}  // namespace demibit

#include <functional>
#include <random>
#include <sstream>

#include "demibit/circuit_builder.hpp"
#include "demibit/cli.hpp"
#include "demibit/errors.hpp"
#include "demibit/experiments.hpp"
#include "demibit/learner.hpp"
#include "demibit/measure.hpp"
#include "demibit/netlist.hpp"
#include "demibit/reduction.hpp"

namespace demibit::cli {

namespace {

struct Failure {
  std::string what;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

void expect_holds(const ReductionCertificate& c) {
  for (const auto& cl : c.clauses)
    expect(cl.holds(), c.construction + ": " + cl.contract + " (lhs " + to_string(cl.lhs) + ", rhs " +
                           to_string(cl.rhs) + ")");
}

Generator parity_generator() {
  return Generator::from_table("parity", FunctionTable::from_function(2, 3, [](std::uint64_t x) {
                                 return (x << 1) | (((x >> 1) ^ x) & 1u);
                               }));
}

Adversary xor_predictor() {
  CircuitBuilder cb(2, 0);
  return Adversary{cb.build("xor", {cb.constant(1), cb.lxor(cb.input(1), cb.input(2))}), EvalMode::FuncComputing};
}

std::string check_roundtrip() {
  std::mt19937_64 rng(11);
  std::size_t count = 0;
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t k = 0; k <= 2; ++k)
      for (int r = 0; r < 20; ++r) {
        const Circuit c = random_circuit(rng, "r", n, k, 1 + rng() % 12);
        expect(parse_circuit(to_netlist(c)) == c, "netlist round-trip changed circuit");
        ++count;
      }
  return std::to_string(count) + " circuits";
}

std::string check_corrupted_netlist() {
  const std::string fixture =
      "circuit broken in=2 wit=0 out=g2\n"
      "g1 = AND i1 g2\n"
      "g2 = NOT g1\n";
  try {
    parse_circuit(fixture);
  } catch (const ParseError& e) {
    return std::string("rejected: ") + e.what();
  }
  throw Failure{"corrupted netlist was accepted"};
}

std::string check_conondet_duality() {
  std::mt19937_64 rng(12);
  std::size_t count = 0;
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t k = 0; k <= 3; ++k)
      for (int r = 0; r < 25; ++r) {
        const Circuit c = random_circuit(rng, "r", n, k, 1 + rng() % 10);
        const auto nd = truth_table(c, EvalMode::Nondet);
        const auto co = truth_table(negate(c, "neg"), EvalMode::CoNondet);
        for (std::size_t x = 0; x < nd.size(); ++x)
          expect((nd[x] == TriBit::One) == (co[x] == TriBit::Zero), "co-nondeterministic negation mismatch");
        ++count;
      }
  return std::to_string(count) + " circuits";
}

std::string check_func_agreement() {
  std::mt19937_64 rng(13);
  std::size_t count = 0;
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t k = 0; k <= 2; ++k)
      for (int r = 0; r < 25; ++r) {
        const Circuit flag = random_circuit(rng, "f", n, k, 1 + rng() % 8);
        const Circuit value = random_circuit(rng, "v", n, k, 1 + rng() % 8);
        CircuitBuilder cb(n, k);
        auto in = cb.inputs(1, n);
        auto w = cb.witnesses(1, k);
        auto f = cb.embed(flag, in, w)[0];
        auto v = cb.embed(value, in, w)[0];
        const Circuit c = cb.build("fv", {f, v});
        const auto t = truth_table(c, EvalMode::FuncComputing, Totality::TreatAsBot);
        for (std::uint64_t x = 0; x < (1ull << n); ++x) {
          bool zero = false, one = false;
          for (std::uint64_t wc = 0; wc < (1ull << k); ++wc) {
            const BitString out = eval_raw(c, BitString::from_code(x, n), BitString::from_code(wc, k));
            if (out.at(1) == 1) (out.at(2) ? one : zero) = true;
          }
          const TriBit want = zero && one ? TriBit::Bot : one ? TriBit::One : zero ? TriBit::Zero : TriBit::Bot;
          expect(t[x] == want, "function-computing evaluation disagrees with branch enumeration");
        }
        ++count;
      }
  return std::to_string(count) + " circuits";
}

std::string check_demi_implies_super() {
  const Generator g = parity_generator();
  std::size_t breaks = 0;
  for (std::uint64_t mask = 0; mask < 256; ++mask) {
    std::vector<std::uint8_t> member(8);
    for (std::size_t y = 0; y < 8; ++y) member[y] = (mask >> y) & 1u;
    const Adversary d{subset_acceptor("S", 3, member), EvalMode::Det};
    const BreakReport r = demi_break(d, g);
    if (!r.is_break) continue;
    ++breaks;
    expect(super_advantage(d, g) >= Rational(1) / Rational(*r.s_witness), "demi-break without super-advantage 1/s");
  }
  return std::to_string(breaks) + " demi-breaks over all 256 subsets";
}

std::string check_hsg_equivalence() {
  std::size_t pairs = 0;
  for (std::size_t n = 1; n <= 2; ++n) {
    const auto gens = all_one_bit_stretchers(n);
    const std::size_t l = n + 1;
    const std::size_t step = n == 1 ? 1 : 257;
    for (std::size_t gi = 0; gi < gens.size(); gi += step) {
      const Generator g = Generator::from_table("g", gens[gi]);
      for (std::uint64_t mask = 0; mask < (1ull << (1u << l)); ++mask) {
        std::vector<std::uint8_t> member(1u << l);
        for (std::size_t y = 0; y < member.size(); ++y) member[y] = (mask >> y) & 1u;
        const Adversary d{subset_acceptor("S", l, member), EvalMode::Det};
        const BreakReport r = demi_break(d, g);
        const bool miss = hsg_check(g, d, Rational(1, static_cast<long long>(l))) == HsgResult::Miss;
        expect((r.is_break && r.advantage >= Rational(1, static_cast<long long>(l))) == miss,
               "hitting-set miss and demi-break disagree");
        ++pairs;
      }
    }
  }
  return std::to_string(pairs) + " (generator, set) pairs";
}

std::string check_stretch() {
  StretchSweepOptions o;
  o.base_n = {1};
  o.max_N = 3;
  o.exhaustive_complement = 8;
  o.random_subsets = 4;
  o.random_circuits = 2;
  o.seed = 5;
  const auto r = stretch_sweep(o);
  expect(r.failures == 0, "stretch reduction clause failed: " + (r.failure_detail.empty() ? "" : r.failure_detail[0]));
  expect(r.telescoping_failures == 0, "stretch hybrid gaps do not telescope");
  return std::to_string(r.adversaries) + " adversaries";
}

std::string check_lattice() {
  const Generator g = parity_generator();
  const Adversary a = xor_predictor();
  expect_holds(cap_to_both(a, g, 2).cert);
  const auto cap = cap_predictor_to_distinguisher(a, g, 2);
  expect_holds(cap.cert);
  expect(super_advantage(cap.d, g) == Rational(1, 2), "parity distinguisher advantage is not 1/2");
  auto member = image_indicator(g);
  for (auto& v : member) v = !v;
  const Adversary d{subset_acceptor("outside", 3, member), EvalMode::Det};
  const auto cup = distinguisher_to_cup_predictors(d, g);
  expect_holds(cup.cert);
  expect(cup.cert.trace->telescopes(), "cup hybrid gaps do not telescope");
  return "parity generator";
}

std::string check_supercore(bool inject_fault) {
  std::size_t count = 0;
  for (std::size_t n = 1; n <= 2; ++n) {
    const std::size_t points = std::size_t{1} << n;
    for (std::uint64_t fcode = 0; fcode < (1ull << (n * points)); fcode += n == 1 ? 1 : 37)
      for (std::uint64_t bcode = 0; bcode < (1ull << points); ++bcode) {
        std::vector<std::uint64_t> fv(points), bv(points);
        for (std::size_t x = 0; x < points; ++x) {
          fv[x] = (fcode >> (x * n)) & ((1u << n) - 1);
          bv[x] = (bcode >> x) & 1u;
        }
        const FunctionTable f(n, n, fv), b(n, 1, bv);
        for (std::uint64_t dmask = 0; dmask < (1ull << (1u << (n + 1))); dmask += n == 1 ? 1 : 17) {
          std::vector<std::uint8_t> member(std::size_t{1} << (n + 1));
          for (std::size_t y = 0; y < member.size(); ++y) member[y] = (dmask >> y) & 1u;
          const Adversary d{subset_acceptor("D", n + 1, member), EvalMode::Det};
          auto [a1, a2] = supercore_attack_circuits(d, n);
          if (inject_fault) a2 = Adversary{negate(a1.circuit, "A2-miswired"), EvalMode::Det};
          expect_holds(verify_supercore_attack(d, f, b, a1, a2));
          ++count;
        }
      }
  }
  return std::to_string(count) + " (f, b, D) triples";
}

std::string check_injective() {
  std::size_t count = 0;
  for (std::size_t n = 1; n <= 2; ++n) {
    std::vector<std::uint64_t> perm(std::size_t{1} << n);
    for (std::size_t x = 0; x < perm.size(); ++x) perm[x] = x;
    do {
      for (std::uint64_t bcode = 0; bcode < (1ull << perm.size()); ++bcode) {
        std::vector<std::uint64_t> bv(perm.size());
        for (std::size_t x = 0; x < perm.size(); ++x) bv[x] = (bcode >> x) & 1u;
        const auto r = injective_attack(FunctionTable(n, n, perm), FunctionTable(n, 1, bv));
        expect_holds(r.cert);
        expect(r.cert.clauses[0].lhs == Rational(3, 2), "injective attack sum is not 3/2");
        ++count;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return std::to_string(count) + " (f, b) pairs";
}

std::string check_learner() {
  std::vector<Circuit> targets;
  {
    CircuitBuilder cb(1, 0);
    targets.push_back(cb.build("id", {cb.input(1)}));
  }
  {
    CircuitBuilder cb(1, 0);
    targets.push_back(cb.build("not", {cb.lnot(cb.input(1))}));
  }
  {
    CircuitBuilder cb(1, 0);
    targets.push_back(cb.build("zero", {cb.constant(0)}));
  }
  {
    CircuitBuilder cb(1, 0);
    targets.push_back(cb.build("one", {cb.constant(1)}));
  }
  for (const auto& c : targets) {
    const Generator g = gmc(2, c);
    auto member = image_indicator(g);
    for (auto& v : member) v = !v;
    const Adversary d{subset_acceptor("outside", g.l(), member), EvalMode::Det};
    const BigInt s = ceil(1 / super_advantage(d, g));
    const auto out = verify_learning_bound(d, c, 2, s);
    expect(out.identity_holds(), "learner accuracy identity fails for " + c.name());
    expect(out.meets_statement, "learner confidence below 1/(2 m^2 s) for " + c.name());
    expect(out.trace.telescopes(), "learner hybrid gaps do not telescope for " + c.name());
  }
  return "id, not, zero, one";
}

std::string check_mutation_caught() {
  // A2 wired to D(Y 0) instead of D(Y 1) must break an identity.
  const FunctionTable f = FunctionTable::identity(2);
  const FunctionTable b(2, 1, {0, 1, 1, 0});
  const Generator g = append_bit(f, b);
  auto member = image_indicator(g);
  for (auto& v : member) v = !v;
  const Adversary d{subset_acceptor("outside", 3, member), EvalMode::Det};
  auto [a1, a2] = supercore_attack_circuits(d, 2);
  const Adversary bad{negate(a1.circuit, "A2-miswired"), EvalMode::Det};
  const auto cert = verify_supercore_attack(d, f, b, a1, bad);
  for (const auto& cl : cert.clauses)
    if (!cl.holds()) return "caught: " + cl.contract;
  throw Failure{"mis-wired A2 passed every clause"};
}

}  // namespace

SelftestResult selftest(const SelftestOptions& options) {
  const std::vector<std::pair<std::string, std::function<std::string()>>> checks = {
      {"netlist round-trip", check_roundtrip},
      {"corrupted netlist rejected", check_corrupted_netlist},
      {"co-nondeterministic duality", check_conondet_duality},
      {"function-computing agreement", check_func_agreement},
      {"demi-break implies super-advantage", check_demi_implies_super},
      {"hitting-set / demi-break equivalence", check_hsg_equivalence},
      {"stretch reduction soundness", check_stretch},
      {"predictability lattice", check_lattice},
      {"super-core identities", [&] { return check_supercore(options.inject_fault); }},
      {"injective functions have no super-core", check_injective},
      {"learner accuracy identity", check_learner},
      {"mis-wired reduction detected", check_mutation_caught},
  };
  SelftestResult result;
  std::ostringstream table;
  std::size_t passed = 0;
  for (const auto& [name, fn] : checks) {
    SelftestCheck c{name, false, ""};
    try {
      c.detail = fn();
      c.passed = true;
    } catch (const Failure& f) {
      c.detail = "contract violation: " + f.what;
    } catch (const std::exception& e) {
      c.detail = std::string("error: ") + e.what();
    }
    passed += c.passed;
    table << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  (" << c.detail << ")\n";
    result.checks.push_back(std::move(c));
  }
  table << passed << "/" << checks.size() << " checks passed\n";
  result.exit_code = passed == checks.size() ? kExitOk : kExitViolation;
  result.table = table.str();
  return result;
}

}  // namespace demibit::cli

#include "demibit/measure.hpp"

#include "demibit/errors.hpp"

namespace demibit {

namespace {

void check_distinguisher(const Adversary& d, const Generator& g) {
  if (d.mode == EvalMode::FuncComputing)
    throw ArityError("distinguisher '" + d.name() + "' must be a decision circuit");
  if (d.arity() != g.l())
    throw ArityError("distinguisher '" + d.name() + "' reads " + std::to_string(d.arity()) +
                     " bits but generator '" + g.label() + "' outputs " + std::to_string(g.l()));
  check_cap(g.n(), "generator '" + g.label() + "'");
}

std::uint64_t count_ones(const std::vector<TriBit>& t) {
  std::uint64_t c = 0;
  for (auto v : t) c += v == TriBit::One;
  return c;
}

std::uint64_t count_on_image(const std::vector<TriBit>& t, const Generator& g) {
  std::uint64_t c = 0;
  for (auto y : g.table().values) c += t[y] == TriBit::One;
  return c;
}

void fill_s_witness(BreakReport& r, const Adversary& d) {
  r.adversary_size = d.circuit.size();
  if (r.advantage > 0) {
    r.s_witness = ceil(Rational(1) / r.advantage);
    r.size_within_s = BigInt(r.adversary_size) <= *r.s_witness;
  }
}

}  // namespace

std::string_view to_string(BreakKind k) {
  switch (k) {
    case BreakKind::SuperAdvantage: return "SuperAdvantage";
    case BreakKind::DemiBreak: return "DemiBreak";
    case BreakKind::StdAdvantage: return "StdAdvantage";
    case BreakKind::HSGMiss: return "HSGMiss";
  }
  return "?";
}

std::string_view to_string(HsgResult r) {
  switch (r) {
    case HsgResult::Hit: return "Hit";
    case HsgResult::Miss: return "Miss";
    case HsgResult::NotDense: return "NotDense";
  }
  return "?";
}

Rational accept_random(const Adversary& d) {
  const auto t = d.table();
  return ratio(count_ones(t), t.size());
}

Rational accept_image(const Adversary& d, const Generator& g) {
  check_distinguisher(d, g);
  const auto t = d.table();
  return ratio(count_on_image(t, g), g.table().domain_size());
}

Rational super_advantage(const Adversary& d, const Generator& g) {
  return super_advantage_report(d, g).advantage;
}

BreakReport super_advantage_report(const Adversary& d, const Generator& g) {
  check_distinguisher(d, g);
  const auto t = d.table();
  BreakReport r;
  r.kind = BreakKind::SuperAdvantage;
  r.generator = g.label();
  r.adversary = d.name();
  r.p_random = ratio(count_ones(t), t.size());
  r.p_image = ratio(count_on_image(t, g), g.table().domain_size());
  r.zero_on_image = r.p_image == 0;
  r.advantage = r.p_random - r.p_image;
  r.is_break = r.advantage > 0;
  fill_s_witness(r, d);
  return r;
}

Rational std_advantage(const Adversary& d, const Generator& g) {
  if (d.mode != EvalMode::Det)
    throw ArityError("std_advantage needs a deterministic adversary, '" + d.name() + "' is " +
                     std::string(to_string(d.mode)));
  const Rational a = super_advantage(d, g);
  return a < 0 ? Rational(-a) : a;
}

BreakReport demi_break(const Adversary& d, const Generator& g) {
  BreakReport r = super_advantage_report(d, g);
  r.kind = BreakKind::DemiBreak;
  r.is_break = r.zero_on_image && r.p_random > 0;
  r.advantage = r.zero_on_image ? r.p_random : Rational(0);
  r.s_witness.reset();
  r.size_within_s = false;
  if (r.is_break) fill_s_witness(r, d);
  return r;
}

HsgResult hsg_check(const Generator& g, const Adversary& d, const Rational& density_threshold) {
  check_distinguisher(d, g);
  const auto t = d.table();
  if (ratio(count_ones(t), t.size()) < density_threshold) return HsgResult::NotDense;
  return count_on_image(t, g) > 0 ? HsgResult::Hit : HsgResult::Miss;
}

Prob predictor_success(const Adversary& a, const Generator& g, std::size_t i, Totality totality) {
  if (i >= g.l())
    throw ArityError("predictor index " + std::to_string(i) + " out of range for output length " +
                     std::to_string(g.l()));
  if (a.arity() != i)
    throw ArityError("predictor '" + a.name() + "' reads " + std::to_string(a.arity()) +
                     " bits, expected prefix length " + std::to_string(i));
  const auto t = a.table(totality);
  std::uint64_t hits = 0;
  for (auto y : g.table().values) {
    const auto prefix = code_slice(y, g.l(), 1, i);
    const auto next = code_bit(y, g.l(), i + 1);
    hits += t[prefix] == to_tribit(next != 0);
  }
  return Prob(hits, g.table().domain_size());
}

Prob hardcore_success(const Adversary& a, const FunctionTable& f, const FunctionTable& b_pred) {
  if (a.arity() != f.out_bits) throw ArityError("predictor arity does not match |f(x)|");
  if (b_pred.in_bits != f.in_bits || b_pred.out_bits != 1)
    throw ArityError("predicate must map the domain of f to one bit");
  const auto t = a.table();
  std::uint64_t hits = 0;
  for (std::uint64_t x = 0; x < f.domain_size(); ++x) hits += t[f(x)] == to_tribit(b_pred(x) != 0);
  return Prob(hits, f.domain_size());
}

namespace {

void check_supercore_shape(const Adversary& a, const FunctionTable& f, const FunctionTable& b_pred) {
  if (a.arity() != f.out_bits)
    throw ArityError("super-core adversary '" + a.name() + "' must read |f(x)| = " +
                     std::to_string(f.out_bits) + " bits");
  if (b_pred.in_bits != f.in_bits || b_pred.out_bits != 1)
    throw ArityError("predicate must map the domain of f to one bit");
}

}  // namespace

std::pair<Prob, Prob> star_terms(const Adversary& a1, const FunctionTable& f, const FunctionTable& b_pred) {
  if (a1.mode != EvalMode::Nondet && a1.mode != EvalMode::Det)
    throw ArityError("A1 must be nondeterministic (or deterministic)");
  check_supercore_shape(a1, f, b_pred);
  const auto t = a1.table();
  std::uint64_t hit = 0, ones = 0;
  for (std::uint64_t x = 0; x < f.domain_size(); ++x) hit += b_pred(x) == 0 && t[f(x)] == TriBit::Zero;
  for (auto v : t) ones += v == TriBit::One;
  return {Prob(hit, f.domain_size()), Prob(ratio(ones, t.size()) / 2)};
}

std::pair<Prob, Prob> diamond_terms(const Adversary& a2, const FunctionTable& f,
                                    const FunctionTable& b_pred) {
  if (a2.mode != EvalMode::CoNondet && a2.mode != EvalMode::Det)
    throw ArityError("A2 must be co-nondeterministic (or deterministic)");
  check_supercore_shape(a2, f, b_pred);
  const auto t = a2.table();
  std::uint64_t hit = 0, zeros = 0;
  for (std::uint64_t x = 0; x < f.domain_size(); ++x) hit += b_pred(x) == 1 && t[f(x)] == TriBit::One;
  for (auto v : t) zeros += v == TriBit::Zero;
  return {Prob(hit, f.domain_size()), Prob(ratio(zeros, t.size()) / 2)};
}

Prob predicate_rate(const FunctionTable& b_pred, int v) {
  std::uint64_t c = 0;
  for (auto b : b_pred.values) c += static_cast<int>(b) == v;
  return Prob(c, b_pred.domain_size());
}

SuperCoreTerms super_core_terms(const Adversary& a1, const Adversary& a2, const FunctionTable& f,
                                const FunctionTable& b_pred, std::optional<Rational> inv_p) {
  auto [t1, t3] = star_terms(a1, f, b_pred);
  auto [t2, t4] = diamond_terms(a2, f, b_pred);
  SuperCoreTerms s{t1, t2, t3, t4, {}, {}};
  if (inv_p) {
    const Rational bar = Rational(1, 2) + *inv_p;
    s.star = t1.value() + t3.value() >= bar;
    s.diamond = t2.value() + t4.value() >= bar;
  }
  return s;
}

}  // namespace demibit

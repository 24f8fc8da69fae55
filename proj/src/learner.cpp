#include "demibit/learner.hpp"

#include <random>

#include "demibit/circuit_builder.hpp"
#include "demibit/errors.hpp"
#include "demibit/measure.hpp"

namespace demibit {

namespace {

void check_target(const Circuit& c) {
  if (c.n_wit() != 0 || c.outputs().size() != 1)
    throw ArityError("target '" + c.name() + "' must be a deterministic one-output circuit");
}

void check_learner_shape(const Adversary& d, std::size_t n, std::size_t m) {
  if (d.mode != EvalMode::Det && d.mode != EvalMode::Nondet)
    throw ArityError("'" + d.name() + "' must be deterministic or nondeterministic");
  if (m == 0) throw ArityError("m must be at least 1");
  if (d.arity() != m * (n + 1))
    throw ArityError("'" + d.name() + "' reads " + std::to_string(d.arity()) + " bits, G_{m,C} outputs " +
                     std::to_string(m * (n + 1)));
}

std::vector<int> target_table(const Circuit& c) {
  check_target(c);
  std::vector<int> t;
  for (auto v : truth_table(c, EvalMode::Det)) t.push_back(v == TriBit::One);
  return t;
}

std::uint64_t mask(std::size_t bits) { return bits >= 64 ? ~0ull : (1ull << bits) - 1; }

}  // namespace

Oracle Oracle::from_circuit(const Circuit& c) {
  auto table = std::make_shared<std::vector<int>>(target_table(c));
  return Oracle(c.n_std(), [table](std::uint64_t x) { return (*table)[x]; });
}

int Oracle::query(std::uint64_t x) {
  const int a = answer_(x) ? 1 : 0;
  auto [it, fresh] = seen_.emplace(x, a);
  if (!fresh && it->second != a)
    throw PreconditionError("oracle inconsistency: query " + BitString::from_code(x, n_).str() +
                            " answered both 0 and 1");
  log_.emplace_back(x, a);
  return a;
}

LearnerRun learner_hypothesis(const Adversary& d, Oracle& oracle, std::size_t m, std::size_t i,
                              const BitString& r, const std::vector<BitString>& x_blocks) {
  const std::size_t n = oracle.n();
  check_learner_shape(d, n, m);
  if (i < 1 || i > m) throw ArityError("block index out of range");
  if (r.size() != m || x_blocks.size() + 1 != m) throw ArityError("learner randomness has the wrong shape");
  for (const auto& x : x_blocks)
    if (x.size() != n) throw ArityError("frozen block has the wrong length");

  std::vector<std::pair<BitString, int>> queries;
  const std::size_t k = d.circuit.n_wit();
  CircuitBuilder cb(n, k);
  std::vector<CircuitBuilder::Node> in;
  for (std::size_t j = 1; j <= m; ++j) {
    if (j == i) {
      auto x = cb.inputs(1, n);
      in.insert(in.end(), x.begin(), x.end());
      in.push_back(cb.constant(r.at(static_cast<long>(i))));
      continue;
    }
    const BitString& x = x_blocks[j < i ? j - 1 : j - 2];
    auto xs = cb.constants(x.code(), n);
    in.insert(in.end(), xs.begin(), xs.end());
    int label = r.at(static_cast<long>(j));
    if (j < i) {
      label = oracle.query(x.code());
      queries.emplace_back(x, label);
    }
    in.push_back(cb.constant(label));
  }
  auto out = cb.embed(d.circuit, in, cb.witnesses(1, k));
  const bool flip = r.at(static_cast<long>(i)) == 1;
  if (flip) out = {cb.lnot(out[0])};
  EvalMode mode = d.mode;
  if (mode == EvalMode::Nondet && flip) mode = EvalMode::CoNondet;
  Adversary h{cb.build("C'[i=" + std::to_string(i) + ",r=" + r.str() + "]", out), mode};
  return LearnerRun{i, r, x_blocks, std::move(queries), std::move(h), 0};
}

LearnerRun learn(const Adversary& d, Oracle& oracle, std::size_t m, std::uint64_t rng_seed) {
  const std::size_t n = oracle.n();
  check_learner_shape(d, n, m);
  std::mt19937_64 rng(rng_seed);
  const std::size_t i = 1 + static_cast<std::size_t>(rng() % m);
  const BitString r = BitString::from_code(rng() & mask(m), m);
  std::vector<BitString> blocks;
  for (std::size_t j = 1; j < m; ++j) blocks.push_back(BitString::from_code(rng() & mask(n), n));
  LearnerRun run = learner_hypothesis(d, oracle, m, i, r, blocks);
  run.rng_seed = rng_seed;
  return run;
}

LearnerRun learn(const Adversary& d, const Circuit& c, std::size_t m, std::uint64_t rng_seed) {
  Oracle oracle = Oracle::from_circuit(c);
  return learn(d, oracle, m, rng_seed);
}

Rational hypothesis_accuracy(const Adversary& hypothesis, const Circuit& c) {
  const auto target = target_table(c);
  if (hypothesis.arity() != c.n_std()) throw ArityError("hypothesis and target disagree on input length");
  const auto h = hypothesis.table();
  std::uint64_t hits = 0;
  for (std::size_t x = 0; x < target.size(); ++x) hits += (h[x] == TriBit::One) == (target[x] == 1);
  return ratio(hits, target.size());
}

HybridTrace hybrid_gap_scan(const Adversary& d, const Circuit& c, std::size_t m) {
  const std::size_t n = c.n_std();
  check_learner_shape(d, n, m);
  check_cap(m * (n + 1), "learner hybrid scan");
  const auto target = target_table(c);
  const auto t = d.table();
  std::vector<Rational> points;
  for (std::size_t j = 1; j <= m + 1; ++j) {
    std::uint64_t hits = 0;
    for (std::uint64_t xs = 0; xs < (1ull << (m * n)); ++xs)
      for (std::uint64_t rs = 0; rs < (1ull << m); ++rs) {
        std::uint64_t y = 0;
        for (std::size_t b = 1; b <= m; ++b) {
          const auto x = code_slice(xs, m * n, (b - 1) * n + 1, b * n);
          const auto label = b < j ? static_cast<std::uint64_t>(target[x]) : code_bit(rs, m, b);
          y = (y << (n + 1)) | (x << 1) | label;
        }
        hits += t[y] == TriBit::One;
      }
    points.push_back(ratio(hits, 1ull << (m * n + m)));
  }
  HybridTrace trace = HybridTrace::from_points(std::move(points));
  trace.threshold = (trace.points.front() - trace.points.back()) / m;
  if (trace.gaps[trace.i_star - 1] < trace.threshold)
    throw InternalConsistencyError("largest learner hybrid gap is below the mean gap");
  return trace;
}

LearnOutcome verify_learning_bound(const Adversary& d, const Circuit& c, std::size_t m, const BigInt& s,
                                   LearnMode mode) {
  const std::size_t n = c.n_std();
  check_learner_shape(d, n, m);
  if (s <= 0) throw PreconditionError("s must be positive");
  if (mode.kind == LearnMode::Kind::Exhaustive) {
    const std::size_t frozen = n * (m - 1);
    if (frozen + m >= 40 || (static_cast<std::uint64_t>(m) << (m + frozen)) > kExhaustiveLearnBound)
      throw CapExceeded("exhaustive learner sweep exceeds 2^20 runs; use sampled mode");
  }
  const Generator g = gmc(m, c);
  LearnOutcome out;
  out.mode = mode;
  out.s = s;
  out.advantage = super_advantage(d, g);
  const Rational sr(s);
  if (out.advantage <= 0 || out.advantage < Rational(1) / sr)
    throw PreconditionError("'" + d.name() + "' has advantage " + to_string(out.advantage) + " on " +
                            g.label() + ", below 1/s = " + to_string(Rational(1) / sr));
  const Rational mr(static_cast<long long>(m));
  out.accuracy_bar = Rational(1, 2) + Rational(1) / (2 * mr * sr);
  out.statement_bound = Rational(1) / (2 * mr * mr * sr);
  out.proof_bound = Rational(1) / (mr * mr * sr);
  out.trace = hybrid_gap_scan(d, c, m);

  std::uint64_t meeting = 0;
  if (mode.kind == LearnMode::Kind::Exhaustive) {
    const std::size_t frozen = n * (m - 1);
    const auto target = target_table(c);
    const auto t = d.table();
    for (std::size_t i = 1; i <= m; ++i) {
      std::uint64_t correct = 0;
      for (std::uint64_t rs = 0; rs < (1ull << m); ++rs)
        for (std::uint64_t xb = 0; xb < (1ull << frozen); ++xb) {
          // Layout with block i's x left at zero; it is or-ed in per test point.
          std::uint64_t base = 0;
          std::vector<BitString> blocks;
          for (std::size_t b = 1, f = 0; b <= m; ++b) {
            std::uint64_t x = 0, label = code_bit(rs, m, b);
            if (b != i) {
              x = code_slice(xb, frozen, f * n + 1, (f + 1) * n);
              ++f;
              blocks.push_back(BitString::from_code(x, n));
              if (b < i) label = static_cast<std::uint64_t>(target[x]);
            }
            base = (base << (n + 1)) | (x << 1) | label;
          }
          const std::size_t shift = (m - i) * (n + 1) + 1;
          const int ri = static_cast<int>(code_bit(rs, m, i));
          std::uint64_t hits = 0;
          for (std::uint64_t x = 0; x < (1ull << n); ++x) {
            const int p = t[base | (x << shift)] == TriBit::One;
            hits += (ri ^ p) == target[x];
          }
          correct += hits;
          RunAccuracy ra{i, BitString::from_code(rs, m), std::move(blocks), ratio(hits, 1ull << n), false};
          ra.meets = ra.accuracy >= out.accuracy_bar;
          meeting += ra.meets;
          out.runs.push_back(std::move(ra));
        }
      out.mean_accuracy.push_back(ratio(correct, 1ull << (m + frozen + n)));
      out.predicted_accuracy.push_back(Rational(1, 2) + out.trace.gaps[i - 1]);
    }
  } else {
    if (mode.samples == 0) throw PreconditionError("sampled mode needs at least one run");
    std::seed_seq seq{static_cast<std::uint32_t>(mode.seed), static_cast<std::uint32_t>(mode.seed >> 32)};
    std::mt19937_64 seeds(seq);
    for (std::size_t k = 0; k < mode.samples; ++k) {
      LearnerRun run = learn(d, c, m, seeds());
      RunAccuracy ra{run.i, run.r, run.x_blocks, hypothesis_accuracy(run.hypothesis, c), false};
      ra.meets = ra.accuracy >= out.accuracy_bar;
      meeting += ra.meets;
      out.runs.push_back(std::move(ra));
    }
  }
  out.confidence = ratio(meeting, out.runs.size());
  out.meets_statement = out.confidence >= out.statement_bound;
  out.meets_proof = out.confidence >= out.proof_bound;
  return out;
}

}  // namespace demibit

#include "demibit/experiments.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "demibit/circuit_builder.hpp"
#include "demibit/errors.hpp"
#include "demibit/measure.hpp"
#include "demibit/reduction.hpp"

namespace demibit {

Circuit random_circuit(std::mt19937_64& rng, std::string name, std::size_t n_std, std::size_t n_wit,
                       std::size_t gates) {
  static constexpr Op kOps[] = {Op::And, Op::Or, Op::Xor, Op::Not, Op::And, Op::Or};
  const std::size_t inputs = n_std + n_wit;
  std::vector<Gate> gs;
  for (std::size_t k = 0; k < gates; ++k) {
    const std::size_t avail = inputs + k;
    const Op op = kOps[rng() % std::size(kOps)];
    const auto a = static_cast<Circuit::Node>(rng() % avail);
    const auto b = static_cast<Circuit::Node>(op == Op::Not ? 0 : rng() % avail);
    gs.push_back(Gate{op, a, b});
  }
  const auto out = static_cast<Circuit::Node>(inputs + gates - 1);
  return Circuit(std::move(name), n_std, n_wit, std::move(gs), {out});
}

Adversary mask_image(const Adversary& d, const Generator& g) {
  auto member = image_indicator(g);
  for (auto& v : member) v = !v;
  const Circuit outside = subset_acceptor("outside", g.l(), member);
  const std::size_t k = d.circuit.n_wit();
  CircuitBuilder cb(g.l(), k);
  auto in = cb.inputs(1, g.l());
  auto a = cb.embed(d.circuit, in, cb.witnesses(1, k))[0];
  auto o = cb.embed(outside, in, {})[0];
  return Adversary{cb.build(d.name() + "&~img", {cb.land(a, o)}), d.mode};
}

std::vector<FunctionTable> all_one_bit_stretchers(std::size_t n) {
  const std::size_t points = std::size_t{1} << n;
  const std::uint64_t outs = 1ull << (n + 1);
  std::vector<FunctionTable> result;
  std::vector<std::uint64_t> v(points, 0);
  while (true) {
    result.emplace_back(n, n + 1, v);
    std::size_t k = points;
    while (k > 0 && ++v[k - 1] == outs) v[--k] = 0;
    if (k == 0) break;
  }
  return result;
}

std::vector<StretchParams> stretch_layouts(std::size_t max_N) {
  const Rational cs[] = {Rational(1, 2), Rational(2, 3), Rational(9, 10)};
  std::vector<StretchParams> out;
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
  for (std::size_t N = 1; N <= max_N; ++N)
    for (const auto& c : cs) {
      const auto p = StretchParams::make(N, c);
      if (seen.emplace(p.N, p.m, p.n).second) out.push_back(p);
    }
  return out;
}

namespace {

struct Checker {
  const StretchSweepOptions& o;
  const Generator& b;
  const StretchParams& p;
  StretchSweepRow& row;
  StretchSweepResult& total;
  bool first = true;

  void check(const Adversary& d) {
    const StretchReduction r = stretch_reduction(d, b, p);
    if (o.observer) o.observer(d, b, p, r);
    const bool telescopes = r.cert.trace && r.cert.trace->telescopes();
    const Rational margin = r.cert.clauses[0].lhs - r.cert.clauses[0].rhs;
    if (first || margin < row.min_margin) row.min_margin = margin;
    first = false;
    if (!r.cert.clauses[0].holds() || !r.cert.clauses[1].holds()) {
      ++row.failures;
      if (total.failure_detail.size() < 8)
        total.failure_detail.push_back(row.base + " N=" + std::to_string(p.N) + " adversary " + d.name());
    }
    row.telescoping_failures += !telescopes;
  }
};

}  // namespace

StretchSweepResult stretch_sweep(const StretchSweepOptions& o) {
  StretchSweepResult total;
  std::seed_seq seq{static_cast<std::uint32_t>(o.seed), static_cast<std::uint32_t>(o.seed >> 32)};
  std::mt19937_64 rng(seq);
  for (const auto& p : stretch_layouts(o.max_N)) {
    if (std::find(o.base_n.begin(), o.base_n.end(), p.n) == o.base_n.end()) continue;
    for (const auto& table : all_one_bit_stretchers(p.n)) {
      std::string label = "b[";
      for (std::size_t x = 0; x < table.domain_size(); ++x)
        label += (x ? "," : "") + BitString::from_code(table(x), p.n + 1).str();
      label += "]";
      const Generator b = Generator::from_table(label, table);
      const Generator g = stretch(b, p);
      const std::size_t l = g.l();
      StretchSweepRow row{label, p, 0, 0, 0, 0, false, Rational(0)};
      Checker chk{o, b, p, row, total};

      if (l <= o.max_subset_len) {
        const auto image = image_indicator(g);
        std::vector<std::uint64_t> outside;
        for (std::uint64_t y = 0; y < image.size(); ++y)
          if (!image[y]) outside.push_back(y);
        const std::size_t K = outside.size();
        auto run_subset = [&](std::uint64_t mask) {
          std::vector<std::uint8_t> member(image.size(), 0);
          for (std::size_t k = 0; k < K; ++k)
            if ((mask >> k) & 1u) member[outside[k]] = 1;
          chk.check(Adversary{subset_acceptor("S" + std::to_string(mask), l, member), EvalMode::Det});
          ++row.subsets;
        };
        if (K <= o.exhaustive_complement) {
          row.exhaustive = true;
          for (std::uint64_t mask = 1; mask < (1ull << K); ++mask) run_subset(mask);
        } else {
          for (std::size_t k = 0; k < K; ++k) run_subset(1ull << k);
          run_subset(K >= 64 ? ~0ull : (1ull << K) - 1);
          for (std::size_t r = 0; r < o.random_subsets; ++r) {
            std::uint64_t mask = rng() & (K >= 64 ? ~0ull : (1ull << K) - 1);
            if (mask == 0) mask = 1;
            run_subset(mask);
          }
        }
      }

      for (std::size_t r = 0; r < o.random_circuits; ++r) {
        // Redraw until the masked circuit accepts something.
        for (int attempt = 0; attempt < 64; ++attempt) {
          const std::size_t k = rng() % (o.max_witness + 1);
          const std::size_t gates = 3 + rng() % 10;
          Adversary raw{random_circuit(rng, "R" + std::to_string(r), l, k, gates), EvalMode::Nondet};
          Adversary d = mask_image(raw, g);
          if (accept_random(d) == 0) continue;
          chk.check(d);
          ++row.circuits;
          break;
        }
      }

      total.adversaries += row.subsets + row.circuits;
      total.circuits += row.circuits;
      total.failures += row.failures;
      total.telescoping_failures += row.telescoping_failures;
      total.rows.push_back(std::move(row));
    }
  }
  return total;
}

}  // namespace demibit

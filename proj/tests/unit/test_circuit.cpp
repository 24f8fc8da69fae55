#include <gtest/gtest.h>

#include <random>

#include "demibit/circuit.hpp"
#include "demibit/circuit_builder.hpp"
#include "demibit/errors.hpp"
#include "demibit/experiments.hpp"
#include "demibit/netlist.hpp"
#include "oracle/oracle.hpp"

using namespace demibit;

namespace {

Circuit witness_echo() { return parse_circuit("circuit echo in=1 wit=1 out=w1"); }

}  // namespace

TEST(BitString, OneBasedIndexingAndNegativeIndices) {
  auto x = BitString::parse("1011");
  EXPECT_EQ(x.at(1), 1);
  EXPECT_EQ(x.at(2), 0);
  EXPECT_EQ(x.at(-1), 1);
  EXPECT_EQ(x.at(-3), 0);
  EXPECT_THROW(x.at(0), ArityError);
  EXPECT_THROW(x.at(5), ArityError);
  EXPECT_EQ(x.slice(2, 3).str(), "01");
  EXPECT_TRUE(x.slice(3, 2).empty());
  EXPECT_EQ(x.code(), 0b1011u);
  EXPECT_EQ(BitString::from_code(5, 4).str(), "0101");
  EXPECT_EQ((BitString::parse("10") + BitString::parse("01")).str(), "1001");
  EXPECT_THROW(BitString::parse("10a"), ArityError);
}

TEST(BitString, CodeHelpersMatchStrings) {
  for (std::uint64_t c = 0; c < 64; ++c) {
    auto s = BitString::from_code(c, 6);
    for (std::size_t i = 1; i <= 6; ++i) EXPECT_EQ(code_bit(c, 6, i), s.at(static_cast<long>(i)));
    EXPECT_EQ(code_slice(c, 6, 2, 4), s.slice(2, 4).code());
    EXPECT_EQ(code_concat(c, 3, 2), (s + BitString::from_code(3, 2)).code());
  }
}

TEST(Netlist, IdentityCircuit) {
  auto c = parse_circuit("circuit id in=1 wit=0 out=i1");
  EXPECT_EQ(c.n_std(), 1u);
  EXPECT_EQ(c.n_wit(), 0u);
  EXPECT_EQ(c.size(), 1u);
}

TEST(Netlist, AndCircuitSizeCountsInputs) {
  auto c = parse_circuit("circuit and2 in=2 wit=0 out=g1\ng1 = AND i1 i2\n");
  EXPECT_EQ(c.size(), 3u);
}

TEST(Netlist, ForwardReferenceRejectedWithLine) {
  try {
    parse_circuit("circuit bad in=2 wit=0 out=g2\ng1 = AND i1 g2\ng2 = NOT g1\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Netlist, SyntaxErrors) {
  EXPECT_THROW(parse_circuit(""), ParseError);
  EXPECT_THROW(parse_circuit("circuit x in=1 wit=0"), ParseError);
  EXPECT_THROW(parse_circuit("circuit x in=1 wit=0 out=g1\ng1 = NAND i1 i1"), ParseError);
  EXPECT_THROW(parse_circuit("circuit x in=1 wit=0 out=g1\ng1 = NOT i2"), ParseError);
  EXPECT_THROW(parse_circuit("circuit x in=1 wit=0 out=g1\ng1 = NOT w1"), ParseError);
  EXPECT_THROW(parse_circuit("circuit x in=1 wit=0 out=g1\ng1 = AND i1"), ParseError);
  EXPECT_THROW(parse_circuit("circuit x in=1 wit=0 out=g9\ng1 = NOT i1"), ParseError);
  EXPECT_THROW(parse_circuit("circuit x in=1 wit=0 out=g1\ng1 = NOT i1\ng1 = NOT i1"), ParseError);
}

TEST(Netlist, CommentsAndRoundTrip) {
  auto c = parse_circuit("# header\ncircuit f in=2 wit=1 out=g1,g3  # flag, value\n"
                         "g1 = CONST1\ng2 = XOR i1 w1\ng3 = OR g2 i2\n");
  EXPECT_EQ(c.outputs().size(), 2u);
  auto again = parse_circuit(to_netlist(c));
  EXPECT_EQ(again, c);
}

TEST(Eval, RawTruthTables) {
  auto id = parse_circuit("circuit id in=1 wit=0 out=i1");
  auto and2 = parse_circuit("circuit a in=2 wit=0 out=g1\ng1 = AND i1 i2");
  auto xor2 = parse_circuit("circuit x in=2 wit=0 out=g1\ng1 = XOR i1 i2");
  EXPECT_EQ(eval_raw(id, BitString::parse("1"), {}).str(), "1");
  EXPECT_EQ(eval_raw(and2, BitString::parse("10"), {}).str(), "0");
  EXPECT_EQ(eval_raw(xor2, BitString::parse("11"), {}).str(), "0");
  EXPECT_THROW(eval_raw(and2, BitString::parse("1"), {}), ArityError);
  EXPECT_THROW(eval_raw(id, BitString::parse("1"), BitString::parse("0")), ArityError);
}

TEST(Eval, NondetAndCoNondetWitnessEcho) {
  auto c = witness_echo();
  for (auto x : {"0", "1"}) {
    EXPECT_EQ(eval(c, EvalMode::Nondet, BitString::parse(x)), TriBit::One);
    EXPECT_EQ(eval(c, EvalMode::CoNondet, BitString::parse(x)), TriBit::Zero);
  }
  EXPECT_THROW(eval(c, EvalMode::Det, BitString::parse("0")), ArityError);
}

TEST(Eval, FunctionComputing) {
  auto bot = parse_circuit("circuit f in=1 wit=1 out=g1,w1\ng1 = CONST1");
  EXPECT_EQ(eval(bot, EvalMode::FuncComputing, BitString::parse("0")), TriBit::Bot);
  auto copy = parse_circuit("circuit f in=1 wit=1 out=g1,i1\ng1 = CONST1");
  EXPECT_EQ(eval(copy, EvalMode::FuncComputing, BitString::parse("1")), TriBit::One);
  auto never = parse_circuit("circuit f in=1 wit=1 out=g1,i1\ng1 = CONST0");
  EXPECT_THROW(eval(never, EvalMode::FuncComputing, BitString::parse("1")), TotalityError);
  EXPECT_EQ(eval(never, EvalMode::FuncComputing, BitString::parse("1"), Totality::TreatAsBot), TriBit::Bot);
  EXPECT_THROW(eval(witness_echo(), EvalMode::FuncComputing, BitString::parse("1")), ArityError);
  // flag = w1: only the w1=1 branch is valid, and it reports x1.
  auto partial = parse_circuit("circuit f in=1 wit=1 out=w1,i1");
  EXPECT_EQ(eval(partial, EvalMode::FuncComputing, BitString::parse("0")), TriBit::Zero);
}

TEST(Eval, CapIsEnforced) {
  const auto old = enumeration_cap();
  set_enumeration_cap(3);
  auto c = parse_circuit("circuit w in=2 wit=2 out=w1");
  EXPECT_THROW(truth_table(c, EvalMode::Nondet), CapExceeded);
  set_enumeration_cap(old);
  EXPECT_NO_THROW(truth_table(c, EvalMode::Nondet));
}

TEST(Eval, FirstWitnessIsLexicographic) {
  auto c = parse_circuit("circuit w in=1 wit=2 out=g1\ng1 = OR w1 w2");
  auto w = first_witness(c, BitString::parse("0"), 1);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->str(), "01");
  EXPECT_EQ(first_witness(c, BitString::parse("0"), 0)->str(), "00");
}

class RandomCircuits : public ::testing::TestWithParam<int> {};

TEST_P(RandomCircuits, MatchScalarOracleInEveryMode) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(GetParam()));
  for (int round = 0; round < 40; ++round) {
    const std::size_t ns = 1 + rng() % 5, nw = rng() % 4;
    auto c = random_circuit(rng, "r", ns, nw, 2 + rng() % 10);
    for (auto mode : {EvalMode::Nondet, EvalMode::CoNondet}) {
      auto t = truth_table(c, mode);
      for (std::uint64_t x = 0; x < t.size(); ++x)
        ASSERT_EQ(static_cast<int>(t[x]), oracle::answer(c, mode, x));
    }
    if (nw == 0) {
      auto t = truth_table(c, EvalMode::Det);
      auto tn = truth_table(c, EvalMode::Nondet);
      auto tc = truth_table(c, EvalMode::CoNondet);
      EXPECT_EQ(t, tn);
      EXPECT_EQ(t, tc);
    }
    // Duality: CoNondet(c) = not Nondet(not c).
    auto neg = negate(c, "neg");
    auto co = truth_table(c, EvalMode::CoNondet);
    auto nd = truth_table(neg, EvalMode::Nondet);
    for (std::size_t x = 0; x < co.size(); ++x)
      EXPECT_EQ(static_cast<int>(co[x]), 1 - static_cast<int>(nd[x]));
    // Function-computing: pair the circuit with a second random output.
    auto v = random_circuit(rng, "v", ns, nw, 2 + rng() % 6);
    CircuitBuilder bld(ns, nw);
    auto in = bld.inputs(1, ns);
    auto wi = bld.witnesses(1, nw);
    auto flag = bld.embed(c, in, wi)[0];
    auto value = bld.embed(v, in, wi)[0];
    auto f = bld.build("fc", {flag, value});
    for (std::uint64_t x = 0; x < (1ull << ns); ++x) {
      const int want = oracle::answer(f, EvalMode::FuncComputing, x);
      const auto xs = BitString::from_code(x, ns);
      if (want == oracle::kNoBranch) {
        EXPECT_THROW(eval(f, EvalMode::FuncComputing, xs), TotalityError);
        EXPECT_EQ(eval(f, EvalMode::FuncComputing, xs, Totality::TreatAsBot), TriBit::Bot);
      } else {
        EXPECT_EQ(static_cast<int>(eval(f, EvalMode::FuncComputing, xs)), want);
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomCircuits, ::testing::Values(1, 2, 3, 4));

TEST(Eval, ReferentiallyTransparent) {
  auto c = parse_circuit("circuit g in=2 wit=1 out=g2\ng1 = XOR i1 w1\ng2 = AND g1 i2");
  auto a = eval_raw(c, BitString::parse("11"), BitString::parse("0"));
  for (int k = 0; k < 5; ++k) EXPECT_EQ(eval_raw(c, BitString::parse("11"), BitString::parse("0")), a);
}

TEST(Builder, TableCircuitsAndAcceptors) {
  std::vector<std::uint64_t> table{3, 0, 2, 1};
  auto c = circuit_from_table("t", 2, 2, table);
  EXPECT_EQ(output_table(c), table);
  std::vector<std::uint8_t> member{0, 1, 1, 0, 0, 0, 0, 1};
  auto a = subset_acceptor("s", 3, member);
  for (std::uint64_t y = 0; y < 8; ++y) EXPECT_EQ(oracle::answer(a, EvalMode::Det, y), member[y]);
}

TEST(Builder, EmbedWiresWitnesses) {
  auto sub = parse_circuit("circuit s in=1 wit=1 out=g1\ng1 = AND i1 w1");
  CircuitBuilder b(1, 1);
  auto in = b.inputs(1, 1);
  auto wi = b.witnesses(1, 1);
  auto out = b.embed(sub, in, wi);
  auto c = b.build("e", out);
  for (std::uint64_t x = 0; x < 2; ++x)
    for (std::uint64_t w = 0; w < 2; ++w) EXPECT_EQ(oracle::raw(c, x, w)[0], static_cast<int>(x & w));
  EXPECT_THROW(b.embed(sub, in, {}), ArityError);
}

TEST(Circuit, ConstructorValidates) {
  EXPECT_THROW(Circuit("c", 1, 0, {}, {}), ArityError);
  EXPECT_THROW(Circuit("c", 1, 0, {Gate{Op::Not, 1, 0}}, {1}), ArityError);
  EXPECT_THROW(Circuit("c", 1, 0, {}, {4}), ArityError);
}
